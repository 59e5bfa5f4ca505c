#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "rell/field.hpp"
#include "rell/polynomial.hpp"

namespace rell {

using Poly = Polynomial<FieldElement>;
using RatFunc = RationalFunction<FieldElement>;

/// Polynomial with integer coefficients listed by ascending degree.
Poly poly_from_integers(const std::vector<long>& coeffs);

std::string to_string(const Poly& p);
std::string to_string(const RatFunc& f);

/// Evaluate with every coefficient embedded in C.
std::complex<double> eval_complex(const Poly& p, std::complex<double> t);
std::complex<double> eval_complex(const RatFunc& f, std::complex<double> t);

/// Truncated Laurent series sum_{i} coeffs[i] * tau^(valuation + i).
template <class F>
struct LaurentSeries {
  int valuation = 0;
  std::vector<F> coeffs;

  F coefficient(int power) const {
    const int i = power - valuation;
    if (i < 0 || i >= static_cast<int>(coeffs.size())) return F{};
    return coeffs[static_cast<std::size_t>(i)];
  }
};

/// First n coefficients of num/den as a power series, den(0) != 0.
template <class F>
std::vector<F> series_divide(const std::vector<F>& num, const std::vector<F>& den, int n) {
  std::vector<F> out(static_cast<std::size_t>(n));
  const F inv = F(1) / den.at(0);
  for (int k = 0; k < n; ++k) {
    F acc = k < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(k)] : F{};
    for (int j = 1; j <= k && j < static_cast<int>(den.size()); ++j) {
      acc -= den[static_cast<std::size_t>(j)] * out[static_cast<std::size_t>(k - j)];
    }
    out[static_cast<std::size_t>(k)] = acc * inv;
  }
  return out;
}

/// First n coefficients of sqrt(f) for a series with f[0] = 1, normalized so sqrt(f)(0) = 1.
template <class F>
std::vector<F> series_sqrt_unit(const std::vector<F>& f, int n) {
  std::vector<F> g(static_cast<std::size_t>(n));
  if (n == 0) return g;
  g[0] = F(1);
  const F half = F(1) / F(2);
  for (int k = 1; k < n; ++k) {
    F acc = k < static_cast<int>(f.size()) ? f[static_cast<std::size_t>(k)] : F{};
    for (int j = 1; j < k; ++j) acc -= g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
    g[static_cast<std::size_t>(k)] = acc * half;
  }
  return g;
}

/// Laurent expansion of f at t = c in tau = t - c, covering powers up to `max_power`.
template <class F>
LaurentSeries<F> laurent_at(const RationalFunction<F>& f, const F& c, int max_power) {
  LaurentSeries<F> out;
  if (f.is_zero()) {
    out.valuation = max_power + 1;
    return out;
  }
  const Polynomial<F> num = f.numerator().shifted(c);
  const Polynomial<F> den = f.denominator().shifted(c);
  const int vn = num.valuation();
  const int vd = den.valuation();
  out.valuation = vn - vd;
  const int n = max_power - out.valuation + 1;
  if (n <= 0) return out;
  std::vector<F> nc(num.coefficients().begin() + vn, num.coefficients().end());
  std::vector<F> dc(den.coefficients().begin() + vd, den.coefficients().end());
  out.coeffs = series_divide(nc, dc, n);
  return out;
}

/// Laurent expansion of f at infinity in tau = 1/t, covering powers of tau up to `max_power`.
/// The valuation equals deg(den) - deg(num).
template <class F>
LaurentSeries<F> laurent_at_infinity(const RationalFunction<F>& f, int max_power) {
  LaurentSeries<F> out;
  if (f.is_zero()) {
    out.valuation = max_power + 1;
    return out;
  }
  std::vector<F> nc = f.numerator().coefficients();
  std::vector<F> dc = f.denominator().coefficients();
  std::reverse(nc.begin(), nc.end());
  std::reverse(dc.begin(), dc.end());
  out.valuation = f.denominator().degree() - f.numerator().degree();
  const int n = max_power - out.valuation + 1;
  if (n <= 0) return out;
  out.coeffs = series_divide(nc, dc, n);
  return out;
}

struct Factorization {
  FieldElement constant;
  /// Distinct roots in ascending (a, b) order with their multiplicities.
  std::vector<std::pair<FieldElement, int>> roots;
};

/// Complete factorization into linear factors over Q(sqrt(-3)).
/// Throws IrreducibleOverField if some factor of degree >= 2 has no root in the field.
Factorization factor(const Poly& f);

/// Re-expand a factorization; inverse of factor().
Poly expand(const Factorization& fac);

/// Order of the pole of f at c (0 when c is not a pole).
int pole_order(const RatFunc& f, const FieldElement& c);

/// Coefficient of 1/(t - pole) in the Laurent expansion of f at pole.
FieldElement residue_at(const RatFunc& f, const FieldElement& pole);

struct PoleTerm {
  FieldElement pole;
  int order = 0;  // power of 1/(t - pole)
  FieldElement coefficient;
};

struct PartialFractions {
  Poly polynomial_part;
  std::vector<PoleTerm> terms;

  RatFunc resum() const;
};

PartialFractions partial_fractions(const RatFunc& f);

}  // namespace rell
