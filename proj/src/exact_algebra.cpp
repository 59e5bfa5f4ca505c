#include "rell/exact_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rell/errors.hpp"

namespace rell {

Poly poly_from_integers(const std::vector<long>& coeffs) {
  std::vector<FieldElement> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return Poly(std::move(c));
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const FieldElement c = p.coeff(i);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (i >= 1) os << "*t";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

std::string to_string(const RatFunc& f) {
  return "[" + to_string(f.numerator()) + "] / [" + to_string(f.denominator()) + "]";
}

std::complex<double> eval_complex(const Poly& p, std::complex<double> t) {
  std::complex<double> acc = 0.0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + it->to_complex();
  return acc;
}

std::complex<double> eval_complex(const RatFunc& f, std::complex<double> t) {
  return eval_complex(f.numerator(), t) / eval_complex(f.denominator(), t);
}

namespace {

using cld = std::complex<long double>;

// Square-free decomposition (Yun): f = lc * prod_i g_i^i with g_i monic, square-free, coprime.
std::vector<std::pair<Poly, int>> squarefree(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  const Poly fm = f.monic();
  const Poly a0 = gcd(fm, fm.derivative());
  Poly b = fm / a0;
  Poly c = fm.derivative() / a0;
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly a = gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    Poly bn = b / a;
    c = d / a;
    b = bn;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

std::vector<cld> aberth_roots(const Poly& g) {
  const int n = g.degree();
  std::vector<cld> coeff(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) coeff[static_cast<std::size_t>(i)] = g.coeff(i).to_complex_ld();
  auto eval = [&](cld z, cld& dp) {
    cld p = coeff.back();
    dp = 0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + coeff[static_cast<std::size_t>(i)];
    }
    return p;
  };
  long double bound = 0;
  for (int i = 0; i < n; ++i) {
    bound = std::max(bound, std::abs(coeff[static_cast<std::size_t>(i)] / coeff.back()));
  }
  bound += 1;
  std::vector<cld> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const long double ang = 2.0L * M_PIl * k / n + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(bound * 0.5L, ang);
  }
  for (int iter = 0; iter < 800; ++iter) {
    long double max_step = 0;
    for (int k = 0; k < n; ++k) {
      cld dp;
      const cld p = eval(z[static_cast<std::size_t>(k)], dp);
      if (std::abs(p) == 0) continue;
      const cld ratio = p / dp;
      cld sum = 0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0L / (z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)]);
      }
      const cld step = ratio / (1.0L - ratio * sum);
      z[static_cast<std::size_t>(k)] -= step;
      max_step = std::max(max_step, std::abs(step) / (1 + std::abs(z[static_cast<std::size_t>(k)])));
    }
    if (max_step < 1e-17L) break;
  }
  for (cld& r : z) {
    for (int it = 0; it < 3; ++it) {
      cld dp;
      const cld p = eval(r, dp);
      if (std::abs(dp) > 0) r -= p / dp;
    }
  }
  return z;
}

// Common denominator of every rational coordinate of p.
mpz_class coordinate_denominator_lcm(const Poly& p) {
  mpz_class l = 1;
  for (const FieldElement& c : p.coefficients()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.a().get_den().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.b().get_den().get_mpz_t());
  }
  return l;
}

// Roots in Q(w) of a square-free polynomial; all of them, or throw.
std::vector<FieldElement> field_roots(const Poly& g) {
  if (g.degree() == 1) return {-g.coeff(0) / g.coeff(1)};
  // With Eisenstein-integer coefficients, lead * root is an Eisenstein integer.
  const Poly gi = g * FieldElement(Rational(coordinate_denominator_lcm(g)));
  const FieldElement lead = gi.leading();
  const cld lead_c = lead.to_complex_ld();
  std::vector<FieldElement> found;
  for (const cld& z : aberth_roots(gi)) {
    const cld beta = lead_c * z;
    const long double bcoord = beta.imag() * 2.0L / std::sqrt(3.0L);
    const long double acoord = beta.real() - bcoord / 2.0L;
    const long double ar = std::round(acoord);
    const long double br = std::round(bcoord);
    const long double scale = 1e-6L * (1 + std::abs(beta));
    if (std::abs(ar - acoord) > scale || std::abs(br - bcoord) > scale) continue;
    if (std::abs(ar) > 9e18L || std::abs(br) > 9e18L) continue;
    const FieldElement cand =
        FieldElement(Rational(static_cast<long>(ar)), Rational(static_cast<long>(br))) / lead;
    if (!gi(cand).is_zero()) continue;
    if (std::find(found.begin(), found.end(), cand) == found.end()) found.push_back(cand);
  }
  if (static_cast<int>(found.size()) != g.degree()) {
    throw IrreducibleOverField("polynomial " + to_string(g) +
                               " does not split into linear factors over Q(sqrt(-3))");
  }
  return found;
}

}  // namespace

Factorization factor(const Poly& f) {
  if (f.is_zero()) throw Error("factor of the zero polynomial");
  Factorization out;
  out.constant = f.leading();
  if (f.degree() == 0) return out;
  for (const auto& [g, mult] : squarefree(f)) {
    for (const FieldElement& r : field_roots(g)) out.roots.emplace_back(r, mult);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

Poly expand(const Factorization& fac) {
  Poly p(fac.constant);
  for (const auto& [root, mult] : fac.roots) {
    const Poly lin(std::vector<FieldElement>{-root, FieldElement(1)});
    for (int i = 0; i < mult; ++i) p *= lin;
  }
  return p;
}

int pole_order(const RatFunc& f, const FieldElement& c) {
  if (!f.denominator()(c).is_zero()) return 0;
  const int v = f.denominator().shifted(c).valuation();
  return v;
}

FieldElement residue_at(const RatFunc& f, const FieldElement& pole) {
  if (pole_order(f, pole) == 0) throw NotAPole("residue requested at " + pole.str() + ", not a pole");
  return laurent_at(f, pole, -1).coefficient(-1);
}

RatFunc PartialFractions::resum() const {
  RatFunc acc(polynomial_part);
  for (const PoleTerm& term : terms) {
    Poly den(FieldElement(1));
    const Poly lin(std::vector<FieldElement>{-term.pole, FieldElement(1)});
    for (int i = 0; i < term.order; ++i) den *= lin;
    acc += RatFunc(Poly(term.coefficient), den);
  }
  return acc;
}

PartialFractions partial_fractions(const RatFunc& f) {
  PartialFractions out;
  auto [q, r] = divrem(f.numerator(), f.denominator());
  out.polynomial_part = q;
  if (f.denominator().degree() == 0) return out;
  const Factorization fac = factor(f.denominator());
  for (const auto& [pole, mult] : fac.roots) {
    const LaurentSeries<FieldElement> ls = laurent_at(f, pole, -1);
    for (int k = mult; k >= 1; --k) {
      const FieldElement c = ls.coefficient(-k);
      if (!c.is_zero()) out.terms.push_back({pole, k, c});
    }
  }
  return out;
}

}  // namespace rell
