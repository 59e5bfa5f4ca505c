#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "rell/errors.hpp"

namespace rell {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0;
  int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }

template <class T, class Fn>
QuadratureResult<T> gk15(const Fn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kron = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
    const T sum = f(center - dx) + f(center + dx);
    kron += sum * kKronrodWeights[static_cast<std::size_t>(i)];
    if (i % 2 == 1) gauss += sum * kGaussWeights[static_cast<std::size_t>(i / 2)];
  }
  QuadratureResult<T> r;
  r.value = kron * half;
  r.error = magnitude((kron - gauss) * half);
  r.intervals = 1;
  return r;
}

}  // namespace detail

/// Integrate f over [a, b] until the summed Kronrod-Gauss error estimate is below abs_tol.
template <class T, class Fn>
QuadratureResult<T> integrate_adaptive(const Fn& f, double a, double b, double abs_tol,
                                       int max_intervals = 4000) {
  struct Piece {
    double a, b;
    QuadratureResult<T> r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> heap;
  QuadratureResult<T> first = detail::gk15<T>(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push({a, b, first});
  int count = 1;
  while (err > abs_tol) {
    if (count >= max_intervals) {
      throw NoConvergence("adaptive quadrature exceeded the interval budget");
    }
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NoConvergence("adaptive quadrature reached floating-point resolution");
    }
    QuadratureResult<T> left = detail::gk15<T>(f, worst.a, mid);
    QuadratureResult<T> right = detail::gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.r.value;
    err += left.error + right.error - worst.r.error;
    heap.push({worst.a, mid, left});
    heap.push({mid, worst.b, right});
    ++count;
    // The running error sum drifts through cancellation; resynchronize now and then.
    if (count % 64 == 0) {
      auto copy = heap;
      err = 0;
      while (!copy.empty()) {
        err += copy.top().r.error;
        copy.pop();
      }
    }
  }
  QuadratureResult<T> out;
  out.value = total;
  out.error = err;
  out.intervals = count;
  return out;
}

/// Integral over [0, inf) of g(z) for integrands decaying at least like z^(-3/2).
/// Uses z = a (1 - x^2) / x^2, the map u = sqrt(z + a) = sqrt(a)/x, which turns the
/// half-line into (0, 1] and removes the sqrt(z + a) endpoint factor.
template <class T, class Fn>
QuadratureResult<T> integrate_half_line(const Fn& g, double scale, double abs_tol) {
  auto mapped = [&](double x) -> T {
    if (x <= 0) return T{};
    const double x2 = x * x;
    const double z = scale * (1 - x2) / x2;
    const double jac = 2 * scale / (x2 * x);
    return g(z) * jac;
  };
  return integrate_adaptive<T>(mapped, 0.0, 1.0, abs_tol);
}

}  // namespace rell
