#pragma once

// Dormand-Prince 5(4) explicit Runge-Kutta with adaptive step control.
// The independent variable is real; the state may be real or complex.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "rell/errors.hpp"

namespace rell {

template <class T, std::size_t N>
using OdeState = std::array<T, N>;

struct StepControl {
  double tol = 1e-12;       // mixed absolute/relative tolerance per component
  double h_init = 0;        // 0 picks |s1 - s0| / 100
  double h_min = 1e-14;     // relative to the interval length
  long max_steps = 2'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double last_step = 0;  // magnitude of the final accepted step size proposal
};

namespace detail {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(std::complex<double> x) { return std::abs(x); }

}  // namespace detail

/// Integrate y' = f(s, y) from s0 to s1 (either direction) and return y(s1).
/// f may throw; the exception propagates unchanged.
template <class T, std::size_t N, class Rhs>
OdeState<T, N> dp5_integrate(const Rhs& f, double s0, double s1, OdeState<T, N> y,
                             const StepControl& ctl = {}, OdeStats* stats = nullptr) {
  using namespace detail;
  using State = OdeState<T, N>;
  const double span = s1 - s0;
  if (span == 0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double length = std::abs(span);
  double h = ctl.h_init > 0 ? ctl.h_init : length / 100;
  h = std::min(h, length);
  const double h_floor = ctl.h_min * std::max(1.0, length);

  auto axpy = [](const State& base, double h_, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = base;
    for (std::size_t i = 0; i < N; ++i) {
      T acc{};
      for (const auto& [coef, k] : terms) acc += coef * (*k)[i];
      out[i] += h_ * acc;
    }
    return out;
  };

  OdeStats local;
  double s = s0;
  State k1 = f(s, y);
  ++local.evaluations;
  bool done = false;
  while (!done) {
    if (local.accepted + local.rejected >= ctl.max_steps) {
      throw NoConvergence("ODE integration exceeded the step budget");
    }
    double remaining = length - dir * (s - s0);
    bool last = false;
    const double h_unclipped = h;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;
    const State k2 = f(s + c2 * hs, axpy(y, hs, {{a21, &k1}}));
    const State k3 = f(s + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(s + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(s + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(s + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(s + hs, y_new);
    local.evaluations += 6;

    double err = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const T e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = ctl.tol * (1 + std::max(abs_of(y[i]), abs_of(y_new[i])));
      err = std::max(err, abs_of(e) / scale);
    }
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1) {
      s = last ? s1 : s + hs;
      y = y_new;
      k1 = k7;
      ++local.accepted;
      done = last;
      const double grow = err == 0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h *= std::max(1.0, grow);
      if (last) h = std::max(h, h_unclipped);
    } else {
      ++local.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < h_floor) throw NoConvergence("ODE step size fell below the floor");
    }
  }
  if (stats) {
    stats->accepted += local.accepted;
    stats->rejected += local.rejected;
    stats->evaluations += local.evaluations;
    stats->last_step = h;
  }
  return y;
}

}  // namespace rell
