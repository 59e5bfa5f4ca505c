#include "rell/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "rell/errors.hpp"
#include "rell/quadrature.hpp"

namespace rell::potential {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kAxisExclusion = 1e-8;

template <class S, std::size_t N>
struct SmallVec {
  std::array<S, N> v{};

  SmallVec& operator+=(const SmallVec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  friend SmallVec operator+(SmallVec a, const SmallVec& b) { return a += b; }
  friend SmallVec operator-(SmallVec a, const SmallVec& b) {
    for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend SmallVec operator*(SmallVec a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }
  friend double magnitude(const SmallVec& x) {
    double m = 0;
    for (const auto& c : x.v) m = std::max(m, std::abs(c));
    return m;
  }
};

}  // namespace

PotentialPoint PotentialPoint::make(cplx q1, cplx q2) {
  PotentialPoint p{q1, q2, q2};
  if (q1 != cplx(0.0)) p.r = std::sqrt(q1 * q1 + q2 * q2);
  return p;
}

std::vector<FieldElement> sigma_axis_candidates() {
  // 2 e^{i k pi/3} for k = 1..6 in the basis a + b w, w = e^{i pi/3}.
  return {FieldElement(0, 0),  FieldElement(0, 2),  FieldElement(-2, 2), FieldElement(-2, 0),
          FieldElement(0, -2), FieldElement(2, -2), FieldElement(2, 0)};
}

double distance_to_axis_candidates(cplx q2) {
  double d = std::abs(q2);
  for (int k = 1; k <= 6; ++k) d = std::min(d, std::abs(q2 - std::polar(2.0, k * M_PI / 3.0)));
  return d;
}

namespace {

void check_input(const PotentialPoint& p) {
  if (std::abs(p.q2) < kAxisExclusion) throw SingularInput("J requires q2 != 0");
  if (std::abs(p.q1) == 0 && distance_to_axis_candidates(p.q2) < kAxisExclusion) {
    throw SingularInput("J evaluated at a lattice-collapse candidate on the axis q1 = 0");
  }
  if (std::abs(p.r) < kAxisExclusion) throw SingularInput("J requires r != 0");
}

// Integrand pieces after z = a (1 - x^2)/x^2 with a = 4/q2^2, c = q2^2/4:
//   J = int_0^1 2 sqrt(a) / sqrt(Q(x)) dx,  Q = a^2 (1-x^2)^2 + r a x^2 (1-x^2) + c x^4.
template <class S>
struct JIntegrand {
  S sqrt_a, a, c, r;

  explicit JIntegrand(const S& q1, const S& q2, const S& rr) : r(rr) {
    (void)q1;
    sqrt_a = S(2.0) / q2;
    a = sqrt_a * sqrt_a;
    c = q2 * q2 / S(4.0);
  }

  S quartic(double x) const {
    const double x2 = x * x;
    const double m = 1 - x2;
    return a * a * (m * m) + r * a * (x2 * m) + c * (x2 * x2);
  }
};

template <class S>
S eval_J_impl(const S& q1, const S& q2, const S& r, double tol) {
  const JIntegrand<S> in(q1, q2, r);
  auto f = [&](double x) -> S { return S(2.0) * in.sqrt_a / std::sqrt(in.quartic(x)); };
  return integrate_adaptive<S>(f, 0.0, 1.0, tol).value;
}

}  // namespace

cplx eval_J(const PotentialPoint& p, double tol) {
  check_input(p);
  const bool real = p.q1.imag() == 0 && p.q2.imag() == 0 && p.r.imag() == 0 && p.r.real() > 0;
  if (real) return eval_J_impl<double>(p.q1.real(), p.q2.real(), p.r.real(), tol);
  return eval_J_impl<cplx>(p.q1, p.q2, p.r, tol);
}

double eval_J(double q1, double q2, double tol) {
  return eval_J(PotentialPoint::make(q1, q2), tol).real();
}

Gradient grad_J(double q1, double q2, double tol) {
  const PotentialPoint p = PotentialPoint::make(q1, q2);
  check_input(p);
  const double r = p.r.real();
  const JIntegrand<double> in(q1, q2, r);
  using V3 = SmallVec<double, 3>;
  // Components: dJ/dr, dJ/da, dJ/dc with the other two held fixed.
  auto f = [&](double x) -> V3 {
    const double x2 = x * x;
    const double m = 1 - x2;
    const double Q = in.quartic(x);
    const double inv_sqrt = 1.0 / std::sqrt(Q);
    const double inv_32 = inv_sqrt / Q;
    V3 out;
    out.v[0] = -in.sqrt_a * in.a * x2 * m * inv_32;
    out.v[1] = inv_sqrt / in.sqrt_a - in.sqrt_a * (2 * in.a * m * m + r * x2 * m) * inv_32;
    out.v[2] = -in.sqrt_a * x2 * x2 * inv_32;
    return out;
  };
  const V3 d = integrate_adaptive<V3>(f, 0.0, 1.0, tol).value;
  Gradient g;
  g.dq1 = d.v[0] * q1 / r;
  g.dq2 = d.v[0] * q2 / r + d.v[1] * (-8.0 / (q2 * q2 * q2)) + d.v[2] * (q2 / 2.0);
  return g;
}

cplx sqrt_8_minus_cube(cplx t) { return cplx(0, -1) * std::sqrt(t * t * t - 8.0); }

cplx arccos_term(cplx t) { return std::acos(2.0 * kSqrt2 * std::pow(t, -1.5)); }

namespace {

// arccos(y) / sqrt(1 - y^2), continued analytically through y = 1.
double acos_ratio(double y) {
  const double u = y - 1;
  if (std::abs(u) < 0.5) {
    // (1 - y^2) G' - y G = -1  gives  g_n = -n g_{n-1} / (2n + 1) in powers of (y - 1).
    double g = 1;
    double sum = 1;
    double un = 1;
    for (int n = 1; n < 80; ++n) {
      g *= -static_cast<double>(n) / (2 * n + 1);
      un *= u;
      const double term = g * un;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  if (y < 1) return std::acos(y) / std::sqrt(1 - y * y);
  return std::acosh(y) / std::sqrt(y * y - 1);
}

}  // namespace

double axis_potential_printed(double t) {
  if (!(t > 0)) throw SingularInput("axis potential requires t > 0");
  const double y = 2 * kSqrt2 * std::pow(t, -1.5);
  // arccos(y)/sqrt(t^3 - 8) = G(y) t^{-3/2}, so the potential is sqrt(2) G(y) / sqrt(t).
  return kSqrt2 * acos_ratio(y) / std::sqrt(t);
}

cplx F1_closed(cplx q2) {
  const cplx cube = q2 * q2 * q2;
  if (std::abs(q2) < kAxisExclusion || std::abs(cube - 8.0) < 1e-8) {
    throw SingularInput("F1 closed form is singular at q2 = 0 and q2^3 = 8");
  }
  const cplx u = sqrt_8_minus_cube(q2);
  const cplx u5 = u * u * u * u * u;
  const cplx first = cplx(0, 1) * q2 * q2 * kSqrt2 * (cube - 32.0) * arccos_term(q2) / (4.0 * u5);
  const cplx second = (16.0 + cube) / ((8.0 - cube) * (8.0 - cube) * q2);
  return first - second;
}

cplx F1_quadrature(cplx q2, double tol) {
  const cplx cube = q2 * q2 * q2;
  if (std::abs(q2) < kAxisExclusion || std::abs(cube - 8.0) < 1e-8) {
    throw SingularInput("F1 requires q2 != 0 and q2^3 != 8");
  }
  if (q2.imag() == 0 && q2.real() > 0) {
    const double q = q2.real();
    auto g = [q](double z) { return -4 * z / (std::sqrt(z * q * q + 4) * std::pow(q + 2 * z, 3)); };
    return integrate_half_line<double>(g, 4.0 / (q * q), tol).value;
  }
  auto g = [q2](double z) -> cplx {
    return -4.0 * z / (std::sqrt(z * q2 * q2 + 4.0) * std::pow(q2 + 2.0 * z, 3));
  };
  return integrate_half_line<cplx>(g, std::abs(4.0 / (q2 * q2)), tol).value;
}

namespace {

// Snap a measured factor to p/q with q <= 12 when it agrees to 1e-9 relative.
double snap_simple_fraction(double x) {
  for (int q = 1; q <= 12; ++q) {
    const double p = std::round(x * q);
    if (p != 0 && std::abs(p / q - x) <= 1e-9 * std::abs(x)) return p / q;
  }
  return x;
}

}  // namespace

Calibration calibrate(double tol) {
  Calibration cal;
  double sum_p = 0;
  double sum_f = 0;
  for (double q2 : {2.5, 3.0, 3.5, 4.5, 5.5}) {
    CalibrationSample s;
    s.q2 = q2;
    s.potential_ratio = eval_J(0.0, q2, tol) / axis_potential_printed(q2);
    s.f1_ratio = F1_quadrature(q2, tol).real() / F1_closed(q2).real();
    sum_p += s.potential_ratio;
    sum_f += s.f1_ratio;
    cal.samples.push_back(s);
  }
  const double n = static_cast<double>(cal.samples.size());
  cal.potential_factor = snap_simple_fraction(sum_p / n);
  cal.f1_factor = snap_simple_fraction(sum_f / n);
  for (const auto& s : cal.samples) {
    cal.potential_spread = std::max(cal.potential_spread, std::abs(s.potential_ratio - cal.potential_factor));
    cal.f1_spread = std::max(cal.f1_spread, std::abs(s.f1_ratio - cal.f1_factor));
  }
  return cal;
}

const Calibration& calibration() {
  static const Calibration cal = calibrate();
  return cal;
}

double second_difference_step(double q2) {
  // Balances O(h^2) truncation against O(eps / h^2) cancellation.
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::abs(q2));
}

namespace {

OracleChainPoint chain_point(double q2, double tol, double h, double f1_factor) {
  if (h <= 0) h = second_difference_step(q2);
  OracleChainPoint p;
  p.q2 = q2;
  p.step = h;
  p.closed = f1_factor * F1_closed(q2).real();
  p.quadrature = F1_quadrature(q2, tol).real();
  const double jp = eval_J(h, q2, tol);
  const double j0 = eval_J(0.0, q2, tol);
  const double jm = eval_J(-h, q2, tol);
  p.finite_diff = (jp - 2 * j0 + jm) / (h * h);
  return p;
}

}  // namespace

std::vector<OracleChainPoint> f1_oracle_chain(const std::vector<double>& q2s, double tol, double h) {
  const double factor = calibration().f1_factor;
  std::vector<OracleChainPoint> out(q2s.size());
  const long n = static_cast<long>(q2s.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = chain_point(q2s[static_cast<std::size_t>(i)], tol, h, factor);
  }
  return out;
}

std::vector<OracleChainPoint> f1_oracle_chain_serial(const std::vector<double>& q2s, double tol,
                                                     double h) {
  const double factor = calibration().f1_factor;
  std::vector<OracleChainPoint> out;
  out.reserve(q2s.size());
  for (double q2 : q2s) out.push_back(chain_point(q2, tol, h, factor));
  return out;
}

std::vector<double> eval_J_axis_batch(const std::vector<double>& q2s, double tol) {
  std::vector<double> out(q2s.size());
  const long n = static_cast<long>(q2s.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = eval_J(0.0, q2s[static_cast<std::size_t>(i)], tol);
  }
  return out;
}

std::vector<double> eval_J_axis_batch_serial(const std::vector<double>& q2s, double tol) {
  std::vector<double> out;
  out.reserve(q2s.size());
  for (double q2 : q2s) out.push_back(eval_J(0.0, q2, tol));
  return out;
}

}  // namespace rell::potential
