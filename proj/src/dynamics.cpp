#include "rell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rell/errors.hpp"
#include "rell/potential.hpp"

namespace rell::dynamics {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

void require_real_axis_regular(double q2) {
  if (std::abs(q2) < 1e-9 || std::abs(q2 + 1) < 1e-9 || std::abs(q2 - 2) < 1e-9) {
    throw SingularInput("q2 is a singular abscissa of R (0, -1 or 2)");
  }
}

}  // namespace

double hamiltonian(const PhaseState& s, double tol_quad) {
  const double r = std::hypot(s.q1, s.q2);
  if (r == 0) throw SingularInput("hamiltonian requires r != 0");
  const double q4 = std::pow(s.q2, 4);
  const double kinetic = r * (s.p1 * s.p1 + q4 * s.p2 * s.p2 / (q4 + r));
  return kinetic + potential::eval_J(s.q1, s.q2, tol_quad);
}

double reduced_potential(double q2) {
  require_real_axis_regular(q2);
  if (q2 <= 0) throw SingularInput("the closed-form axis potential is real only for q2 > 0");
  return potential::calibration().potential_factor * potential::axis_potential_printed(q2);
}

double reduced_R(double p2, double q2) {
  require_real_axis_regular(q2);
  return std::pow(q2, 5) * p2 * p2 / (std::pow(q2, 4) + q2) + reduced_potential(q2);
}

std::array<double, 4> vector_field(const PhaseState& s, double tol_quad) {
  const double r = std::hypot(s.q1, s.q2);
  if (r == 0) throw SingularInput("vector field requires r != 0");
  const double q2 = s.q2;
  const double q4 = std::pow(q2, 4);
  const double den = q4 + r;
  const potential::Gradient g = potential::grad_J(s.q1, s.q2, tol_quad);
  // Kinetic part K = r p1^2 + r q2^4 p2^2 / (q2^4 + r) as a function of (r, q2, p1, p2).
  const double dK_dr = s.p1 * s.p1 + q4 * q4 * s.p2 * s.p2 / (den * den);
  const double dK_dq2 = r * s.p2 * s.p2 * 4 * q2 * q2 * q2 * r / (den * den);
  return {2 * r * s.p1,                                   //
          2 * r * q4 * s.p2 / den,                        //
          -(dK_dr * s.q1 / r + g.dq1),                    //
          -(dK_dr * q2 / r + dK_dq2 + g.dq2)};
}

Trajectory integrate(const PhaseState& s0, double T, const IntegrateOptions& opt) {
  std::vector<double> times = opt.sample_times;
  if (times.empty()) {
    const int n = T == 0 ? 1 : std::max(2, opt.samples);
    for (int i = 0; i < n; ++i) times.push_back(n == 1 ? 0.0 : T * i / (n - 1));
  }
  Trajectory tr;
  tr.energy0 = hamiltonian(s0, opt.tol_quad);

  using State = OdeState<double, 4>;
  State y{s0.q1, s0.q2, s0.p1, s0.p2};
  double t = s0.t;
  const double t_start = s0.t;
  auto rhs = [&](double tau, const State& z) -> State {
    try {
      return vector_field({tau, z[0], z[1], z[2], z[3]}, opt.tol_quad);
    } catch (const SingularInput& e) {
      throw SingularEncounter(e.what(), tau, z);
    } catch (const NoConvergence& e) {
      throw SingularEncounter(e.what(), tau, z);
    }
  };
  StepControl ctl;
  ctl.tol = opt.tol;
  for (double rel : times) {
    const double target = t_start + rel;
    if (target != t) {
      y = dp5_integrate<double, 4>(rhs, t, target, y, ctl, &tr.stats);
      ctl.h_init = tr.stats.last_step;
      t = target;
    }
    PhaseState s{t, y[0], y[1], y[2], y[3]};
    tr.states.push_back(s);
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(hamiltonian(s, opt.tol_quad) - tr.energy0));
    tr.max_plane_leakage = std::max(tr.max_plane_leakage, std::abs(s.q1) + std::abs(s.p1));
  }
  return tr;
}

namespace {

// Truncated Taylor polynomial c0 + c1 h + c2 h^2 + c3 h^3.
struct Jet {
  std::array<double, 4> c{};

  static Jet constant(double v) { return Jet{{v, 0, 0, 0}}; }
  static Jet variable(double x) { return Jet{{x, 1, 0, 0}}; }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i < 4; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i < 4; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  friend Jet operator*(double s, Jet a) {
    for (double& v : a.c) v *= s;
    return a;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k < 4; ++k) {
      double acc = a.c[k];
      for (int j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
      q.c[k] = acc / b.c[0];
    }
    return q;
  }
  friend Jet sqrt(const Jet& a) {
    Jet s;
    s.c[0] = std::sqrt(a.c[0]);
    for (int k = 1; k < 4; ++k) {
      double acc = a.c[k];
      for (int j = 1; j < k; ++j) acc -= s.c[j] * s.c[k - j];
      s.c[k] = acc / (2 * s.c[0]);
    }
    return s;
  }
  /// k-th derivative.
  double derivative(int k) const {
    static constexpr double fact[4] = {1, 1, 2, 6};
    return c[static_cast<std::size_t>(k)] * fact[k];
  }
};

// cosh(sqrt(z)) = sum z^n / (2n)!, entire in z; equals cos(sqrt(-z)) for z < 0.
Jet cosh_sqrt(const Jet& z) {
  constexpr int terms = 28;
  double inv_fact[terms];
  double f = 1;
  for (int n = 0; n < terms; ++n) {
    if (n > 0) f *= (2.0 * n - 1) * (2.0 * n);
    inv_fact[n] = 1 / f;
  }
  Jet sum = Jet::constant(inv_fact[terms - 1]);
  for (int n = terms - 2; n >= 0; --n) sum = sum * z + Jet::constant(inv_fact[n]);
  return sum;
}

Jet fixed_point_jet(double x) {
  if (!(x > 0)) throw SingularInput("the fixed-point equation needs x > 0");
  const Jet X = Jet::variable(x);
  const Jet cube = X * X * X;
  const Jet w = Jet::constant(8) - cube;
  const Jet k = (6 * kSqrt2) * (Jet::constant(1) / (cube + Jet::constant(16)));
  const Jet power = X * sqrt(X);
  return Jet::constant(2 * kSqrt2) - power * cosh_sqrt(k * k * w);
}

template <class Fn>
double bisect(const Fn& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Multiplicity from the dominant Taylor term over a neighbourhood of width delta.
int estimate_multiplicity(const Jet& j, double delta) {
  double terms[4] = {0, 0, 0, 0};
  double biggest = 0;
  for (int k = 1; k <= 3; ++k) {
    terms[k] = std::abs(j.c[static_cast<std::size_t>(k)]) * std::pow(delta, k);
    biggest = std::max(biggest, terms[k]);
  }
  for (int k = 1; k <= 3; ++k) {
    if (terms[k] >= 0.1 * biggest) return k;
  }
  return 1;
}

}  // namespace

double fixed_point_function(double x) { return fixed_point_jet(x).c[0]; }

double fixed_point_energy(double x) { return 12 * x / (x * x * x + 16); }

std::vector<CriticalPoint> critical_points(double lo, double hi, int grid) {
  if (!(lo > 0) || !(hi > lo)) throw SingularInput("critical point window must satisfy 0 < lo < hi");
  const double step = (hi - lo) / grid;
  auto g = [](double x) { return fixed_point_jet(x).derivative(0); };
  auto dg = [](double x) { return fixed_point_jet(x).derivative(1); };

  std::vector<double> seeds;
  double prev_x = lo;
  double prev_g = g(lo);
  double prev_dg = dg(lo);
  if (prev_g == 0) seeds.push_back(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = i == grid ? hi : lo + step * i;
    const double gx = g(x);
    const double dgx = dg(x);
    if (gx == 0) {
      seeds.push_back(x);
    } else if (prev_g != 0 && (gx < 0) != (prev_g < 0)) {
      seeds.push_back(bisect(g, prev_x, x));
    }
    // Roots of even multiplicity do not change the sign of g; catch them through g'.
    if (dgx != 0 && prev_dg != 0 && (dgx < 0) != (prev_dg < 0)) {
      const double xm = bisect(dg, prev_x, x);
      if (std::abs(g(xm)) <= 1e-10) seeds.push_back(xm);
    }
    prev_x = x;
    prev_g = gx;
    prev_dg = dgx;
  }

  std::vector<CriticalPoint> out;
  for (double x0 : seeds) {
    const int m = estimate_multiplicity(fixed_point_jet(x0), step);
    // Newton on g^(m-1), whose root at x0 is simple.
    double x = x0;
    for (int it = 0; it < 60; ++it) {
      const Jet j = fixed_point_jet(x);
      const double num = j.derivative(m - 1);
      const double den = j.derivative(m);
      if (den == 0) break;
      const double nx = x - num / den;
      if (!(std::abs(nx - x0) <= step)) break;
      if (nx == x) break;
      x = nx;
    }
    CriticalPoint cp;
    cp.x = x;
    cp.E = fixed_point_energy(x);
    cp.multiplicity = m;
    cp.residual = std::abs(g(x));
    if (cp.residual > 1e-12) continue;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const CriticalPoint& o) { return std::abs(o.x - x) < 1e-9; });
    if (!dup) out.push_back(cp);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

double phi_dot_sq(double t, double E) {
  if (!(t > 2)) throw SingularInput("phi_dot_sq is defined on the real branch t > 2");
  const double t3 = t * t * t;
  return (t3 + 1) * (E - reduced_potential(t)) / (t3 * t);
}

double q2_dot_sq(double t, double E) {
  if (!(t > 2)) throw SingularInput("q2_dot_sq is defined on the real branch t > 2");
  const double t3 = t * t * t;
  return 4 * t3 * t * (E - reduced_potential(t)) / (t3 + 1);
}

void write_csv(std::ostream& os, const Trajectory& tr, double tol_quad) {
  os << "time,q1,q2,p1,p2,energy\n";
  char buf[512];
  for (const PhaseState& s : tr.states) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.q1, s.q2, s.p1,
                  s.p2, hamiltonian(s, tol_quad));
    os << buf;
  }
}

}  // namespace rell::dynamics
