#include "rell/variational.hpp"

#include <algorithm>
#include <cmath>

#include "rell/dynamics.hpp"
#include "rell/errors.hpp"
#include "rell/ode.hpp"
#include "rell/potential.hpp"
#include "rell/quadrature.hpp"

namespace rell::variational {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
const cplx kI(0, 1);

cplx horner(const std::vector<cplx>& c, cplx t) {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<cplx> embed(const Poly& p) {
  std::vector<cplx> out;
  for (const FieldElement& c : p.coefficients()) out.push_back(c.to_complex());
  return out;
}

}  // namespace

Matrix2 nve_time_matrix(cplx q2) {
  const cplx f1 = potential::calibration().f1_factor * potential::F1_closed(q2);
  return Matrix2{{{cplx(0), -f1}, {2.0 * q2, cplx(0)}}};
}

Matrix2 nve_time_matrix_full(double q2, double p2, double tol_quad) {
  const double f1 = potential::F1_quadrature(q2, tol_quad).real() +
                    std::pow(q2, 5) * p2 * p2 / std::pow(q2 * q2 * q2 + 1, 2);
  return Matrix2{{{cplx(0), cplx(-f1)}, {cplx(2 * q2), cplx(0)}}};
}

BranchState BranchState::principal(cplx t) {
  BranchState b;
  b.t = t;
  b.v = std::sqrt(t);
  b.u = -kI * std::sqrt(t * t * t - 8.0);
  const cplx v3 = b.v * b.v * b.v;
  b.w = std::acos(2.0 * kSqrt2 / v3);
  const cplx target = kI * b.u / v3;
  if (std::abs(std::sin(-b.w) - target) < std::abs(std::sin(b.w) - target)) b.w = -b.w;
  return b;
}

double BranchState::residual() const {
  const cplx v3 = v * v * v;
  double r = std::abs(u * u - (8.0 - t * t * t));
  r = std::max(r, std::abs(v * v - t));
  r = std::max(r, std::abs(std::cos(w) - 2.0 * kSqrt2 / v3));
  r = std::max(r, std::abs(std::sin(w) - kI * u / v3));
  return r;
}

cplx s_value(const BranchState& b) { return kI * b.w / (kSqrt2 * b.u); }

cplx sigma_shift(const BranchState& b, long k) {
  return 2.0 * M_PI * kI * static_cast<double>(k) / (kSqrt2 * b.u);
}

std::array<Poly, 3> limit_coefficients() {
  return {poly_from_integers({0, 0, 256, 0, 0, 192, 0, 0, -60, 0, 0, 4}),
          poly_from_integers({0, -640, 0, 0, -72, 0, 0, 75, 0, 0, -7}),
          poly_from_integers({0, 0, 0, 0, 0, 0, 0, 0, -64, 0, 0, 2})};
}

Coeffs shifted_coeffs(const BranchState& b, cplx E, long k) {
  const cplx t = b.t;
  const cplx t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
  const cplx t7 = t6 * t, t8 = t7 * t, t9 = t8 * t, t10 = t9 * t, t11 = t10 * t;
  const cplx S = s_value(b) + sigma_shift(b, k);
  Coeffs c;
  c.a2 = (4.0 * t11 + 192.0 * t5 - 60.0 * t8 + 256.0 * t2) * S - 30.0 * t7 * E + 96.0 * t4 * E +
         2.0 * t10 * E + 128.0 * t * E;
  c.a1 = (75.0 * t7 - 640.0 * t - 7.0 * t10 - 72.0 * t4) * S - 384.0 * E + 42.0 * t4 -
         96.0 * E * t3 + 48.0 * t + 42.0 * t6 * E - 3.0 * E * t9 - 6.0 * t7;
  c.a0 = (-64.0 * t8 + 2.0 * t11) * S - 64.0 * t5 - 4.0 * t8;
  return c;
}

Coeffs base_coeffs(const BranchState& b, cplx E) { return shifted_coeffs(b, E, 0); }

Coeffs shifted_normalized(const BranchState& b, cplx E, long k) {
  const cplx S = s_value(b) + sigma_shift(b, k);
  Coeffs c = shifted_coeffs(b, E, k);
  return {c.a2 / S, c.a1 / S, c.a0 / S};
}

LinearODE2 LinearODE2::exact(Poly a2, Poly a1, Poly a0, std::string tag) {
  if (a2.is_zero()) throw Error("leading coefficient of a second-order equation is zero");
  LinearODE2 e;
  e.kind_ = Kind::Exact;
  e.tag_ = std::move(tag);
  e.dense_ = {embed(a2), embed(a1), embed(a0)};
  e.a2_ = std::move(a2);
  e.a1_ = std::move(a1);
  e.a0_ = std::move(a0);
  return e;
}

LinearODE2 LinearODE2::family(cplx E, long k) {
  LinearODE2 e;
  e.kind_ = Kind::Family;
  e.tag_ = "shifted family k=" + std::to_string(k);
  const auto lim = limit_coefficients();
  e.a2_ = lim[0];
  e.a1_ = lim[1];
  e.a0_ = lim[2];
  e.E_ = E;
  e.k_ = k;
  return e;
}

const Poly& LinearODE2::a2() const { return a2_; }
const Poly& LinearODE2::a1() const { return a1_; }
const Poly& LinearODE2::a0() const { return a0_; }

Coeffs LinearODE2::eval(cplx t) const {
  if (!is_exact()) throw Error("family coefficients need branch data");
  return {horner(dense_[0], t), horner(dense_[1], t), horner(dense_[2], t)};
}

Coeffs LinearODE2::eval(const BranchState& b) const {
  if (is_exact()) return eval(b.t);
  return shifted_coeffs(b, E_, k_);
}

std::vector<FieldElement> LinearODE2::singular_points() const {
  std::vector<FieldElement> out;
  for (const auto& [root, mult] : factor(a2_).roots) out.push_back(root);
  return out;
}

LinearODE2 limit_equation() {
  auto c = limit_coefficients();
  return LinearODE2::exact(c[0], c[1], c[2], "limit");
}

IndicialExponents indicial_exponents(const LinearODE2& e, const FieldElement& pole) {
  if (!e.is_exact()) throw Error("indicial exponents need exact coefficients");
  if (!e.a2()(pole).is_zero()) throw NotASingularity("indicial exponents requested at an ordinary point " + pole.str());
  const RatFunc p(e.a1(), e.a2());
  const RatFunc q(e.a0(), e.a2());
  const auto lp = laurent_at(p, pole, -1);
  const auto lq = laurent_at(q, pole, -1);
  if (lp.valuation < -1 || lq.valuation < -2) {
    throw IrregularSingular("pole " + pole.str() + " is an irregular singular point");
  }
  IndicialExponents out;
  out.pole = pole;
  out.p_residue = lp.coefficient(-1);
  out.q_leading = lq.coefficient(-2);
  out.sum = FieldElement(1) - out.p_residue;
  out.product = out.q_leading;
  const FieldElement disc = out.sum * out.sum - FieldElement(4) * out.product;
  const FieldElement half = FieldElement(Rational(1, 2));
  if (auto root = sqrt_exact(disc)) {
    FieldElement r1 = (out.sum - *root) * half;
    FieldElement r2 = (out.sum + *root) * half;
    if (r2 < r1) std::swap(r1, r2);
    out.exact = std::make_pair(r1, r2);
    out.values = {r1.to_complex(), r2.to_complex()};
  } else {
    const cplx sq = std::sqrt(disc.to_complex());
    const cplx sum = out.sum.to_complex();
    out.values = {(sum - sq) / 2.0, (sum + sq) / 2.0};
  }
  return out;
}

InfinityAnalysis singularity_at_infinity(const LinearODE2& e) {
  if (!e.is_exact()) throw Error("singularity analysis needs exact coefficients");
  InfinityAnalysis out;
  const int d2 = e.a2().degree();
  // A zero coefficient vanishes to every order; report a large valuation.
  out.p_valuation = e.a1().is_zero() ? 1000 : d2 - e.a1().degree();
  out.q_valuation = e.a0().is_zero() ? 1000 : d2 - e.a0().degree();
  out.regular = out.p_valuation >= 1 && out.q_valuation >= 2;
  return out;
}

RealCoeffs corrected_t_coeffs(double t, double E, double tol_quad) {
  if (!(t > 2)) throw SingularInput("corrected coefficients are defined for real t > 2");
  const double V = potential::eval_J(0.0, t, tol_quad);
  const double dV = potential::grad_J(0.0, t, tol_quad).dq2;
  const double t3 = t * t * t;
  const double t4 = t3 * t;
  const double gap = E - V;
  // G = (dq2/dtau)^2 as a function of t.
  const double G = 4 * t4 * gap / (t3 + 1);
  const double dG = 4 * ((4 * t3 * gap - t4 * dV) * (t3 + 1) - t4 * gap * 3 * t * t) / ((t3 + 1) * (t3 + 1));
  const double f1 = potential::F1_quadrature(t, tol_quad).real() + t * gap / (t3 + 1);
  return {G, 0.5 * dG - G / t, 2 * t * f1};
}

namespace {

double relative_error(const std::vector<NveSample>& s, double NveSample::*field) {
  double num = 0;
  double den = 0;
  for (const NveSample& x : s) {
    num = std::max(num, std::abs(x.*field - x.finite_diff));
    den = std::max(den, std::abs(x.finite_diff));
  }
  return num / den;
}

// Integrate a real second-order equation in t through the given abscissas.
template <class CoeffFn>
std::vector<double> solve_in_t(const CoeffFn& coeffs, const std::vector<double>& ts, double tol) {
  using State = OdeState<double, 2>;
  auto rhs = [&](double t, const State& y) -> State {
    const RealCoeffs c = coeffs(t);
    return {y[1], -(c.a1 * y[1] + c.a0 * y[0]) / c.a2};
  };
  std::vector<double> out;
  State y{1.0, 0.0};
  double t = ts.front();
  StepControl ctl;
  ctl.tol = tol;
  OdeStats stats;
  for (double target : ts) {
    if (target != t) {
      y = dp5_integrate<double, 2>(rhs, t, target, y, ctl, &stats);
      ctl.h_init = stats.last_step;
      t = target;
    }
    out.push_back(y[0]);
  }
  return out;
}

}  // namespace

NveCheckResult nve_oracle_check(const NveCheckConfig& cfg) {
  NveCheckResult res;
  res.energy = cfg.energy;
  const double factor = potential::calibration().potential_factor;
  res.energy_printed = cfg.energy / factor;
  if (!(cfg.t_end > cfg.t_start) || !(cfg.t_start > 2)) {
    throw SingularInput("the check window must satisfy 2 < t_start < t_end");
  }
  if (dynamics::phi_dot_sq(cfg.t_start, cfg.energy) <= 0) {
    throw SingularInput("energy must exceed the potential at t_start");
  }
  const double p2_start = std::sqrt(dynamics::phi_dot_sq(cfg.t_start, cfg.energy));

  auto inv_speed = [&](double t) { return 1.0 / std::sqrt(dynamics::q2_dot_sq(t, cfg.energy)); };
  res.tau_end = integrate_adaptive<double>(inv_speed, cfg.t_start, cfg.t_end, 1e-13).value;

  const int n = std::max(2, cfg.samples);
  std::vector<double> taus;
  for (int i = 0; i < n; ++i) taus.push_back(res.tau_end * i / (n - 1));

  // Base orbit with two copies of the normal block (full Hessian entry, closed-form F1).
  using State = OdeState<double, 8>;
  const double f1_factor = potential::calibration().f1_factor;
  auto rhs = [&](double, const State& y) -> State {
    const double q2 = y[1];
    const double p2 = y[3];
    const auto vf = dynamics::vector_field({0, 0.0, q2, 0.0, p2}, cfg.tol_quad);
    const double f1_full = potential::F1_quadrature(q2, cfg.tol_quad).real() +
                           std::pow(q2, 5) * p2 * p2 / std::pow(q2 * q2 * q2 + 1, 2);
    const double f1_closed = f1_factor * potential::F1_closed(q2).real();
    return {0.0, vf[1], 0.0, vf[3], -f1_full * y[5], 2 * q2 * y[4], -f1_closed * y[7], 2 * q2 * y[6]};
  };
  State y{0.0, cfg.t_start, 0.0, p2_start, 0.0, 1.0, 0.0, 1.0};
  StepControl ctl;
  ctl.tol = cfg.tol_ode;
  OdeStats stats;
  double tau = 0;
  std::vector<State> base;
  for (double target : taus) {
    if (target != tau) {
      y = dp5_integrate<double, 8>(rhs, tau, target, y, ctl, &stats);
      ctl.h_init = stats.last_step;
      tau = target;
    }
    base.push_back(y);
  }

  dynamics::IntegrateOptions opt;
  opt.tol = cfg.tol_ode;
  opt.tol_quad = cfg.tol_quad;
  opt.sample_times = taus;
  const dynamics::Trajectory pert =
      dynamics::integrate({0, cfg.delta, cfg.t_start, 0.0, p2_start}, res.tau_end, opt);

  std::vector<double> ts;
  for (const State& s : base) ts.push_back(s[1]);

  const double e_printed = res.energy_printed;
  const std::vector<double> x_base = solve_in_t(
      [&](double t) {
        const Coeffs c = base_coeffs(BranchState::principal(t), e_printed);
        return RealCoeffs{c.a2.real(), c.a1.real(), c.a0.real()};
      },
      ts, cfg.tol_ode);
  const std::vector<double> x_corr = solve_in_t(
      [&](double t) { return corrected_t_coeffs(t, cfg.energy, cfg.tol_quad); }, ts, cfg.tol_ode);

  for (int i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    NveSample s;
    s.tau = taus[iu];
    s.t = ts[iu];
    s.finite_diff = pert.states[iu].q1 / cfg.delta;
    s.time_full = base[iu][5];
    s.time_printed = base[iu][7];
    s.base = x_base[iu];
    s.corrected = x_corr[iu];
    res.samples.push_back(s);
  }
  res.err_time_full = relative_error(res.samples, &NveSample::time_full);
  res.err_time_printed = relative_error(res.samples, &NveSample::time_printed);
  res.err_base = relative_error(res.samples, &NveSample::base);
  res.err_corrected = relative_error(res.samples, &NveSample::corrected);
  return res;
}

}  // namespace rell::variational
