// Acceptance suite: one PASS/FAIL line per criterion. Arguments select criteria (default 1..10).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rell/dynamics.hpp"
#include "rell/kovacic.hpp"
#include "rell/monodromy.hpp"
#include "rell/potential.hpp"
#include "rell/report.hpp"
#include "rell/variational.hpp"

using namespace rell;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double coeff_distance(const variational::Coeffs& a, const variational::Coeffs& b) {
  return std::max({std::abs(a.a2 - b.a2), std::abs(a.a1 - b.a1), std::abs(a.a0 - b.a0)});
}

Outcome invariant_plane() {
  double leak = 0;
  dynamics::IntegrateOptions opt;
  opt.tol = 1e-12;
  for (double q2 : {2.5, 3.0, 4.0, 5.0}) leak = std::max(leak, dynamics::integrate({0, 0, q2, 0, 0}, 5.0, opt).max_plane_leakage);
  return {leak <= 1e-10, fmt("max |q1|+|p1| = %.3g (limit 1e-10)", leak)};
}

Outcome critical_point() {
  for (const auto& c : dynamics::critical_points(1.5, 2.5)) {
    if (std::abs(c.x - 2) <= 1e-12 && std::abs(c.E - 1) <= 1e-12 && c.residual <= 1e-12) {
      return {true, fmt("found (2,1) with residual %.3g", c.residual)};
    }
  }
  return {false, "(2,1) not among the critical points in [1.5, 2.5]"};
}

double chain_error(const std::vector<potential::OracleChainPoint>& chain) {
  double worst = 0;
  for (const auto& p : chain) {
    const double s = std::abs(p.quadrature);
    worst = std::max({worst, std::abs(p.closed - p.quadrature) / s, std::abs(p.finite_diff - p.quadrature) / s,
                      std::abs(p.finite_diff - p.closed) / s});
  }
  return worst;
}

Outcome oracle_chain() {
  std::vector<double> q2s;
  for (int i = 0; i < 20; ++i) q2s.push_back(2.1 + 3.9 * (i + 0.5) / 20);
  const double worst = chain_error(potential::f1_oracle_chain(q2s, 1e-14, 0.0));
  const double fixed = chain_error(potential::f1_oracle_chain(q2s, 1e-14, 1e-4));
  const auto& cal = potential::calibration();
  std::ostringstream os;
  os << "max pairwise relative error " << fmt("%.3g", worst) << " at h = eps^(1/4) q2 (limit 1e-5); "
     << fmt("%.3g", fixed) << " at fixed h = 1e-4; calibration factors: potential " << cal.potential_factor
     << ", F1 " << cal.f1_factor;
  return {worst <= 1e-5, os.str()};
}

Outcome nve_oracle() {
  const auto r = variational::nve_oracle_check(variational::NveCheckConfig{});
  std::ostringstream os;
  os << "base equation vs finite difference: " << fmt("%.3g", r.err_base) << " (limit 1e-3); diagnostics: time block "
     << fmt("%.3g", r.err_time_printed) << ", full-Hessian block " << fmt("%.3g", r.err_time_full)
     << ", corrected t equation " << fmt("%.3g", r.err_corrected);
  return {r.err_base <= 1e-3, os.str()};
}

Outcome limit_property() {
  const auto lim = variational::limit_equation();
  const auto b = variational::BranchState::principal(3.0);
  const variational::cplx Ep = 1.95 / potential::calibration().potential_factor;
  const auto ref = lim.eval(b.t);
  const double scale = std::max({std::abs(ref.a2), std::abs(ref.a1), std::abs(ref.a0)});
  std::vector<double> err;
  for (long k : {10L, 20L, 40L, 80L}) {
    const auto n = variational::shifted_normalized(b, Ep, k);
    err.push_back(coeff_distance(n, ref) / scale);
  }
  bool ratios = true;
  std::ostringstream os;
  os << "ratios";
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double q = err[i] / err[i - 1];
    ratios = ratios && q >= 0.4 && q <= 0.6;
    os << " " << fmt("%.4f", q);
  }
  const auto loop = monodromy::generator_loop(5.0, FieldElement(0), lim.singular_points());
  const auto m_lim = monodromy::transport(lim, loop).matrix;
  const auto m80 =
      monodromy::transport(variational::LinearODE2::family(Ep, 80), loop, {}, variational::BranchState::principal(5.0))
          .matrix;
  const double diff = monodromy::operator_norm(monodromy::subtract(m80, m_lim));
  os << (ratios ? " (in [0.4,0.6])" : " (outside [0.4,0.6])") << "; k=80 monodromy difference "
     << fmt("%.3g", diff) << " (limit 1e-3)";
  return {ratios && diff <= 1e-3, os.str()};
}

Outcome monodromy_structure() {
  const auto lim = variational::limit_equation();
  const auto g = monodromy::generators(lim);
  double det0 = 1e300;
  for (const auto& m : g.finite) {
    if (m.loop.enclosed && m.loop.enclosed->is_zero()) det0 = std::abs(m.det + 1.0);
  }
  const auto sing = lim.singular_points();
  const auto h1 = monodromy::transport(lim, monodromy::generator_loop(5.0, FieldElement(0), sing, 0.25, 0.1)).matrix;
  const auto h3 = monodromy::transport(lim, monodromy::generator_loop(5.0, FieldElement(0), sing, 0.25, 0.3)).matrix;
  const double homotopy = monodromy::operator_norm(monodromy::subtract(h1, h3));
  const bool ok = g.finite.size() == 7 && det0 <= 1e-7 && g.product_residual <= 1e-6 && homotopy <= 1e-7;
  std::ostringstream os;
  os << g.finite.size() << " generators; |det(t=0 loop) + 1| = " << fmt("%.3g", det0) << "; product relation "
     << fmt("%.3g", g.product_residual) << "; homotopy " << fmt("%.3g", homotopy);
  return {ok, os.str()};
}

Outcome derived_witness() {
  const auto g = monodromy::generators(variational::limit_equation());
  std::vector<monodromy::Matrix2> mats;
  for (const auto& m : g.finite) mats.push_back(m.entries);
  const double d = monodromy::derived_power_test(mats, 2, 60, 50, 12345);
  return {d >= 0.1, fmt("max |C^60 - I| = %.3g over 50 depth-2 commutators (threshold 0.1)", d)};
}

Outcome kovacic_verdict() {
  using namespace kovacic;
  const auto cert = kovacic_run(variational::limit_equation());
  bool all_fail = cert.cases.size() == 3;
  for (const auto& c : cert.cases) all_fail = all_fail && !c.success;
  const RatFunc t = RatFunc::variable();
  const auto exp_ctrl = kovacic_run(RatFunc(FieldElement(1)));
  const auto sq_ctrl = kovacic_run(RatFunc(FieldElement(2)) / (t * t));
  const auto airy = kovacic_run(t);
  const bool controls = exp_ctrl.verdict == Verdict::Liouvillian && exp_ctrl.liouvillian_case == 1 &&
                        *exp_ctrl.cases[0].omega == RatFunc(FieldElement(1)) &&
                        sq_ctrl.verdict == Verdict::Liouvillian && sq_ctrl.liouvillian_case == 1 &&
                        *sq_ctrl.cases[0].omega == RatFunc(FieldElement(2)) / t && airy.verdict == Verdict::GroupSL2;
  std::ostringstream os;
  os << "limit equation: " << verdict_name(cert.verdict) << (all_fail ? ", cases 1-3 all fail" : ", some case succeeded")
     << "; controls " << (controls ? "as expected" : "unexpected");
  return {cert.verdict == Verdict::GroupSL2 && all_fail && controls, os.str()};
}

Outcome indicial() {
  const auto e = variational::limit_equation();
  const auto ie = variational::indicial_exponents(e, FieldElement(0));
  if (!ie.exact) return {false, "exponents at t=0 are not in the field"};
  const auto lo = std::min(ie.exact->first, ie.exact->second);
  const auto hi = std::max(ie.exact->first, ie.exact->second);
  const bool exps = lo == FieldElement(0) && hi == FieldElement(make_rational(7, 2));
  const variational::cplx d = std::exp(2.0 * M_PI * variational::cplx(0, 1) * ie.sum.to_complex());
  const variational::cplx pred = monodromy::det_prediction(e, FieldElement(0));
  const bool det_ok = std::abs(d + 1.0) <= 1e-12 && std::abs(pred + 1.0) <= 1e-12;
  return {exps && det_ok, "exponents {" + lo.str() + ", " + hi.str() + "}; exp(2 pi i * 7/2) = -1 matches the residue prediction"};
}

Outcome determinism() {
  const report::RunConfig cfg;
  const std::string a = report::dump(report::cmd_certify(cfg).report);
  const std::string b = report::dump(report::cmd_certify(cfg).report);
  return {a == b, a == b ? "two certify runs byte-identical (" + std::to_string(a.size()) + " bytes)" : "reports differ"};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{{1, 10, invariant_plane},  {2, 1, critical_point},       {3, 30, oracle_chain},
                                   {4, 30, nve_oracle},       {5, 120, limit_property},     {6, 60, monodromy_structure},
                                   {7, 60, derived_witness},  {8, 60, kovacic_verdict},     {9, 1, indicial},
                                   {10, 120, determinism}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& c : all) selected.push_back(c.id);
  }
  int failures = 0;
  for (int id : selected) {
    const Criterion* c = nullptr;
    for (const auto& x : all) {
      if (x.id == id) c = &x;
    }
    if (!c) {
      std::printf("FAIL criterion %d: unknown criterion\n", id);
      ++failures;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c->run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c->budget;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s [%.3f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs,
                c->budget, in_time ? "" : ", exceeded");
  }
  return failures == 0 ? 0 : 1;
}
