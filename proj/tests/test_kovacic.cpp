#include <doctest.h>

#include <cmath>

#include "rell/kovacic.hpp"
#include "rell/ode.hpp"
#include "rell/report.hpp"

using namespace rell;
using namespace rell::kovacic;

namespace {

RatFunc var() { return RatFunc::variable(); }
RatFunc constant(long n, long d = 1) { return RatFunc(FieldElement(make_rational(n, d))); }

}  // namespace

TEST_CASE("normal form") {
  const Poly one(FieldElement(1));
  CHECK(to_normal_form(one, Poly(), Poly(FieldElement(-1))) == constant(1));
  const Poly t = Poly::variable();
  // X'' + (2/t) X' = 0, written as t X'' + 2 X' = 0.
  CHECK(to_normal_form(t, Poly(FieldElement(2)), Poly()).is_zero());
}

TEST_CASE("normal form of the limit equation has its poles at the roots of the leading coefficient") {
  const auto e = variational::limit_equation();
  const PoleProfile prof = pole_profile(to_normal_form(e));
  REQUIRE(prof.finite.size() == 7);
  const auto roots = factor(e.a2()).roots;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(prof.finite[i].point == roots[i].first);
    CHECK(prof.finite[i].order == 2);
  }
  CHECK(prof.infinity_order == 0);
}

TEST_CASE("normal form correspondence on a disc near t = 5") {
  // X from the original equation, y from y'' = r y, and L = (1/2) int p; expect y = X exp(L).
  const auto e = variational::limit_equation();
  const RatFunc r = to_normal_form(e);
  const RatFunc p(e.a1(), e.a2());
  using C = std::complex<double>;
  auto rhs = [&](C t, const std::array<C, 5>& z) -> std::array<C, 5> {
    const auto c = e.eval(t);
    const C xpp = -(c.a1 * z[1] + c.a0 * z[0]) / c.a2;
    return {z[1], xpp, z[3], eval_complex(r, t) * z[2], 0.5 * eval_complex(p, t)};
  };
  const C t0 = 5.0;
  for (C t1 : {C(5.3, 0), C(4.8, 0.25), C(5.1, -0.2)}) {
    const C p0 = eval_complex(p, t0);
    std::array<C, 5> z{1.0, 0.0, 1.0, 0.5 * p0, 0.0};
    // Straight path parametrized by s in [0, 1].
    auto rhs_s = [&](double s, const std::array<C, 5>& y) {
      auto d = rhs(t0 + s * (t1 - t0), y);
      for (auto& v : d) v *= (t1 - t0);
      return d;
    };
    StepControl ctl;
    ctl.tol = 1e-13;
    const auto end = dp5_integrate<C, 5>(rhs_s, 0.0, 1.0, z, ctl);
    CHECK(std::abs(end[2] - end[0] * std::exp(end[4])) <= 1e-8 * std::abs(end[2]));
  }
}

TEST_CASE("pole profiles") {
  const auto a = pole_profile(constant(1));
  CHECK(a.finite.empty());
  CHECK(a.infinity_order == 0);
  const auto b = pole_profile(constant(2) / (var() * var()));
  REQUIRE(b.finite.size() == 1);
  CHECK(b.finite[0].point == FieldElement(0));
  CHECK(b.finite[0].order == 2);
  CHECK(b.infinity_order == 2);
}

TEST_CASE("case 1 positive controls") {
  const auto c1 = run_case(constant(1), 1);
  REQUIRE(c1.success);
  CHECK(*c1.omega == constant(1));
  const RatFunc r2 = constant(2) / (var() * var());
  const auto c2 = run_case(r2, 1);
  REQUIRE(c2.success);
  CHECK(*c2.omega == constant(2) / var());
  CHECK(verify_riccati(*c2.omega, r2));
}

TEST_CASE("Liouvillian solutions satisfy the equation numerically") {
  // y = e^t for r = 1, y = t^2 for r = 2/t^2, y = exp(t^2 / 2) for r = t^2 + 1.
  struct Control {
    RatFunc r;
    double (*y)(double);
    double (*ypp)(double);
  };
  const std::vector<Control> controls{
      {constant(1), [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }},
      {constant(2) / (var() * var()), [](double t) { return t * t; }, [](double) { return 2.0; }},
      {var() * var() + constant(1), [](double t) { return std::exp(t * t / 2); },
       [](double t) { return (t * t + 1) * std::exp(t * t / 2); }}};
  for (const auto& c : controls) {
    const auto cert = kovacic_run(c.r);
    REQUIRE(cert.verdict == Verdict::Liouvillian);
    CHECK(cert.liouvillian_case == 1);
    CHECK(cert.riccati_verified);
    CHECK(cert.identity_component == "solvable");
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.3 * i;
      const double omega = eval_complex(*cert.cases[0].omega, t).real();
      const double lhs = c.ypp(t);
      const double rhs = eval_complex(c.r, t).real() * c.y(t);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      // y'/y from the certificate against the closed form.
      const double h = 1e-6;
      const double dlog = (std::log(c.y(t + h)) - std::log(c.y(t - h))) / (2 * h);
      CHECK(std::abs(dlog - omega) <= 1e-6 * std::max(1.0, std::abs(omega)));
    }
  }
}

TEST_CASE("case 2 and case 3 controls") {
  const RatFunc euler = constant(-3, 16) / (var() * var());
  const auto c2 = run_case(euler, 2);
  CHECK(c2.success);
  // Published example with a finite (case 3, n = 4) group.
  const RatFunc one = constant(1);
  const RatFunc r = constant(-3, 16) / (var() * var()) - constant(2, 9) / ((var() - one) * (var() - one)) +
                    constant(3, 16) / (var() * (var() - one));
  const auto cert = kovacic_run(r);
  CHECK(cert.verdict == Verdict::Liouvillian);
  CHECK(cert.liouvillian_case == 3);
  CHECK(cert.cases.back().n == 4);
  CHECK(cert.identity_component == "abelian");
}

TEST_CASE("Airy equation has group SL2") {
  const auto cert = kovacic_run(var());
  CHECK(cert.verdict == Verdict::GroupSL2);
  CHECK(cert.profile.infinity_order == -1);
  for (const auto& c : cert.cases) {
    CHECK_FALSE(c.necessary_conditions);
    CHECK_FALSE(c.success);
  }
}

TEST_CASE("limit equation has group SL2 with a complete failure ledger") {
  const auto cert = kovacic_run(variational::limit_equation());
  CHECK(cert.verdict == Verdict::GroupSL2);
  CHECK(cert.identity_component == "not solvable");
  REQUIRE(cert.cases.size() == 3);
  for (const auto& c : cert.cases) {
    CHECK_FALSE(c.success);
    if (!c.necessary_conditions) continue;
    for (const auto& cand : c.candidates) {
      const bool failed = !cand.admissible || cand.outcome.rfind("no monic polynomial", 0) == 0;
      CHECK(failed);
    }
  }
  CHECK(cert.cases[0].candidates.size() == 256);
  CHECK(cert.cases[1].candidates.size() == 81);
  CHECK_FALSE(cert.cases[2].necessary_conditions);
}

TEST_CASE("limit equation verdict is deterministic") {
  const auto a = report::certificate_json(kovacic_run(variational::limit_equation()));
  const auto b = report::certificate_json(kovacic_run(variational::limit_equation()));
  CHECK(report::dump(a) == report::dump(b));
}
