#include <doctest.h>

#include <cmath>
#include <map>

#include "rell/errors.hpp"
#include "rell/monodromy.hpp"

using namespace rell;
using namespace rell::monodromy;

namespace {

double dist_to_identity(const Matrix2& m) { return operator_norm(subtract(m, identity())); }

const LinearODE2& limit_eq() {
  static const LinearODE2 e = variational::limit_equation();
  return e;
}

const GeneratorSet& limit_generators() {
  static const GeneratorSet g = generators(limit_eq());
  return g;
}

}  // namespace

TEST_CASE("loop geometry") {
  const auto sing = limit_eq().singular_points();
  const auto loop = generator_loop(5.0, FieldElement(0), sing);
  CHECK(loop.closed());
  std::vector<cplx> pts;
  for (const auto& p : sing) pts.push_back(p.to_complex());
  CHECK(loop.min_distance(pts) >= 1e-3);
  CHECK(loop.enclosed.has_value());
}

TEST_CASE("transport basics") {
  const auto& e = limit_eq();
  const auto contractible = circle_loop(5.0, 4.5, true);
  CHECK(dist_to_identity(transport(e, contractible).matrix) <= 1e-9);

  LoopPath open;
  open.basepoint = 5.0;
  open.segments.push_back(Segment::line(5.0, cplx(4, 1)));
  open.segments.push_back(Segment::arc(cplx(3, 1), 1.0, 0.0, M_PI / 2));
  const Matrix2 there = transport(e, open).matrix;
  const Matrix2 back = transport(e, open.reversed()).matrix;
  CHECK(dist_to_identity(multiply(back, there)) <= 1e-8);

  const auto sing = e.singular_points();
  const auto a = generator_loop(5.0, FieldElement(0), sing);
  const auto b = generator_loop(5.0, FieldElement(2), sing);
  const Matrix2 ab = transport(e, a.then(b)).matrix;
  const Matrix2 composed = multiply(transport(e, b).matrix, transport(e, a).matrix);
  CHECK(operator_norm(subtract(ab, composed)) <= 1e-7 * std::max(1.0, operator_norm(ab)));
}

TEST_CASE("transport refuses paths that graze a singular point") {
  const auto sing = limit_eq().singular_points();
  const auto tight = generator_loop(5.0, FieldElement(0), sing, 0.25, 1e-4);
  CHECK_THROWS_AS(transport(limit_eq(), tight), SingularityTooClose);
}

TEST_CASE("generators of the limit equation") {
  const auto& g = limit_generators();
  CHECK(g.finite.size() == 7);
  for (const auto& m : g.finite) {
    REQUIRE(m.predicted_det.has_value());
    CHECK(m.det_residual <= 1e-7);
    if (m.loop.enclosed->is_zero()) CHECK(std::abs(m.det + 1.0) <= 1e-7);
  }
  CHECK(g.product_residual <= 1e-6);
}

TEST_CASE("determinant predictions") {
  const auto& e = limit_eq();
  CHECK(std::abs(det_prediction(e, FieldElement(0)) + 1.0) <= 1e-14);
  for (long p : {-1L, 2L}) {
    const auto ie = variational::indicial_exponents(e, FieldElement(p));
    const cplx from_exponents = std::exp(2.0 * M_PI * cplx(0, 1) * ie.sum.to_complex());
    CHECK(std::abs(det_prediction(e, FieldElement(p)) - from_exponents) <= 1e-12);
  }
  const Poly t = Poly::variable();
  const auto flat = LinearODE2::exact(t * (t - Poly(FieldElement(1))), Poly(), Poly(FieldElement(1)), "flat");
  CHECK(std::abs(det_prediction(flat, FieldElement(0)) - 1.0) <= 1e-15);
  CHECK(std::abs(det_prediction(flat, FieldElement(1)) - 1.0) <= 1e-15);
}

TEST_CASE("homotopy invariance") {
  const auto sing = limit_eq().singular_points();
  for (long c : {0L, -1L, 2L}) {
    const auto m1 = transport(limit_eq(), generator_loop(5.0, FieldElement(c), sing, 0.25, 0.1)).matrix;
    const auto m3 = transport(limit_eq(), generator_loop(5.0, FieldElement(c), sing, 0.25, 0.3)).matrix;
    CHECK(operator_norm(subtract(m1, m3)) <= 1e-7);
  }
}

TEST_CASE("basepoint conjugacy keeps generator spectra") {
  GeneratorOptions other;
  other.basepoint = cplx(4.5, 0.5);
  const auto g2 = generators(limit_eq(), other);
  std::map<std::string, cplx> trace1;
  for (const auto& m : limit_generators().finite) trace1[m.loop.enclosed->str()] = m.entries[0][0] + m.entries[1][1];
  REQUIRE(g2.finite.size() == 7);
  for (const auto& m : g2.finite) {
    const cplx tr = m.entries[0][0] + m.entries[1][1];
    CHECK(std::abs(tr - trace1.at(m.loop.enclosed->str())) <= 1e-7);
  }
}

TEST_CASE("derived power test") {
  CHECK(derived_power_test({identity(), identity()}, 2, 60, 20, 1) == 0.0);
  Matrix2 d1{{{cplx(2, 0), 0}, {0, cplx(0.5, 0)}}};
  Matrix2 d2{{{cplx(0, 1), 0}, {0, cplx(0, -1)}}};
  CHECK(derived_power_test({d1, d2}, 2, 60, 20, 1) <= 1e-9);
  std::vector<Matrix2> gens;
  for (const auto& m : limit_generators().finite) gens.push_back(m.entries);
  CHECK(derived_power_test(gens, 2, 60, 50, 12345) >= 0.1);
  CHECK(derived_power_test(gens, 3, 120, 20, 12345) >= 0.1);
}

TEST_CASE("parallel generators and power test equal the serial references") {
  const auto a = generators(limit_eq());
  const auto b = generators_serial(limit_eq());
  REQUIRE(a.finite.size() == b.finite.size());
  for (std::size_t i = 0; i < a.finite.size(); ++i) CHECK(a.finite[i].entries == b.finite[i].entries);
  CHECK(a.infinity.entries == b.infinity.entries);
  std::vector<Matrix2> gens;
  for (const auto& m : a.finite) gens.push_back(m.entries);
  CHECK(derived_power_test(gens, 2, 60, 30, 9) == derived_power_test_serial(gens, 2, 60, 30, 9));
}

TEST_CASE("sheaf translation loop") {
  const auto loop = sheaf_shift_loop(5.0);
  CHECK(loop.closed());
  const auto b0 = variational::BranchState::principal(5.0);
  const auto end = continue_branch(loop, b0);
  CHECK(std::abs(end.t - b0.t) <= 1e-12);
  CHECK(std::abs(end.u - b0.u) <= 1e-9);
  CHECK(std::abs(end.v - b0.v) <= 1e-9);
  CHECK(std::abs(std::abs(end.w - b0.w) - 2 * M_PI) <= 1e-9);
  for (cplx E : {cplx(0.975), cplx(0.3, 0.2)}) {
    const auto moved = variational::base_coeffs(end, E);
    const auto target = variational::shifted_coeffs(b0, E, 1);
    const double scale = std::abs(target.a2);
    CHECK(std::abs(moved.a2 - target.a2) <= 1e-8 * scale);
    CHECK(std::abs(moved.a1 - target.a1) <= 1e-8 * scale);
    CHECK(std::abs(moved.a0 - target.a0) <= 1e-8 * scale);
  }
}

TEST_CASE("family transport carries the branch") {
  const auto sing = limit_eq().singular_points();
  const auto loop = generator_loop(5.0, FieldElement(0), sing);
  const auto fam = LinearODE2::family(0.975, 80);
  const auto res = transport(fam, loop, {}, variational::BranchState::principal(5.0));
  REQUIRE(res.branch_end.has_value());
  CHECK(res.branch_end->residual() <= 1e-10);
  CHECK_THROWS(transport(fam, loop));
}

TEST_CASE("derived power test saturates instead of failing on huge commutators") {
  std::vector<Matrix2> gens;
  for (const auto& m : limit_generators().finite) gens.push_back(m.entries);
  double d = 0;
  CHECK_NOTHROW(d = derived_power_test(gens, 3, 120, 400, 12345));
  CHECK(d == 1e300);
}
