#include <doctest.h>

#include <cmath>
#include <random>

#include "rell/errors.hpp"
#include "rell/potential.hpp"

using namespace rell;
using namespace rell::potential;

TEST_CASE("J on the axis against frozen quadrature values") {
  // Independent oracle: arbitrary-precision quadrature of the defining integral (sympy/mpmath).
  CHECK(eval_J(0, std::cbrt(16.0)) == doctest::Approx(1.97907935722640).epsilon(1e-13));
  CHECK(eval_J(0, 3.0) == doctest::Approx(1.93732255108703).epsilon(1e-13));
}

TEST_CASE("J is real and positive on the axis beyond q2 = 2") {
  for (double q2 : {2.1, 2.5, 3.3, 4.7, 5.9}) {
    const cplx v = eval_J(PotentialPoint::make(0, q2));
    CHECK(std::abs(v.imag()) <= 1e-15);
    CHECK(v.real() > 0);
  }
}

TEST_CASE("J is even in q1") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> a(-1.5, 1.5);
  std::uniform_real_distribution<double> b(2.2, 5.5);
  for (int i = 0; i < 40; ++i) {
    const double q1 = a(rng);
    const double q2 = b(rng);
    CHECK(std::abs(eval_J(q1, q2) - eval_J(-q1, q2)) <= 2e-14);
  }
}

TEST_CASE("r convention on the axis") {
  const auto p = PotentialPoint::make(0, cplx(3, 0.4));
  CHECK(std::abs(p.r - cplx(3, 0.4)) <= 1e-15);
  const auto q = PotentialPoint::make(cplx(0.7, 0.1), cplx(2.5, -0.3));
  CHECK(std::abs(q.r * q.r - (q.q1 * q.q1 + q.q2 * q.q2)) <= 1e-13);
}

TEST_CASE("axis singular candidates") {
  const auto c = sigma_axis_candidates();
  CHECK(c.size() == 7);
  auto has = [&](cplx z) {
    for (const auto& x : c) {
      if (std::abs(x.to_complex() - z) < 1e-14) return true;
    }
    return false;
  };
  CHECK(has(0));
  CHECK(has(std::polar(2.0, M_PI / 3)));
  CHECK(has(-2.0));
  for (int k = 1; k <= 6; ++k) CHECK(has(std::polar(2.0, k * M_PI / 3)));
  CHECK_THROWS_AS(eval_J(PotentialPoint::make(0, 0.0)), SingularInput);
  CHECK_THROWS_AS(eval_J(PotentialPoint::make(0, std::polar(2.0, M_PI / 3))), SingularInput);
}

TEST_CASE("J is finite away from the candidates") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> re(-4, 6);
  std::uniform_real_distribution<double> im(-3, 3);
  int done = 0;
  while (done < 50) {
    const cplx z(re(rng), im(rng));
    if (distance_to_axis_candidates(z) < 0.1 || z.real() <= 0.1) continue;
    const cplx a = eval_J(PotentialPoint::make(0, z), 1e-12);
    const cplx b = eval_J(PotentialPoint::make(0, z), 1e-14);
    CHECK(std::isfinite(a.real()));
    CHECK(std::isfinite(a.imag()));
    CHECK(std::abs(a - b) <= 1e-11);
    ++done;
  }
}

TEST_CASE("F1 closed form") {
  for (double q2 : {2.3, 3.0, 4.4, 5.8}) {
    const cplx v = F1_closed(q2);
    CHECK(std::abs(v.imag()) <= 1e-14 * std::abs(v));
  }
  for (cplx z : {cplx(3, 0.2), cplx(4, -0.5), cplx(2.6, 0.7)}) {
    CHECK(std::abs(F1_closed(std::conj(z)) - std::conj(F1_closed(z))) <= 1e-14);
  }
  CHECK_THROWS_AS(F1_closed(0.0), SingularInput);
  CHECK_THROWS_AS(F1_closed(2.0), SingularInput);
}

TEST_CASE("F1 quadrature") {
  const cplx v = F1_quadrature(3.0);
  CHECK(v.real() < 0);
  CHECK(std::abs(v.imag()) == 0);
  const cplx coarse = F1_quadrature(3.0, 1e-10);
  const cplx fine = F1_quadrature(3.0, 5e-11);
  CHECK(std::abs(coarse - fine) < 1e-10);
  // Off-axis agreement with the closed form.
  for (cplx z : {cplx(3, 0.2), cplx(4, -0.5)}) {
    CHECK(std::abs(F1_quadrature(z) - calibration().f1_factor * F1_closed(z)) <= 1e-12);
  }
}

TEST_CASE("finite difference of J at q2 = 2^(4/3)") {
  const double q2 = std::cbrt(16.0);
  const auto p = f1_oracle_chain_serial({q2}, 1e-14, 1e-4).front();
  CHECK(std::abs(p.finite_diff - p.quadrature) <= 1e-5 * std::abs(p.quadrature));
}

TEST_CASE("calibration factors") {
  const Calibration& c = calibration();
  CHECK(c.potential_factor == 2.0);
  CHECK(c.f1_factor == 1.0);
  CHECK(c.potential_spread <= 1e-12);
  CHECK(c.f1_spread <= 1e-12);
  CHECK(c.samples.size() == 5);
}

TEST_CASE("axis closed form times the factor equals J") {
  for (double q2 : {2.05, 2.5, 3.7, 5.5}) {
    CHECK(calibration().potential_factor * axis_potential_printed(q2) ==
          doctest::Approx(eval_J(0, q2)).epsilon(1e-13));
  }
}

TEST_CASE("parallel kernels equal their serial references") {
  std::vector<double> q2s;
  for (int i = 0; i < 16; ++i) q2s.push_back(2.2 + 0.23 * i);
  const auto a = f1_oracle_chain(q2s, 1e-14, 1e-4);
  const auto b = f1_oracle_chain_serial(q2s, 1e-14, 1e-4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].closed == b[i].closed);
    CHECK(a[i].quadrature == b[i].quadrature);
    CHECK(a[i].finite_diff == b[i].finite_diff);
  }
  CHECK(eval_J_axis_batch(q2s, 1e-14) == eval_J_axis_batch_serial(q2s, 1e-14));
}

TEST_CASE("oracle chain at the balanced step") {
  std::vector<double> q2s;
  for (int i = 0; i < 20; ++i) q2s.push_back(2.1 + 3.9 * (i + 0.5) / 20);
  for (const auto& p : f1_oracle_chain(q2s, 1e-14, 0.0)) {
    CHECK(p.step == doctest::Approx(second_difference_step(p.q2)));
    CHECK(std::abs(p.finite_diff - p.quadrature) <= 1e-5 * std::abs(p.quadrature));
    CHECK(std::abs(p.closed - p.quadrature) <= 1e-5 * std::abs(p.quadrature));
  }
}
