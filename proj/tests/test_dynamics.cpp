#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rell/dynamics.hpp"
#include "rell/errors.hpp"
#include "rell/potential.hpp"

using namespace rell;
using namespace rell::dynamics;

TEST_CASE("hamiltonian reduces to J at rest") {
  const double q2 = std::cbrt(16.0);
  CHECK(hamiltonian({0, 0, q2, 0, 0}) == doctest::Approx(1.97907935722640).epsilon(1e-13));
  for (double q1 : {0.0, 0.4, -0.9}) {
    CHECK(hamiltonian({0, q1, 3.1, 0, 0}) == doctest::Approx(potential::eval_J(q1, 3.1)).epsilon(1e-15));
  }
  CHECK(hamiltonian({0, 0.3, 3.0, 0.7, 0.2}) == hamiltonian({0, 0.3, 3.0, -0.7, 0.2}));
  CHECK_THROWS_AS(hamiltonian({0, 0, 0, 0, 0}), SingularInput);
}

TEST_CASE("reduced R") {
  for (double q2 : {2.5, 3.0, 4.0}) {
    const double p2 = 0.37;
    const double q5 = std::pow(q2, 5);
    CHECK(reduced_R(p2, q2) - reduced_R(0, q2) == doctest::Approx(q5 * p2 * p2 / (q2 * q2 * q2 * q2 + q2)).epsilon(1e-14));
    CHECK(std::abs(reduced_R(0, q2) - hamiltonian({0, 0, q2, 0, 0})) <= 1e-9);
    CHECK(reduced_R(p2, q2) == reduced_R(-p2, q2));
    CHECK(std::abs(reduced_R(p2, q2) - hamiltonian({0, 0, q2, 0, p2})) <= 1e-9);
  }
}

TEST_CASE("invariant plane over T = 5") {
  for (double q2 : {2.2, 2.5, 3.0, 4.0, 4.9}) {
    const auto tr = integrate({0, 0, q2, 0, 0}, 5.0);
    CHECK(tr.max_plane_leakage <= 1e-10);
    CHECK(tr.max_energy_drift <= 1e-9);
  }
}

TEST_CASE("energy conservation off the plane over T = 10") {
  const auto tr = integrate({0, 0.3, 3.2, 0.1, 0.05}, 10.0);
  CHECK(tr.max_energy_drift <= 1e-9);
}

TEST_CASE("T = 0 returns the initial state only") {
  const PhaseState s0{0, 0, 3, 0, 0.1};
  const auto tr = integrate(s0, 0.0);
  REQUIRE(tr.states.size() == 1);
  CHECK(tr.states[0].q2 == 3);
  CHECK(tr.states[0].p2 == 0.1);
}

TEST_CASE("forward then backward returns to the start") {
  const PhaseState s0{0, 0.2, 3.0, 0.05, 0.1};
  const auto fwd = integrate(s0, 2.0);
  PhaseState mid = fwd.states.back();
  mid.t = 0;
  const auto back = integrate(mid, -2.0);
  const PhaseState& e = back.states.back();
  CHECK(std::abs(e.q1 - s0.q1) + std::abs(e.q2 - s0.q2) + std::abs(e.p1 - s0.p1) + std::abs(e.p2 - s0.p2) <= 1e-7);
}

TEST_CASE("reduced and full orbits agree on the plane") {
  const auto tr = integrate({0, 0, 3.0, 0, 0.12}, 4.0);
  const double E = reduced_R(0.12, 3.0);
  for (const auto& s : tr.states) CHECK(std::abs(reduced_R(s.p2, s.q2) - E) <= 1e-8);
}

TEST_CASE("critical point (2, 1)") {
  CHECK(fixed_point_function(2.0) == 0.0);
  CHECK(fixed_point_energy(2.0) == 1.0);
  const auto cps = critical_points(1.5, 2.5);
  bool found = false;
  for (const auto& c : cps) {
    CHECK(c.residual <= 1e-12);
    if (std::abs(c.x - 2) <= 1e-12 && std::abs(c.E - 1) <= 1e-12) found = true;
  }
  CHECK(found);
}

TEST_CASE("phi_dot_sq is the squared momentum on the level set") {
  const double E = reduced_R(0, 3.0);  // turning point at t = 3
  CHECK(std::abs(phi_dot_sq(3.0, E)) <= 1e-9);
  const double slope = (27.0 + 1) / 81.0;
  CHECK(phi_dot_sq(3.0, E + 0.5) - phi_dot_sq(3.0, E) == doctest::Approx(0.5 * slope).epsilon(1e-12));

  IntegrateOptions opt;
  for (int i = 0; i <= 10; ++i) opt.sample_times.push_back(0.1 * i);
  const auto tr = integrate({0, 0, 3.0, 0, 0}, 1.0, opt);
  for (const auto& s : tr.states) {
    if (s.q2 <= 2.0) continue;
    CHECK(std::abs(s.p2 * s.p2 - phi_dot_sq(s.q2, E)) <= 1e-7);
    const auto f = vector_field(s);
    CHECK(std::abs(f[1] * f[1] - q2_dot_sq(s.q2, E)) <= 1e-7);
  }
  CHECK_THROWS_AS(phi_dot_sq(1.5, E), SingularInput);
}

TEST_CASE("csv layout") {
  const auto tr = integrate({0, 0, 3.0, 0, 0}, 1.0);
  std::ostringstream os;
  write_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "time,q1,q2,p1,p2,energy");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(tr.states.size()));
}
