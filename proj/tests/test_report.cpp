#include <doctest.h>

#include <sstream>

#include "rell/errors.hpp"
#include "rell/report.hpp"

using namespace rell;
using namespace rell::report;

TEST_CASE("complex and list parsing") {
  CHECK(parse_complex("1.5,-2") == cplx(1.5, -2));
  CHECK(parse_complex(" 3 ") == cplx(3, 0));
  CHECK_THROWS_AS(parse_complex("abc"), InvalidConfig);
  CHECK(parse_k_list("10,20,40") == std::vector<long>{10, 20, 40});
  CHECK_THROWS_AS(parse_k_list("10,2.5"), InvalidConfig);
}

TEST_CASE("config text") {
  const RunConfig c = apply_config_text(
      "# comment\nenergy = 1.2,0.5\ntol-ode = 1e-10\nk_list = 5,10\nseed = 7\nbasepoint = \"4,1\"\n", RunConfig{});
  CHECK(c.energy == cplx(1.2, 0.5));
  CHECK(c.tol_ode == 1e-10);
  CHECK(c.k_list == std::vector<long>{5, 10});
  CHECK(c.seed == 7);
  CHECK(c.basepoint == cplx(4, 1));
  CHECK_THROWS_AS(apply_config_text("bogus = 1", RunConfig{}), InvalidConfig);
  CHECK_THROWS_AS(apply_config_text("energy", RunConfig{}), InvalidConfig);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol_quad = 0;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = RunConfig{};
  c.clearance = -1;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
}

TEST_CASE("field elements render as integer pairs") {
  CHECK(pair_string(FieldElement(make_rational(-5, 2))) == "(-5/2,0)");
  CHECK(pair_string(FieldElement::omega()) == "(0,1)");
}

TEST_CASE("simulate writes the CSV contract") {
  RunConfig c;
  c.T = 0;
  std::ostringstream csv;
  const auto r = cmd_simulate(c, csv);
  CHECK(r.exit_code == kSuccess);
  CHECK(csv.str().rfind("time,q1,q2,p1,p2,energy\n", 0) == 0);
  CHECK(r.report["rows"] == 1);

  c.T = 5;
  std::ostringstream csv2;
  const auto plane = cmd_simulate(c, csv2);
  CHECK(plane.report["max_plane_leakage"].get<double>() <= 1e-10);
}

TEST_CASE("simulate reports singular starts with exit code 2") {
  RunConfig c;
  c.q2 = 0.05;
  c.T = 1;
  std::ostringstream csv;
  const auto r = cmd_simulate(c, csv);
  CHECK(r.exit_code == kSingularInput);
}

TEST_CASE("monodromy command") {
  RunConfig c;
  const auto r = cmd_monodromy(c, "limit");
  const auto& m = r.report["monodromy"];
  CHECK(m["generator_count"] == 7);
  CHECK(m["contractible"]["pass"] == true);
  CHECK(m["det_at_zero_error"]["pass"] == true);
  CHECK(r.exit_code == kSuccess);
  CHECK_THROWS_AS(cmd_monodromy(c, "other"), InvalidConfig);
}

TEST_CASE("kovacic command") {
  const auto r = cmd_kovacic(RunConfig{});
  CHECK(r.report["certificate"]["verdict"] == "GroupSL2");
  CHECK(r.exit_code == kSuccess);
}

TEST_CASE("certify report carries tolerances and oracles") {
  const auto r = cmd_certify(RunConfig{});
  const auto& j = r.report;
  CHECK(j["kovacic"]["verdict"] == "GroupSL2");
  CHECK(j["monodromy"]["derived_depth2_power60"]["value"].get<double>() > 0.1);
  CHECK(j["overall_verdict"] == "NON_INTEGRABILITY_WITNESSED");
  bool has_2_1 = false;
  for (const auto& c : j["dynamics"]["critical_points"]) {
    if (c["x"].get<double>() == 2.0 && c["E"].get<double>() == 1.0) has_2_1 = true;
  }
  CHECK(has_2_1);
  for (const char* key : {"potential_spread", "f1_spread"}) {
    CHECK(j["calibration"][key].contains("tolerance"));
    CHECK(j["calibration"][key].contains("oracle"));
  }
  CHECK(j["failed_stages"].empty());
  // The base equation and the k = 80 transport disagree with their predictions; the report says so.
  CHECK(r.exit_code == kContradiction);
  CHECK(j["config"]["seed"] == 12345);
}
