#pragma once

// Pipeline orchestration behind the command-line tool: configuration, one function per
// subcommand, and deterministic JSON rendering.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rell/kovacic.hpp"
#include "rell/monodromy.hpp"

namespace rell::report {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

enum ExitCode : int { kSuccess = 0, kInternalError = 1, kSingularInput = 2, kContradiction = 3 };

struct RunConfig {
  cplx energy{1.95, 0};  // physical energy; the family equations receive energy / calibration factor
  double tol_quad = 1e-14;
  double tol_ode = 1e-12;
  double tol_monodromy = 1e-12;
  cplx basepoint{5, 0};
  double clearance = 1e-3;
  std::vector<long> k_list{10, 20, 40, 80};
  std::uint64_t seed = 12345;
  std::string out_dir;  // empty: print to stdout
  // simulate
  double T = 5;
  double q2 = 3;
  double p2 = 0;
  double q1 = 0;
  double p1 = 0;
  // potential oracle chain
  double fd_step = 1e-4;
  int chain_points = 20;
  // derived subgroup test
  int derived_samples = 50;

  /// Throws InvalidConfig.
  void validate() const;
};

/// "re,im" or "re".
cplx parse_complex(const std::string& text);
/// "10,20,40".
std::vector<long> parse_k_list(const std::string& text);
/// Apply key = value lines ('#' starts a comment) on top of `base`.
RunConfig apply_config_text(const std::string& text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

json config_json(const RunConfig& cfg);

/// Integer-pair rendering "(a,b)" of a + b w.
std::string pair_string(const FieldElement& x);
json matrix_json(const monodromy::Matrix2& m);
json certificate_json(const kovacic::Certificate& cert);

/// Stable text: two-space indentation, shortest round-trip doubles, trailing newline.
std::string dump(const json& j);

struct CommandResult {
  json report;
  int exit_code = kSuccess;
};

/// Orbit from (q1, q2, p1, p2) over [0, T]; CSV rows go to `csv`.
CommandResult cmd_simulate(const RunConfig& cfg, std::ostream& csv);
CommandResult cmd_potential(const RunConfig& cfg);
CommandResult cmd_nve_check(const RunConfig& cfg);
/// selector "limit" or "family" (energy from cfg, shift from the first entry of k_list).
CommandResult cmd_monodromy(const RunConfig& cfg, const std::string& selector);
CommandResult cmd_kovacic(const RunConfig& cfg);
CommandResult cmd_certify(const RunConfig& cfg);

}  // namespace rell::report
