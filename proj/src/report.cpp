#include "rell/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "rell/dynamics.hpp"
#include "rell/errors.hpp"
#include "rell/potential.hpp"
#include "rell/variational.hpp"

namespace rell::report {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(text), &used);
    if (used != trim(text).size()) throw InvalidConfig("");
    return v;
  } catch (const std::exception&) {
    throw InvalidConfig("cannot read " + what + " from '" + text + "'");
  }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// One verifiable claim with its tolerance and the oracle behind it.
json check(double value, const std::string& relation, double tolerance, const std::string& oracle, bool predicted) {
  bool pass = false;
  if (relation == "<=") pass = value <= tolerance;
  if (relation == ">=") pass = value >= tolerance;
  return json{{"value", value},           {"relation", relation}, {"tolerance", tolerance},
              {"oracle", oracle},         {"pass", pass},         {"predicted_by_theory", predicted}};
}

cplx printed_energy(const RunConfig& cfg) { return cfg.energy / potential::calibration().potential_factor; }

monodromy::TransportOptions transport_options(const RunConfig& cfg) {
  monodromy::TransportOptions t;
  t.tol = cfg.tol_monodromy;
  t.clearance = cfg.clearance;
  return t;
}

json generator_json(const monodromy::MonodromyMatrix& m) {
  json j{{"loop", m.loop.label}, {"matrix", matrix_json(m.entries)}, {"det", complex_json(m.det)}};
  if (m.predicted_det) {
    j["predicted_det"] = complex_json(*m.predicted_det);
    j["det_residual"] = m.det_residual;
  }
  return j;
}

// Classify a failed stage for the exit code.
int failure_code(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const SingularInput&) {
    return kSingularInput;
  } catch (const SingularEncounter&) {
    return kSingularInput;
  } catch (const SingularityTooClose&) {
    return kSingularInput;
  } catch (...) {
    return kInternalError;
  }
}

std::string failure_text(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

// Collects check outcomes across stages.
struct Ledger {
  std::vector<std::string> contradictions;
  int exit_code = kSuccess;

  void note(const std::string& name, const json& c) {
    if (c.value("predicted_by_theory", false) && !c.value("pass", true)) contradictions.push_back(name);
  }
  void fail(const std::exception_ptr& ep) {
    const int code = failure_code(ep);
    if (exit_code == kSuccess || exit_code == kContradiction || code == kInternalError) exit_code = code;
  }
};

// ---------------------------------------------------------------------------------------------
// Stages; each returns its JSON block and records checks in the ledger.

json stage_calibration(const RunConfig& cfg, Ledger& led) {
  const potential::Calibration& cal = potential::calibration();
  json samples = json::array();
  for (const auto& s : cal.samples) {
    samples.push_back({{"q2", s.q2}, {"potential_ratio", s.potential_ratio}, {"f1_ratio", s.f1_ratio}});
  }
  json out{{"potential_factor", cal.potential_factor},
           {"f1_factor", cal.f1_factor},
           {"samples", samples},
           {"potential_spread", check(cal.potential_spread, "<=", 1e-10,
                                      "adaptive quadrature of J on the axis against the closed form", false)},
           {"f1_spread", check(cal.f1_spread, "<=", 1e-10,
                               "quadrature of the q1 second derivative against the closed form", false)}};
  (void)cfg;
  led.note("calibration.potential_spread", out["potential_spread"]);
  led.note("calibration.f1_spread", out["f1_spread"]);
  return out;
}

json stage_potential_chain(const RunConfig& cfg, Ledger& led) {
  std::vector<double> q2s;
  for (int i = 0; i < cfg.chain_points; ++i) q2s.push_back(2.1 + 3.9 * (i + 0.5) / cfg.chain_points);
  auto worst_of = [](const std::vector<potential::OracleChainPoint>& chain) {
    double worst = 0;
    for (const auto& p : chain) {
      const double scale = std::abs(p.quadrature);
      worst = std::max({worst, std::abs(p.closed - p.quadrature) / scale, std::abs(p.finite_diff - p.quadrature) / scale,
                        std::abs(p.finite_diff - p.closed) / scale});
    }
    return worst;
  };
  const auto chain = potential::f1_oracle_chain(q2s, cfg.tol_quad, 0.0);
  const auto fixed = potential::f1_oracle_chain(q2s, cfg.tol_quad, cfg.fd_step);
  json pts = json::array();
  for (const auto& p : chain) {
    pts.push_back({{"q2", p.q2},
                   {"closed", p.closed},
                   {"quadrature", p.quadrature},
                   {"finite_diff", p.finite_diff},
                   {"fd_step", p.step}});
  }
  json out{{"points", pts},
           {"max_relative_error",
            check(worst_of(chain), "<=", 1e-5, "closed form vs quadrature vs central difference of eval_J", false)},
           {"fixed_fd_step", cfg.fd_step},
           {"max_relative_error_fixed_step", worst_of(fixed)}};
  led.note("potential.chain", out["max_relative_error"]);
  return out;
}

json stage_dynamics(const RunConfig& cfg, Ledger& led) {
  json runs = json::array();
  double leak = 0;
  double drift = 0;
  dynamics::IntegrateOptions opt;
  opt.tol = cfg.tol_ode;
  opt.tol_quad = cfg.tol_quad;
  for (double q2 : {2.5, 3.0, 4.0, 5.0}) {
    const auto tr = dynamics::integrate({0, 0, q2, 0, 0}, 5.0, opt);
    leak = std::max(leak, tr.max_plane_leakage);
    drift = std::max(drift, tr.max_energy_drift);
    runs.push_back({{"q2", q2}, {"energy", tr.energy0}, {"max_plane_leakage", tr.max_plane_leakage},
                    {"max_energy_drift", tr.max_energy_drift}, {"steps", tr.stats.accepted}});
  }
  json out{{"T", 5.0},
           {"runs", runs},
           {"max_plane_leakage", check(leak, "<=", 1e-10, "integration of the full vector field from the plane", true)},
           {"max_energy_drift", check(drift, "<=", 1e-8, "Hamiltonian along the integrated orbit", false)}};
  led.note("dynamics.max_plane_leakage", out["max_plane_leakage"]);
  led.note("dynamics.max_energy_drift", out["max_energy_drift"]);

  const auto cps = dynamics::critical_points(1.5, 2.5);
  json list = json::array();
  double miss = 1e300;
  for (const auto& c : cps) {
    list.push_back({{"x", c.x}, {"E", c.E}, {"multiplicity", c.multiplicity}, {"residual", c.residual}});
    miss = std::min(miss, std::max({std::abs(c.x - 2), std::abs(c.E - 1), c.residual}));
  }
  out["critical_points"] = list;
  out["critical_point_2_1"] = check(miss, "<=", 1e-12, "bracketed root of the fixed-point equation", true);
  led.note("dynamics.critical_point_2_1", out["critical_point_2_1"]);
  return out;
}

json stage_nve(const RunConfig& cfg, Ledger& led) {
  variational::NveCheckConfig c;
  c.energy = cfg.energy.real();
  c.tol_ode = cfg.tol_ode;
  c.tol_quad = cfg.tol_quad;
  const auto r = variational::nve_oracle_check(c);
  const std::string fd = "finite-difference perturbation of the full orbit";
  json out{{"energy", r.energy},
           {"energy_printed", r.energy_printed},
           {"t_window", json::array({c.t_start, c.t_end})},
           {"tau_end", r.tau_end},
           {"delta", c.delta},
           {"base_equation", check(r.err_base, "<=", 1e-3, fd + " vs the base equation in t", true)},
           {"time_block_printed_f1", check(r.err_time_printed, "<=", 1e-3, fd + " vs the 2x2 block with the closed-form entry", false)},
           {"time_block_full_hessian", check(r.err_time_full, "<=", 1e-3, fd + " vs the 2x2 block with the full Hessian entry", false)},
           {"corrected_t_equation", check(r.err_corrected, "<=", 1e-3, fd + " vs the t equation rebuilt from the full Hessian", false)}};
  for (const char* k : {"base_equation", "time_block_printed_f1", "time_block_full_hessian", "corrected_t_equation"}) {
    led.note(std::string("nve.") + k, out[k]);
  }
  return out;
}

json stage_limit(const RunConfig& cfg, Ledger& led) {
  const auto lim = variational::limit_equation();
  const cplx Ep = printed_energy(cfg);
  const auto b3 = variational::BranchState::principal(3.0);
  const auto ref = lim.eval(b3.t);
  const double scale = std::max({std::abs(ref.a2), std::abs(ref.a1), std::abs(ref.a0)});
  json rows = json::array();
  std::vector<double> errs;
  for (long k : cfg.k_list) {
    const auto n = variational::shifted_normalized(b3, Ep, k);
    const double e = std::max({std::abs(n.a2 - ref.a2), std::abs(n.a1 - ref.a1), std::abs(n.a0 - ref.a0)}) / scale;
    json row{{"k", k}, {"error", e}};
    if (!errs.empty()) row["ratio"] = e / errs.back();
    errs.push_back(e);
    rows.push_back(row);
  }
  double ratio_lo = 1e300;
  double ratio_hi = -1e300;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    ratio_lo = std::min(ratio_lo, errs[i] / errs[i - 1]);
    ratio_hi = std::max(ratio_hi, errs[i] / errs[i - 1]);
  }
  json out{{"t", 3.0}, {"energy_printed", complex_json(Ep)}, {"table", rows}};
  out["min_ratio"] = check(ratio_lo, ">=", 0.4, "normalized family coefficients vs the limit equation", true);
  out["max_ratio"] = check(ratio_hi, "<=", 0.6, "normalized family coefficients vs the limit equation", true);
  led.note("limit.min_ratio", out["min_ratio"]);
  led.note("limit.max_ratio", out["max_ratio"]);

  const long kmax = *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
  const auto loop0 = monodromy::generator_loop(cfg.basepoint, FieldElement(0), lim.singular_points());
  const auto topt = transport_options(cfg);
  const auto m_lim = monodromy::transport(lim, loop0, topt).matrix;
  const auto m_k = monodromy::transport(variational::LinearODE2::family(Ep, kmax), loop0, topt,
                                        variational::BranchState::principal(cfg.basepoint))
                       .matrix;
  const double diff = monodromy::operator_norm(monodromy::subtract(m_k, m_lim));
  out["monodromy_k"] = kmax;
  out["monodromy_loop"] = loop0.label;
  out["monodromy_difference"] =
      check(diff, "<=", 1e-3, "transport of the family member vs the limit equation along the t=0 loop", true);
  led.note("limit.monodromy_difference", out["monodromy_difference"]);
  return out;
}

json stage_monodromy(const RunConfig& cfg, Ledger& led) {
  const auto lim = variational::limit_equation();
  monodromy::GeneratorOptions gopt;
  gopt.basepoint = cfg.basepoint;
  gopt.transport = transport_options(cfg);
  const auto gs = monodromy::generators(lim, gopt);
  json gens = json::array();
  double worst_det = 0;
  std::optional<cplx> det0;
  for (const auto& m : gs.finite) {
    gens.push_back(generator_json(m));
    worst_det = std::max(worst_det, m.det_residual);
    if (m.loop.enclosed && m.loop.enclosed->is_zero()) det0 = m.det;
  }
  json out{{"equation", lim.tag()},
           {"basepoint", complex_json(cfg.basepoint)},
           {"generator_count", gs.finite.size()},
           {"generators", gens},
           {"infinity", generator_json(gs.infinity)}};
  out["det_residual_max"] = check(worst_det, "<=", 1e-7, "exp(-2 pi i residue of a1/a2)", true);
  out["det_at_zero"] = complex_json(det0.value_or(cplx(NAN, NAN)));
  out["det_at_zero_error"] =
      check(det0 ? std::abs(*det0 + 1.0) : 1e300, "<=", 1e-7, "indicial exponents {0, 7/2} at t=0", true);
  out["product_relation"] =
      check(gs.product_residual, "<=", 1e-6, "ordered product of generators times the loop at infinity", true);

  const auto sing = lim.singular_points();
  const auto topt = transport_options(cfg);
  const auto h1 = monodromy::transport(lim, monodromy::generator_loop(cfg.basepoint, FieldElement(0), sing, 0.25, 0.1), topt).matrix;
  const auto h2 = monodromy::transport(lim, monodromy::generator_loop(cfg.basepoint, FieldElement(0), sing, 0.25, 0.3), topt).matrix;
  out["homotopy"] = check(monodromy::operator_norm(monodromy::subtract(h1, h2)), "<=", 1e-7,
                          "t=0 loop at radii 0.1 and 0.3", true);
  const auto contractible = monodromy::circle_loop(cfg.basepoint, cfg.basepoint - cplx(0.5, 0), true);
  const auto mc = monodromy::transport(lim, contractible, topt).matrix;
  out["contractible"] = check(monodromy::operator_norm(monodromy::subtract(mc, monodromy::identity())), "<=", 1e-9,
                              "loop enclosing no singular point", false);

  std::vector<monodromy::Matrix2> mats;
  for (const auto& m : gs.finite) mats.push_back(m.entries);
  out["seed"] = cfg.seed;
  const double d2 = monodromy::derived_power_test(mats, 2, 60, cfg.derived_samples, cfg.seed);
  const double d3 = monodromy::derived_power_test(mats, 3, 120, cfg.derived_samples, cfg.seed);
  out["derived_depth2_power60"] = check(d2, ">=", 0.1, "random nested commutators of the generators", true);
  out["derived_depth3_power120"] = check(d3, ">=", 0.1, "random nested commutators of the generators", true);

  // Sheaf translation: continuing the base equation along this loop lands on member k = 1.
  const auto sl = monodromy::sheaf_shift_loop(cfg.basepoint);
  const auto b0 = variational::BranchState::principal(cfg.basepoint);
  const cplx Ep = printed_energy(cfg);
  const auto end = monodromy::continue_branch(sl, b0);
  const auto moved = variational::base_coeffs(end, Ep);
  const auto target = variational::shifted_coeffs(b0, Ep, 1);
  const double sc = std::max({std::abs(target.a2), std::abs(target.a1), std::abs(target.a0)});
  const double mis =
      std::max({std::abs(moved.a2 - target.a2), std::abs(moved.a1 - target.a1), std::abs(moved.a0 - target.a0)}) / sc;
  out["sheaf_translation"] = {{"loop", sl.label},
                              {"coefficient_match", check(mis, "<=", 1e-8, "base equation continued along the loop vs member k=1", false)}};

  for (const char* k : {"det_residual_max", "det_at_zero_error", "product_relation", "homotopy", "contractible",
                        "derived_depth2_power60", "derived_depth3_power120"}) {
    led.note(std::string("monodromy.") + k, out[k]);
  }
  led.note("monodromy.sheaf_translation", out["sheaf_translation"]["coefficient_match"]);
  return out;
}

json stage_singularities(const RunConfig&, Ledger& led) {
  const auto lim = variational::limit_equation();
  const auto ie = variational::indicial_exponents(lim, FieldElement(0));
  json out;
  json exps = json::array();
  bool match = false;
  if (ie.exact) {
    exps = json::array({pair_string(ie.exact->first), pair_string(ie.exact->second)});
    auto lo = std::min(ie.exact->first, ie.exact->second);
    auto hi = std::max(ie.exact->first, ie.exact->second);
    match = lo == FieldElement(0) && hi == FieldElement(make_rational(7, 2));
  }
  out["indicial_at_zero"] = {{"exponents", exps},
                             {"residue", pair_string(ie.p_residue)},
                             {"matches_0_and_7_2", match},
                             {"oracle", "exact Frobenius indicial polynomial"}};
  if (!match) led.contradictions.push_back("singularities.indicial_at_zero");
  json finite = json::array();
  for (const auto& p : lim.singular_points()) {
    std::string kind = "regular";
    try {
      variational::indicial_exponents(lim, p);
    } catch (const IrregularSingular&) {
      kind = "irregular";
    }
    if (kind != "regular") led.contradictions.push_back("singularities.finite " + p.str());
    finite.push_back({{"point", pair_string(p)}, {"type", kind}});
  }
  out["finite"] = finite;
  const auto inf = variational::singularity_at_infinity(lim);
  out["infinity"] = {{"p_valuation", inf.p_valuation},
                     {"q_valuation", inf.q_valuation},
                     {"regular", inf.regular},
                     {"predicted_by_theory", true},
                     {"oracle", "valuations of a1/a2 and a0/a2 at infinity"}};
  if (!inf.regular) led.contradictions.push_back("singularities.infinity_regular");
  return out;
}

json stage_kovacic(Ledger& led, kovacic::Verdict& verdict) {
  const auto cert = kovacic::kovacic_run(variational::limit_equation());
  verdict = cert.verdict;
  if (cert.verdict != kovacic::Verdict::GroupSL2) led.contradictions.push_back("kovacic.verdict");
  return certificate_json(cert);
}

template <class F>
json run_stage(const char* name, Ledger& led, json& failed, F&& f) {
  try {
    return f();
  } catch (...) {
    const auto ep = std::current_exception();
    led.fail(ep);
    failed.push_back({{"stage", name}, {"error", failure_text(ep)}});
    return json{{"status", "failed"}, {"error", failure_text(ep)}};
  }
}

int finish_code(const Ledger& led) {
  if (led.exit_code != kSuccess) return led.exit_code;
  return led.contradictions.empty() ? kSuccess : kContradiction;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

void RunConfig::validate() const {
  for (double v : {tol_quad, tol_ode, tol_monodromy}) {
    if (!(v > 0)) throw InvalidConfig("tolerances must be positive");
  }
  if (!(clearance > 0)) throw InvalidConfig("clearance must be positive");
  if (k_list.empty()) throw InvalidConfig("k-list must not be empty");
  if (!(T >= 0)) throw InvalidConfig("T must be nonnegative");
  if (!(fd_step > 0)) throw InvalidConfig("finite-difference step must be positive");
  if (chain_points < 1) throw InvalidConfig("chain needs at least one point");
  if (derived_samples < 1) throw InvalidConfig("derived test needs at least one sample");
}

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text, "complex number"), 0};
  return {parse_double(text.substr(0, comma), "real part"), parse_double(text.substr(comma + 1), "imaginary part")};
}

std::vector<long> parse_k_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = parse_double(item, "k-list entry");
    if (v != std::floor(v) || v < 1) throw InvalidConfig("k-list entries must be positive integers");
    out.push_back(static_cast<long>(v));
  }
  if (out.empty()) throw InvalidConfig("k-list must not be empty");
  return out;
}

RunConfig apply_config_text(const std::string& text, RunConfig cfg) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidConfig("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "energy") cfg.energy = parse_complex(value);
    else if (key == "tol_quad") cfg.tol_quad = parse_double(value, key);
    else if (key == "tol_ode") cfg.tol_ode = parse_double(value, key);
    else if (key == "tol_monodromy") cfg.tol_monodromy = parse_double(value, key);
    else if (key == "basepoint") cfg.basepoint = parse_complex(value);
    else if (key == "clearance") cfg.clearance = parse_double(value, key);
    else if (key == "k_list") cfg.k_list = parse_k_list(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "out") cfg.out_dir = value;
    else if (key == "T") cfg.T = parse_double(value, key);
    else if (key == "q1") cfg.q1 = parse_double(value, key);
    else if (key == "q2") cfg.q2 = parse_double(value, key);
    else if (key == "p1") cfg.p1 = parse_double(value, key);
    else if (key == "p2") cfg.p2 = parse_double(value, key);
    else if (key == "fd_step") cfg.fd_step = parse_double(value, key);
    else if (key == "chain_points") cfg.chain_points = static_cast<int>(parse_double(value, key));
    else if (key == "derived_samples") cfg.derived_samples = static_cast<int>(parse_double(value, key));
    else throw InvalidConfig("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_config_text(ss.str(), std::move(base));
}

json config_json(const RunConfig& cfg) {
  return json{{"energy", complex_json(cfg.energy)},
              {"tol_quad", cfg.tol_quad},
              {"tol_ode", cfg.tol_ode},
              {"tol_monodromy", cfg.tol_monodromy},
              {"basepoint", complex_json(cfg.basepoint)},
              {"clearance", cfg.clearance},
              {"k_list", cfg.k_list},
              {"seed", cfg.seed},
              {"fd_step", cfg.fd_step},
              {"chain_points", cfg.chain_points},
              {"derived_samples", cfg.derived_samples}};
}

std::string pair_string(const FieldElement& x) { return x.str(); }

json matrix_json(const monodromy::Matrix2& m) {
  return json::array({json::array({complex_json(m[0][0]), complex_json(m[0][1])}),
                      json::array({complex_json(m[1][0]), complex_json(m[1][1])})});
}

json certificate_json(const kovacic::Certificate& cert) {
  json cases = json::array();
  for (const auto& c : cert.cases) {
    json cands = json::array();
    for (const auto& k : c.candidates) {
      cands.push_back({{"choice", k.signs}, {"d", k.degree}, {"admissible", k.admissible}, {"outcome", k.outcome}});
    }
    json jc{{"case", c.case_id},
            {"necessary_conditions", c.necessary_conditions},
            {"necessary_detail", c.necessary_detail},
            {"local_data", c.local_data},
            {"candidate_count", c.candidates.size()},
            {"admissible_count", c.admissible_count},
            {"candidates", cands},
            {"success", c.success}};
    if (c.case_id == 3 && c.success) jc["n"] = c.n;
    if (c.theta) jc["theta"] = to_string(*c.theta);
    if (c.polynomial) jc["polynomial"] = to_string(*c.polynomial);
    if (c.omega) jc["omega"] = to_string(*c.omega);
    cases.push_back(jc);
  }
  json poles = json::array();
  for (const auto& p : cert.profile.finite) poles.push_back({{"point", pair_string(p.point)}, {"order", p.order}});
  json out{{"verdict", kovacic::verdict_name(cert.verdict)},
           {"r", to_string(cert.r)},
           {"poles", poles},
           {"infinity_order", cert.profile.infinity_order},
           {"identity_component", cert.identity_component},
           {"cases", cases}};
  if (cert.verdict == kovacic::Verdict::Liouvillian) {
    out["liouvillian_case"] = cert.liouvillian_case;
    out["riccati_verified"] = cert.riccati_verified;
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CommandResult cmd_simulate(const RunConfig& cfg, std::ostream& csv) {
  cfg.validate();
  CommandResult res;
  dynamics::IntegrateOptions opt;
  opt.tol = cfg.tol_ode;
  opt.tol_quad = cfg.tol_quad;
  const dynamics::PhaseState s0{0, cfg.q1, cfg.q2, cfg.p1, cfg.p2};
  json start{{"q1", cfg.q1}, {"q2", cfg.q2}, {"p1", cfg.p1}, {"p2", cfg.p2}};
  try {
    const auto tr = dynamics::integrate(s0, cfg.T, opt);
    dynamics::write_csv(csv, tr, cfg.tol_quad);
    res.report = {{"command", "simulate"},
                  {"start", start},
                  {"T", cfg.T},
                  {"rows", tr.states.size()},
                  {"energy", tr.energy0},
                  {"max_energy_drift", tr.max_energy_drift},
                  {"max_plane_leakage", tr.max_plane_leakage},
                  {"accepted_steps", tr.stats.accepted},
                  {"rejected_steps", tr.stats.rejected}};
  } catch (const SingularEncounter& e) {
    const auto& s = e.state();
    res.report = {{"command", "simulate"},
                  {"start", start},
                  {"T", cfg.T},
                  {"error", e.what()},
                  {"time", e.time()},
                  {"state", json::array({s[0], s[1], s[2], s[3]})}};
    res.exit_code = kSingularInput;
  }
  return res;
}

CommandResult cmd_potential(const RunConfig& cfg) {
  cfg.validate();
  Ledger led;
  CommandResult res;
  json failed = json::array();
  res.report["command"] = "potential";
  res.report["config"] = config_json(cfg);
  json axis = json::array();
  for (const auto& c : potential::sigma_axis_candidates()) axis.push_back(pair_string(c));
  res.report["axis_singular_candidates"] = axis;
  res.report["calibration"] = run_stage("calibration", led, failed, [&] { return stage_calibration(cfg, led); });
  res.report["oracle_chain"] = run_stage("oracle_chain", led, failed, [&] { return stage_potential_chain(cfg, led); });
  res.report["failed_stages"] = failed;
  res.report["contradictions"] = led.contradictions;
  res.exit_code = finish_code(led);
  return res;
}

CommandResult cmd_nve_check(const RunConfig& cfg) {
  cfg.validate();
  Ledger led;
  CommandResult res;
  json failed = json::array();
  res.report["command"] = "nve-check";
  res.report["config"] = config_json(cfg);
  res.report["nve"] = run_stage("nve", led, failed, [&] { return stage_nve(cfg, led); });
  res.report["limit"] = run_stage("limit", led, failed, [&] { return stage_limit(cfg, led); });
  res.report["failed_stages"] = failed;
  res.report["contradictions"] = led.contradictions;
  res.exit_code = finish_code(led);
  return res;
}

CommandResult cmd_monodromy(const RunConfig& cfg, const std::string& selector) {
  cfg.validate();
  Ledger led;
  CommandResult res;
  json failed = json::array();
  res.report["command"] = "monodromy";
  res.report["config"] = config_json(cfg);
  if (selector == "limit") {
    res.report["monodromy"] = run_stage("monodromy", led, failed, [&] { return stage_monodromy(cfg, led); });
  } else if (selector == "family") {
    res.report["monodromy"] = run_stage("monodromy", led, failed, [&] {
      const long k = cfg.k_list.front();
      const auto fam = variational::LinearODE2::family(printed_energy(cfg), k);
      monodromy::GeneratorOptions gopt;
      gopt.basepoint = cfg.basepoint;
      gopt.transport = transport_options(cfg);
      const auto gs = monodromy::generators(fam, gopt);
      json gens = json::array();
      for (const auto& m : gs.finite) gens.push_back(generator_json(m));
      return json{{"equation", fam.tag()},
                  {"energy_printed", complex_json(printed_energy(cfg))},
                  {"k", k},
                  {"basepoint", complex_json(cfg.basepoint)},
                  {"generator_count", gs.finite.size()},
                  {"generators", gens},
                  {"infinity", generator_json(gs.infinity)}};
    });
  } else {
    throw InvalidConfig("equation selector must be 'limit' or 'family'");
  }
  res.report["failed_stages"] = failed;
  res.report["contradictions"] = led.contradictions;
  res.exit_code = finish_code(led);
  return res;
}

CommandResult cmd_kovacic(const RunConfig& cfg) {
  cfg.validate();
  Ledger led;
  CommandResult res;
  json failed = json::array();
  kovacic::Verdict verdict = kovacic::Verdict::Liouvillian;
  res.report["command"] = "kovacic";
  res.report["equation"] = variational::limit_equation().tag();
  res.report["certificate"] = run_stage("kovacic", led, failed, [&] { return stage_kovacic(led, verdict); });
  res.report["failed_stages"] = failed;
  res.report["contradictions"] = led.contradictions;
  res.exit_code = finish_code(led);
  return res;
}

CommandResult cmd_certify(const RunConfig& cfg) {
  cfg.validate();
  Ledger led;
  CommandResult res;
  json failed = json::array();
  json& r = res.report;
  r["command"] = "certify";
  r["config"] = config_json(cfg);
  r["calibration"] = run_stage("calibration", led, failed, [&] { return stage_calibration(cfg, led); });
  r["potential"] = run_stage("potential", led, failed, [&] { return stage_potential_chain(cfg, led); });
  r["dynamics"] = run_stage("dynamics", led, failed, [&] { return stage_dynamics(cfg, led); });
  r["nve"] = run_stage("nve", led, failed, [&] { return stage_nve(cfg, led); });
  r["limit"] = run_stage("limit", led, failed, [&] { return stage_limit(cfg, led); });
  r["monodromy"] = run_stage("monodromy", led, failed, [&] { return stage_monodromy(cfg, led); });
  r["singularities"] = run_stage("singularities", led, failed, [&] { return stage_singularities(cfg, led); });
  kovacic::Verdict verdict = kovacic::Verdict::Liouvillian;
  r["kovacic"] = run_stage("kovacic", led, failed, [&] { return stage_kovacic(led, verdict); });

  double deviation = 0;
  if (r["monodromy"].contains("derived_depth2_power60")) {
    deviation = r["monodromy"]["derived_depth2_power60"]["value"].get<double>();
  }
  const bool witnessed = verdict == kovacic::Verdict::GroupSL2 && deviation >= 0.1;
  r["overall_verdict"] = witnessed ? "NON_INTEGRABILITY_WITNESSED" : "NOT_WITNESSED";
  r["overall_rule"] = "kovacic verdict GroupSL2 and derived_depth2_power60 deviation >= 0.1";
  r["failed_stages"] = failed;
  r["contradictions"] = led.contradictions;
  res.exit_code = finish_code(led);
  return res;
}

}  // namespace rell::report
