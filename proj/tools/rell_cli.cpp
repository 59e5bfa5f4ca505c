// Command-line front end: simulate | potential | nve-check | monodromy | kovacic | certify.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rell/errors.hpp"
#include "rell/report.hpp"

namespace {

namespace rr = rell::report;

struct FlagText {
  std::string config;
  std::string energy;
  std::string basepoint;
  std::string k_list;
  std::string equation = "limit";
};

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rell::Error("cannot write " + path.string());
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit, monodromy and Kovacic checks for the two-degree-of-freedom Hamiltonian with potential J"};
  app.require_subcommand(1);
  app.fallthrough();

  rr::RunConfig cfg;
  FlagText text;
  auto* o_config = app.add_option("--config", text.config, "key = value file; flags override it");
  auto* o_energy = app.add_option("--energy", text.energy, "energy as re,im");
  auto* o_tol_ode = app.add_option("--tol-ode", cfg.tol_ode, "orbit and variational integrator tolerance");
  auto* o_tol_quad = app.add_option("--tol-quad", cfg.tol_quad, "quadrature tolerance");
  auto* o_tol_mono = app.add_option("--tol-monodromy", cfg.tol_monodromy, "transport integrator tolerance");
  auto* o_base = app.add_option("--basepoint", text.basepoint, "monodromy basepoint as re,im");
  auto* o_clear = app.add_option("--clearance", cfg.clearance, "minimum distance of paths to singular points");
  auto* o_k = app.add_option("--k-list", text.k_list, "sheaf shifts, e.g. 10,20,40,80");
  auto* o_seed = app.add_option("--seed", cfg.seed, "seed of the random commutator words");
  auto* o_out = app.add_option("--out", cfg.out_dir, "output directory (stdout when absent)");

  auto* sim = app.add_subcommand("simulate", "integrate an orbit and write CSV");
  auto* o_T = sim->add_option("--T", cfg.T, "final time");
  auto* o_q1 = sim->add_option("--q1", cfg.q1, "initial q1");
  auto* o_q2 = sim->add_option("--q2", cfg.q2, "initial q2");
  auto* o_p1 = sim->add_option("--p1", cfg.p1, "initial p1");
  auto* o_p2 = sim->add_option("--p2", cfg.p2, "initial p2");
  auto* pot = app.add_subcommand("potential", "calibration and the three-way F1 check");
  auto* nve = app.add_subcommand("nve-check", "variational oracle and the large-k limit");
  auto* mono = app.add_subcommand("monodromy", "monodromy generators and tests");
  mono->add_option("--equation", text.equation, "limit or family")->check(CLI::IsMember({"limit", "family"}));
  auto* kov = app.add_subcommand("kovacic", "Kovacic certificate of the limit equation");
  auto* cert = app.add_subcommand("certify", "full pipeline report");

  CLI11_PARSE(app, argc, argv);

  try {
    // File values first, then explicit flags on top.
    const rr::RunConfig from_flags = cfg;
    if (*o_config) cfg = rr::load_config_file(text.config, rr::RunConfig{});
    auto take = [](CLI::Option* o, auto& dst, const auto& src) {
      if (*o) dst = src;
    };
    take(o_tol_ode, cfg.tol_ode, from_flags.tol_ode);
    take(o_tol_quad, cfg.tol_quad, from_flags.tol_quad);
    take(o_tol_mono, cfg.tol_monodromy, from_flags.tol_monodromy);
    take(o_clear, cfg.clearance, from_flags.clearance);
    take(o_seed, cfg.seed, from_flags.seed);
    take(o_out, cfg.out_dir, from_flags.out_dir);
    take(o_T, cfg.T, from_flags.T);
    take(o_q1, cfg.q1, from_flags.q1);
    take(o_q2, cfg.q2, from_flags.q2);
    take(o_p1, cfg.p1, from_flags.p1);
    take(o_p2, cfg.p2, from_flags.p2);
    if (*o_energy) cfg.energy = rr::parse_complex(text.energy);
    if (*o_base) cfg.basepoint = rr::parse_complex(text.basepoint);
    if (*o_k) cfg.k_list = rr::parse_k_list(text.k_list);
    cfg.validate();

    std::string name;
    rr::CommandResult res;
    std::ostringstream csv;
    if (*sim) {
      name = "simulate";
      res = rr::cmd_simulate(cfg, csv);
    } else if (*pot) {
      name = "potential";
      res = rr::cmd_potential(cfg);
    } else if (*nve) {
      name = "nve-check";
      res = rr::cmd_nve_check(cfg);
    } else if (*mono) {
      name = "monodromy";
      res = rr::cmd_monodromy(cfg, text.equation);
    } else if (*kov) {
      name = "kovacic";
      res = rr::cmd_kovacic(cfg);
    } else if (*cert) {
      name = "certify";
      res = rr::cmd_certify(cfg);
    }

    const std::string body = rr::dump(res.report);
    if (cfg.out_dir.empty()) {
      if (*sim) {
        std::cout << csv.str();
        std::cerr << body;
      } else {
        std::cout << body;
      }
    } else {
      const std::filesystem::path dir(cfg.out_dir);
      std::filesystem::create_directories(dir);
      write_file(dir / (name + ".json"), body);
      std::cout << "wrote " << (dir / (name + ".json")).string() << "\n";
      if (*sim) {
        write_file(dir / "trajectory.csv", csv.str());
        std::cout << "wrote " << (dir / "trajectory.csv").string() << "\n";
      }
    }
    if (res.report.contains("contradictions") && !res.report["contradictions"].empty()) {
      std::cerr << "contradictions:";
      for (const auto& c : res.report["contradictions"]) std::cerr << " " << c.get<std::string>();
      std::cerr << "\n";
    }
    return res.exit_code;
  } catch (const rell::SingularInput& e) {
    std::cerr << "singular input: " << e.what() << "\n";
    return rr::kSingularInput;
  } catch (const rell::SingularEncounter& e) {
    std::cerr << "singular encounter: " << e.what() << "\n";
    return rr::kSingularInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rr::kInternalError;
  }
}
