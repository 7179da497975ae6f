#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "agf/channel.hpp"
#include "agf/experiments.hpp"
#include "agf/format.hpp"
#include "agf/linalg.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

agf::ChoiMatrix make_channel(const std::string& spec, std::uint64_t seed, int qubits) {
  const std::size_t d = std::size_t{1} << qubits;
  if (spec == "depolarizing") return agf::depolarizing_choi(d);
  if (spec == "random-unitary") {
    agf::SeedStream rng(seed, 0xC0FFEE);
    return agf::choi_of_unitary(agf::haar_unitary(d, rng));
  }
  if (spec.rfind("mixture:", 0) == 0) {
    const double p = std::stod(spec.substr(8));
    agf::SeedStream rng(seed, 0xC0FFEE);
    agf::ChoiMatrix u = agf::choi_of_unitary(agf::haar_unitary(d, rng));
    agf::ComplexMatrix j = agf::cdouble(p, 0.0) * u.matrix.mat() +
                           agf::cdouble(1.0 - p, 0.0) * agf::depolarizing_choi(d).matrix.mat();
    return agf::ChoiMatrix{d, agf::HermitianMatrix(std::move(j))};
  }
  return agf::choi_from_csv(read_file(spec));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average-gate-fidelity channel reconstruction experiments"};
  app.require_subcommand(1);

  // ---- simulate -----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run reconstruction sweeps, write a CSV");
  std::string sim_config, sim_m, sim_eta, sim_out;
  int sim_qubits = -1, sim_trials = -1;
  std::int64_t sim_seed = -1;
  sim->add_option("--config", sim_config, "JSON config file");
  sim->add_option("--qubits", sim_qubits, "qubit count (1..3)");
  sim->add_option("--m", sim_m, "comma list of AGF counts");
  sim->add_option("--eta", sim_eta, "comma list of noise radii");
  sim->add_option("--trials", sim_trials, "trials per cell");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--out", sim_out, "output CSV path");

  // ---- selftest -----------------------------------------------------------
  auto* st = app.add_subcommand("selftest", "run the exact property suites");
  std::string st_level = "fast";
  st->add_option("--level", st_level, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}));

  // ---- unitarity ----------------------------------------------------------
  auto* un = app.add_subcommand("unitarity", "unitarity vs scaled AGF variance");
  std::string un_channel = "random-unitary", un_design = "full-n1";
  int un_count = 2000;
  std::uint64_t un_seed = 7;
  un->add_option("--channel", un_channel,
                 "depolarizing | random-unitary | mixture:<p> | <choi csv path>");
  un->add_option("--design", un_design, "full-n1 | full-n2 | sampled")
      ->check(CLI::IsMember({"full-n1", "full-n2", "sampled"}));
  un->add_option("--sampled-count", un_count, "element count for sampled designs");
  un->add_option("--seed", un_seed, "seed for sampled designs / random channels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      agf::ExperimentConfig cfg;
      if (!sim_config.empty()) cfg = agf::config_from_json(read_file(sim_config));
      if (sim_qubits > 0) cfg.qubits = sim_qubits;
      if (!sim_m.empty()) cfg.m_values = parse_int_list(sim_m);
      if (!sim_eta.empty()) cfg.eta_values = parse_double_list(sim_eta);
      if (sim_trials > 0) cfg.trials = sim_trials;
      if (sim_seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(sim_seed);
      if (!sim_out.empty()) cfg.output_path = sim_out;
      if (cfg.qubits < 1 || cfg.qubits > 3)
        throw std::invalid_argument("qubits must be 1..3");

      auto rows = agf::run_simulate(cfg);
      std::printf("%s\n", agf::result_csv_header().c_str());
      for (const auto& r : rows) std::printf("%s\n", agf::result_csv_row(r).c_str());
      if (!cfg.output_path.empty())
        std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.output_path.c_str());
      return 0;
    }

    if (*st) {
      auto results = agf::run_selftest(st_level == "full");
      int failures = 0;
      for (const auto& r : results) {
        std::printf("%s: %s (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
      }
      std::printf("%d/%zu checks passed\n", int(results.size()) - failures, results.size());
      return failures == 0 ? 0 : 1;
    }

    if (*un) {
      int qubits = un_design == "full-n2" ? 2 : 1;
      agf::ChoiMatrix x = make_channel(un_channel, un_seed, qubits);
      int n = 0;
      while ((std::size_t{1} << n) < x.d) ++n;

      agf::DesignSet design;
      if (un_design == "full-n1") {
        if (n != 1) throw std::invalid_argument("full-n1 design needs a 1-qubit channel");
        design = agf::full_clifford_design(1);
      } else if (un_design == "full-n2") {
        if (n != 2) throw std::invalid_argument("full-n2 design needs a 2-qubit channel");
        design = agf::full_clifford_design(2);
      } else {
        design = agf::sampled_clifford_design(n, un_count, agf::SeedStream(un_seed, 1));
      }

      agf::UnitarityReport rep = agf::unitarity_report(x, design);
      std::printf("unitarity u(X)            = %s\n", agf::format_double(rep.u).c_str());
      std::printf("Var[F_avg] * d^2 (d+1)^2  = %s\n",
                  agf::format_double(rep.scaled_variance).c_str());
      std::printf("difference                = %s\n",
                  agf::format_double(rep.difference).c_str());
      std::printf("frame potential P_2       = %s\n",
                  agf::format_double(rep.frame_potential_t2).c_str());
      if (!rep.design_ok)
        std::printf("warning: set is not a 2-design at this size; the identity "
                    "holds only approximately\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
