#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agf/moments.hpp"
#include "agf/reconstruct.hpp"

namespace agf {

// Sweep definition for the reconstruction experiments: for every
// (m, eta, trial) cell a Haar-random unitary channel is drawn, measured
// against random Cliffords, and reconstructed.
struct ExperimentConfig {
  int qubits = 2;
  std::vector<int> m_values{50, 100, 200};
  std::vector<double> eta_values{0.0};
  int trials = 10;
  std::uint64_t master_seed = 1;
  SolverConfig solver = default_sweep_solver();
  std::string output_path;

  // Sweeps default to the faster adaptive-step profile; single calls to
  // reconstruct() keep the conservative SolverConfig defaults.
  static SolverConfig default_sweep_solver() {
    SolverConfig s;
    s.step_rule = SolverConfig::StepRule::backtracking;
    s.dykstra_iters = 4;
    return s;
  }
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
  int n = 0;
  std::size_t d = 0;
  int m = 0;
  double eta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double eps_rec = 0.0;
  double objective = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::max_iters;
  double wall_time_ms = 0.0;
};

std::string result_csv_header();
std::string result_csv_row(const ResultRow& r);

// Per-trial stream id; exposed so that single cells can be reproduced in
// isolation.
std::uint64_t trial_stream_id(int n, int m, int eta_index, int trial);

// Runs the sweep (trials in parallel, deterministic row order) and writes
// the CSV when output_path is set.
std::vector<ResultRow> run_simulate(const ExperimentConfig& cfg);

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Property suites over the exactly checkable identities. The fast level
// covers one-qubit exact checks; full adds the two-qubit twirl oracles,
// larger Monte Carlo comparisons, and a small recovery run.
std::vector<SelfTestResult> run_selftest(bool full);

struct UnitarityReport {
  double u = 0.0;                // unitarity of the channel
  double scaled_variance = 0.0;  // Var[F_avg] * d^2 (d+1)^2 over the design
  double difference = 0.0;
  double frame_potential_t2 = 0.0;
  bool design_ok = false;  // |P_2 - 2| small enough to trust the identity
};

UnitarityReport unitarity_report(const ChoiMatrix& x, const DesignSet& design);

}  // namespace agf
