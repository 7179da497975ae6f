#include "agf/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "agf/clifford.hpp"
#include "agf/format.hpp"
#include "agf/linalg.hpp"
#include "agf/parallel.hpp"
#include "agf/pauli.hpp"
#include "agf/schur_weyl.hpp"

#include "json.hpp"

namespace agf {

namespace {

SolverConfig solver_from_json(const nlohmann::json& j) {
  SolverConfig s;
  if (j.contains("max_iters")) s.max_iters = j["max_iters"].get<int>();
  if (j.contains("tol_obj")) s.tol_obj = j["tol_obj"].get<double>();
  if (j.contains("tol_feas")) s.tol_feas = j["tol_feas"].get<double>();
  if (j.contains("dykstra_iters")) s.dykstra_iters = j["dykstra_iters"].get<int>();
  if (j.contains("l1_huber")) s.l1_huber = j["l1_huber"].get<bool>();
  if (j.contains("huber_delta")) s.huber_delta = j["huber_delta"].get<double>();
  if (j.contains("step_rule")) {
    const std::string v = j["step_rule"].get<std::string>();
    if (v == "fixed_inverse_lipschitz")
      s.step_rule = SolverConfig::StepRule::fixed_inverse_lipschitz;
    else if (v == "backtracking")
      s.step_rule = SolverConfig::StepRule::backtracking;
    else
      throw std::invalid_argument("unknown step_rule: " + v);
  }
  return s;
}

nlohmann::json solver_to_json(const SolverConfig& s) {
  nlohmann::json j;
  j["max_iters"] = s.max_iters;
  j["tol_obj"] = s.tol_obj;
  j["tol_feas"] = s.tol_feas;
  j["dykstra_iters"] = s.dykstra_iters;
  j["l1_huber"] = s.l1_huber;
  j["huber_delta"] = s.huber_delta;
  j["step_rule"] = s.step_rule == SolverConfig::StepRule::backtracking
                       ? "backtracking"
                       : "fixed_inverse_lipschitz";
  return j;
}

// --- selftest helpers ------------------------------------------------------

struct CheckList {
  std::vector<SelfTestResult> results;

  void add(const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  }

  void close(const std::string& name, double observed, double expected, double tol) {
    const bool ok = std::abs(observed - expected) <= tol;
    add(name, ok,
        "observed " + format_double(observed) + ", expected " + format_double(expected) +
            " (tol " + format_double(tol) + ")");
  }

  void below(const std::string& name, double observed, double bound) {
    add(name, observed <= bound,
        "observed " + format_double(observed) + " <= bound " + format_double(bound));
  }
};

ChoiMatrix random_mixed_unitary_channel(std::size_t d, int terms, SeedStream& rng) {
  std::vector<double> w(terms);
  std::vector<ComplexMatrix> us;
  double sum = 0;
  for (auto& v : w) {
    v = rng.next_double() + 0.05;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  for (int i = 0; i < terms; ++i) us.push_back(haar_unitary(d, rng));
  return mixed_unitary_choi(w, us);
}

double max_entry_sigma_excess(const ComplexMatrix& exact, const TwirlMonteCarloResult& mc) {
  double worst = -1e300;
  for (std::size_t i = 0; i < exact.data.size(); ++i) {
    const double tol = 5.0 * mc.std_error.data[i] + 1e-9;
    worst = std::max(worst, std::abs(exact.data[i] - mc.mean.data[i]) - tol);
  }
  return worst;
}

void selftest_fast(CheckList& out) {
  // group counts and cardinality formula
  out.close("clifford-cardinality-n1", double(static_cast<long>(clifford_cardinality(1))), 24.0,
            0.0);
  out.close("clifford-enumeration-n1", double(enumerate_cliffords(1).size()), 24.0, 0.0);
  out.close("clifford-cardinality-n2", double(static_cast<long>(clifford_cardinality(2))),
            11520.0, 0.0);
  out.close("clifford-cardinality-n3", double(static_cast<long>(clifford_cardinality(3))),
            92897280.0, 0.0);

  DesignSet full1 = full_clifford_design(1);
  out.close("frame-potential-n1-t2", frame_potential(full1, 2), 2.0, 1e-10);
  out.close("frame-potential-n1-t3", frame_potential(full1, 3), 5.0, 1e-10);

  // projector structure at d = 2, k = 4
  {
    ComplexMatrix sum(16, 16);
    double worst_idem = 0.0;
    for (const auto& l : partitions(4, 2)) {
      IrrepData ir = young_projector(l, 2, 4);
      worst_idem = std::max(worst_idem, frobenius_norm(ir.projector.mat() * ir.projector.mat() -
                                                       ir.projector.mat()));
      sum += ir.projector.mat();
    }
    out.below("young-projector-idempotence-d2", worst_idem, 1e-10);
    out.below("young-projector-completeness-d2",
              frobenius_norm(sum - ComplexMatrix::identity(16)), 1e-10);
  }

  {
    HermitianMatrix q = q_projector(1);
    out.close("q-projector-trace-n1", trace(q.mat()).real(), 4.0, 1e-10);
    out.below("q-projector-idempotence-n1", frobenius_norm(q.mat() * q.mat() - q.mat()), 1e-10);
    out.below("flip-from-paulis-n1",
              max_abs_diff(flip_from_paulis(1).mat(), perm_operator(Perm{1, 0}, 2)), 1e-10);
  }

  SeedStream rng(20240801, 0);

  // twirl fixed points and small Monte Carlo cross-checks
  {
    ComplexMatrix a(8, 8);
    for (auto& v : a.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
    ComplexMatrix e = twirl_unitary(a, 2, 3);
    out.below("twirl-unitary-trace-preservation", std::abs(trace(e) - trace(a)), 1e-9);
    auto mc = twirl_monte_carlo(a, 2, 3, TwirlEnsemble::haar, 20000, SeedStream(11, 1));
    out.below("twirl-unitary-vs-mc-d2k3", max_entry_sigma_excess(e, mc), 0.0);

    ComplexMatrix b(16, 16);
    for (auto& v : b.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
    ComplexMatrix ec = twirl_clifford(b, 1);
    auto mcc = twirl_monte_carlo(b, 2, 4, TwirlEnsemble::clifford, 20000, SeedStream(11, 2));
    out.below("twirl-clifford-vs-mc-n1", max_entry_sigma_excess(ec, mcc), 0.0);
  }

  // second moment: exact design average equals the closed form
  {
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      ChoiMatrix t = random_mixed_unitary_channel(2, 2, rng);
      MomentReport r = moment_empirical(t, Ensemble::of(full1), 2, 0, SeedStream(0, 0));
      worst = std::max(worst, std::abs(r.empirical - second_moment_analytic(t)));
    }
    out.below("second-moment-design-exact-n1", worst, 1e-10);
  }

  // variance identity over the full one-qubit design
  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      RealMatrix l(4, 4);
      for (auto& v : l.data) v = rng.next_gaussian();
      ChoiMatrix x = choi_of_liouville(LiouvilleMatrix{2, std::move(l)});
      auto [lhs, rhs] = agf_variance_identity_check(x, full1);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    out.below("unitarity-variance-identity-n1", worst, 1e-10);
  }

  // 2-design expansion of unital TP channels
  {
    std::vector<LiouvilleMatrix> lk;
    for (const auto& u : full1.elements) lk.push_back(liouville_of_choi(choi_of_unitary(u)));
    double worst_rec = 0.0, worst_aff = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      ChoiMatrix x = random_mixed_unitary_channel(2, 3, rng);
      auto c = design_expansion_coeffs(x, full1);
      RealMatrix acc(4, 4);
      double mean = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        acc = acc + (c[k] / double(c.size())) * lk[k].matrix;
        mean += c[k] / double(c.size());
      }
      worst_rec = std::max(worst_rec, max_abs_diff(acc, liouville_of_choi(x).matrix));
      worst_aff = std::max(worst_aff, std::abs(mean - 1.0));
    }
    out.below("design-expansion-reconstruction-n1", worst_rec, 1e-9);
    out.below("design-expansion-affinity-n1", worst_aff, 1e-9);
  }

  // Pauli magnitude and Q sandwich bounds
  {
    auto ws = all_paulis_dense(1);
    double worst = -1e300;
    for (int rep = 0; rep < 5; ++rep) {
      ComplexMatrix a(2, 2), b(2, 2);
      for (auto& v : a.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
      for (auto& v : b.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
      const double bound = frobenius_norm(a) * frobenius_norm(b);
      for (const auto& wj : ws)
        for (const auto& wk : ws)
          worst = std::max(worst, std::abs(trace(wj * a * wk * b)) - bound);
    }
    out.below("pauli-magnitude-bound-n1", worst, 1e-12);

    HermitianMatrix q = q_projector(1);
    ComplexMatrix s(2, 2);
    s(0, 0) = 1.0;
    ComplexMatrix prod = kron(kron(s, s), kron(s, s));
    out.close("q-sandwich-saturation-n1", frobenius_norm(q.mat() * prod * q.mat()), 0.5, 1e-9);
  }

  // measurement adjoint identity
  {
    ChoiMatrix x = random_mixed_unitary_channel(2, 2, rng);
    MeasurementRecord rec = simulate_agfs(x, 10, NoiseSpec::none(), SeedStream(12, 0));
    MeasurementMap map(2, rec.settings);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      ComplexMatrix g(4, 4);
      for (auto& v : g.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
      HermitianMatrix z(cdouble(0.5, 0.0) * (g + adjoint(g)));
      std::vector<double> y(10);
      for (auto& v : y) v = rng.next_gaussian();
      auto az = map.apply(z.mat());
      double lhs = 0.0;
      for (int i = 0; i < 10; ++i) lhs += az[i] * y[i];
      double rhs = hs_dot(z.mat(), map.adjoint_apply(y)).real();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    out.below("measurement-adjoint-identity", worst, 1e-10);
  }
}

void selftest_full(CheckList& out) {
  SeedStream rng(20240802, 0);

  // two-qubit structural checks
  {
    HermitianMatrix q = q_projector(2);
    out.close("q-projector-trace-n2", trace(q.mat()).real(), 16.0, 1e-9);
    out.below("flip-from-paulis-n2",
              max_abs_diff(flip_from_paulis(2).mat(), perm_operator(Perm{1, 0}, 4)), 1e-10);
  }

  // exact Clifford twirl vs Monte Carlo at n=2
  {
    ComplexMatrix a(256, 256);
    for (auto& v : a.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
    ComplexMatrix e = twirl_clifford(a, 2);
    auto mc = twirl_monte_carlo(a, 4, 4, TwirlEnsemble::clifford, 20000, SeedStream(13, 0));
    out.below("twirl-clifford-vs-mc-n2", max_entry_sigma_excess(e, mc), 0.0);
  }

  // second moment Monte Carlo at d = 4 and 8
  for (std::size_t d : {4u, 8u}) {
    ChoiMatrix t = random_mixed_unitary_channel(d, 2, rng);
    MomentReport r = moment_empirical(t, Ensemble::haar(), 2, 30000, SeedStream(14, d));
    const double diff = std::abs(r.empirical - *r.analytic);
    out.below("second-moment-mc-d" + std::to_string(d), diff, 5.0 * r.std_error);
  }

  // fourth-moment boundedness across d in {2, 4}
  {
    DesignSet full2 = full_clifford_design(2);
    DesignSet full1 = full_clifford_design(1);
    double worst_ratio = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      for (const DesignSet* ds : {&full1, &full2}) {
        ChoiMatrix t = choi_of_unitary(haar_unitary(ds->d, rng));
        worst_ratio = std::max(
            worst_ratio, fourth_moment_ratio(t, Ensemble::of(*ds), 0, SeedStream(0, 0)));
      }
    }
    out.below("fourth-moment-ratio-bound", worst_ratio, 10.0);
  }

  // small recovery run at n = 2
  {
    SolverConfig cfg;
    cfg.step_rule = SolverConfig::StepRule::backtracking;
    cfg.dykstra_iters = 4;
    cfg.max_iters = 3000;
    cfg.tol_obj = 1e-9;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      SeedStream ts(15, trial);
      ChoiMatrix x = choi_of_unitary(haar_unitary(4, ts));
      MeasurementRecord rec = simulate_agfs(x, 80, NoiseSpec::none(), ts.derive(1));
      ReconstructionResult r = reconstruct(rec, cfg, &x);
      worst = std::max(worst, r.eps_rec.value_or(1.0));
    }
    out.below("noiseless-recovery-n2-m80", worst, 1e-4);
  }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("qubits")) cfg.qubits = j["qubits"].get<int>();
  if (j.contains("m_values")) cfg.m_values = j["m_values"].get<std::vector<int>>();
  if (j.contains("eta_values")) cfg.eta_values = j["eta_values"].get<std::vector<double>>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("solver")) cfg.solver = solver_from_json(j["solver"]);
  if (cfg.qubits < 1 || cfg.qubits > 3)
    throw std::invalid_argument("config: qubits must be 1..3 (dense solver cap)");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["qubits"] = cfg.qubits;
  j["m_values"] = cfg.m_values;
  j["eta_values"] = cfg.eta_values;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["output_path"] = cfg.output_path;
  j["solver"] = solver_to_json(cfg.solver);
  return j.dump(2);
}

std::string result_csv_header() {
  return "n,d,m,eta,trial,seed,eps_rec,objective,iterations,status,wall_time_ms";
}

std::string result_csv_row(const ResultRow& r) {
  std::string row;
  row += std::to_string(r.n) + "," + std::to_string(r.d) + "," + std::to_string(r.m) + ",";
  row += format_double(r.eta) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed);
  row += "," + format_double(r.eps_rec) + "," + format_double(r.objective) + ",";
  row += std::to_string(r.iterations);
  row += std::string(",") + to_string(r.status) + "," + format_double(r.wall_time_ms);
  return row;
}

std::uint64_t trial_stream_id(int n, int m, int eta_index, int trial) {
  std::uint64_t h = mix_hash(0x41474621ull, static_cast<std::uint64_t>(n));
  h = mix_hash(h, static_cast<std::uint64_t>(m));
  h = mix_hash(h, static_cast<std::uint64_t>(eta_index));
  h = mix_hash(h, static_cast<std::uint64_t>(trial));
  return h;
}

std::vector<ResultRow> run_simulate(const ExperimentConfig& cfg) {
  const int n = cfg.qubits;
  const std::size_t d = std::size_t{1} << n;
  const long total = static_cast<long>(cfg.m_values.size()) *
                     static_cast<long>(cfg.eta_values.size()) * cfg.trials;
  std::vector<ResultRow> rows(total);

  parallel_for(total, [&](long idx) {
    const int trial = static_cast<int>(idx % cfg.trials);
    const long cell = idx / cfg.trials;
    const int eta_idx = static_cast<int>(cell % cfg.eta_values.size());
    const int m_idx = static_cast<int>(cell / cfg.eta_values.size());
    const int m = cfg.m_values[m_idx];
    const double eta = cfg.eta_values[eta_idx];

    ResultRow row;
    row.n = n;
    row.d = d;
    row.m = m;
    row.eta = eta;
    row.trial = trial;
    row.seed = trial_stream_id(n, m, eta_idx, trial);

    const auto t0 = std::chrono::steady_clock::now();
    try {
      SeedStream ts(cfg.master_seed, row.seed);
      SeedStream channel_rng = ts.derive(0);
      ChoiMatrix x = choi_of_unitary(haar_unitary(d, channel_rng));
      const NoiseSpec noise = eta > 0.0 ? NoiseSpec::sphere(eta) : NoiseSpec::none();
      MeasurementRecord rec = simulate_agfs(x, m, noise, ts.derive(1));
      ReconstructionResult res = reconstruct(rec, cfg.solver, &x);
      row.eps_rec = res.eps_rec.value_or(0.0);
      row.objective = res.objective;
      row.iterations = res.iterations;
      row.status = res.status;
    } catch (const std::exception&) {
      // a failed cell is recorded, never dropped
      row.eps_rec = std::numeric_limits<double>::infinity();
      row.objective = std::numeric_limits<double>::infinity();
      row.iterations = 0;
      row.status = SolverStatus::infeasible_tolerance;
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows[idx] = row;
  });

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.output_path);
    out << result_csv_header() << "\n";
    for (const auto& r : rows) out << result_csv_row(r) << "\n";
    if (!out.good()) throw std::runtime_error("write failure: " + cfg.output_path);
  }
  return rows;
}

std::vector<SelfTestResult> run_selftest(bool full) {
  CheckList list;
  selftest_fast(list);
  if (full) selftest_full(list);
  return list.results;
}

UnitarityReport unitarity_report(const ChoiMatrix& x, const DesignSet& design) {
  UnitarityReport rep;
  rep.u = unitarity(x);
  auto [variance, rhs] = agf_variance_identity_check(x, design);
  const double d = static_cast<double>(x.d);
  rep.scaled_variance = variance * d * d * (d + 1.0) * (d + 1.0);
  rep.difference = rep.u - rep.scaled_variance;
  rep.frame_potential_t2 = frame_potential(design, 2);
  rep.design_ok = std::abs(rep.frame_potential_t2 - 2.0) < 1e-2;
  (void)rhs;
  return rep;
}

}  // namespace agf
