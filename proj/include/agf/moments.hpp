#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agf/channel.hpp"
#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"

namespace agf {

// A finite set of unitaries treated as a candidate design.
struct DesignSet {
  std::size_t d = 1;
  std::vector<ComplexMatrix> elements;
  std::string label;
};

DesignSet full_clifford_design(int n);  // n <= 2, enumerated group
DesignSet sampled_clifford_design(int n, int count, const SeedStream& rng);
DesignSet haar_design(std::size_t d, int count, const SeedStream& rng);

// Ensemble selector for moment estimators.
struct Ensemble {
  enum class Kind { haar, clifford, design };
  Kind kind = Kind::haar;
  int qubits = 0;                      // clifford
  const DesignSet* design = nullptr;   // design (must outlive the call)

  static Ensemble haar() { return {Kind::haar, 0, nullptr}; }
  static Ensemble clifford(int n) { return {Kind::clifford, n, nullptr}; }
  static Ensemble of(const DesignSet& ds) { return {Kind::design, 0, &ds}; }
};

struct MomentReport {
  std::string ensemble;
  int k = 1;
  long samples = 0;
  double empirical = 0.0;
  std::optional<double> analytic;
  double std_error = 0.0;
};

std::string moment_report_csv_header();
std::string moment_report_csv_row(const MomentReport& r);

// S_T = d^2 (T, U) evaluated for one unitary.
double s_value(const ChoiMatrix& t, const ComplexMatrix& u);

// Closed-form Haar second moment of S_T,
//   ( d^2 |T|^2 + Tr(T(Id))^2 - ( |T(Id)|_2^2 + |T^+(Id)|_2^2 ) / d ) / (d^2 - 1).
double second_moment_analytic(const ChoiMatrix& t);

// Empirical k-th moment of S_T. Finite designs are averaged exactly
// (samples is ignored and the reported std_error is zero).
MomentReport moment_empirical(const ChoiMatrix& t, const Ensemble& ensemble, int k,
                              long samples, const SeedStream& rng);

// E[S^4] / E[S^2]^2 over the requested ensemble. Throws for T = 0.
double fourth_moment_ratio(const ChoiMatrix& t, const Ensemble& ensemble, long samples,
                           const SeedStream& rng);

// E |Tr U|^{2k} over Haar = sum of squared Specht dimensions with the row
// constraint; equals k! when k <= d.
long haar_trace_moment_analytic(std::size_t d, int k);

// Frame potential P_t = (1/N^2) sum_{jk} |Tr(U_j^+ U_k)|^{2t}, t in 1..3.
double frame_potential(const DesignSet& design, int t);

// Expansion coefficients c_k(X) = C F_avg(U_k, X) - C/d + 1 over a
// 2-design, C = d(d+1)(d^2-1); requires X unital and trace-preserving.
std::vector<double> design_expansion_coeffs(const ChoiMatrix& x, const DesignSet& design);

// Unitarity u(X) = |unital Liouville block|_F^2 / (d^2 - 1).
double unitarity(const ChoiMatrix& x);

// Left: population variance of F_avg(U_k, X) over the design. Right:
// u(X) / (d^2 (d+1)^2). Equal for exact 2-designs.
std::pair<double, double> agf_variance_identity_check(const ChoiMatrix& x,
                                                      const DesignSet& design);

struct TailRow {
  double threshold = 0.0;
  double empirical = 0.0;  // P[S >= t] over Haar samples of S = |Tr U|^2
  double bound = 0.0;      // e^{-kappa t + 2}, kappa = 1 - 1/(2e)
};

std::vector<TailRow> tail_check(std::size_t d, long samples, const SeedStream& rng,
                                const std::vector<double>& thresholds = {0, 1, 2, 4, 8});

}  // namespace agf
