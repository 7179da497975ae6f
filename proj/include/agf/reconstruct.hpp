#pragma once

#include <optional>
#include <string>

#include "agf/channel.hpp"
#include "agf/matrix.hpp"
#include "agf/measurement.hpp"
#include "agf/moments.hpp"

namespace agf {

struct SolverConfig {
  int max_iters = 20000;
  double tol_obj = 1e-9;   // relative objective-change tolerance
  double tol_feas = 1e-9;  // partial-trace feasibility tolerance

  enum class StepRule { fixed_inverse_lipschitz, backtracking };
  StepRule step_rule = StepRule::fixed_inverse_lipschitz;

  int dykstra_iters = 12;  // inner alternating-projection sweeps per step

  // Optional smoothed ell_1 data fit (Huber). Convergence-tested extension;
  // the reported objective stays the ell_2 residual norm.
  bool l1_huber = false;
  double huber_delta = 1e-6;
};

enum class SolverStatus { converged, max_iters, infeasible_tolerance };

const char* to_string(SolverStatus s);

struct ReconstructionResult {
  ChoiMatrix z_sharp;
  double objective = 0.0;    // ||A(Z) - f||_2 at the final iterate
  double feasibility = 0.0;  // max partial-trace deviation (Frobenius)
  int iterations = 0;
  SolverStatus status = SolverStatus::max_iters;
  std::optional<double> eps_rec;  // ||Z - X||_2 when ground truth is known
};

// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
HermitianMatrix project_psd(const HermitianMatrix& h);

// Orthogonal projection onto the affine set
// { Tr_1 Z = Tr_2 Z = Id/d, Tr Z = 1 }, in closed form through the
// partial-trace adjoints.
HermitianMatrix project_affine_utp(const HermitianMatrix& h);

// Dykstra alternation between the PSD cone and the affine set; returns a
// point of the affine set whose PSD defect is reported by `gap` (most
// negative eigenvalue, clamped at zero).
HermitianMatrix project_feasible_dykstra(const HermitianMatrix& h, int sweeps,
                                         double tol, double* gap = nullptr);

// Constrained least squares over unital quantum channels: accelerated
// projected gradient with Dykstra feasibility projections.
ReconstructionResult reconstruct(const MeasurementRecord& record, const SolverConfig& cfg,
                                 const ChoiMatrix* ground_truth = nullptr);

// Closed-form linear inversion over a full 2-design: assembles
// (1/N) sum_k c_k L(U_k), which equals the unital-TP part of the measured
// map for noiseless AGFs.
LiouvilleMatrix linear_inversion_2design(const std::vector<double>& agfs,
                                         const DesignSet& design);

// Schatten-p distance of Choi matrices, p in {1, 2}.
double reconstruction_error(const ChoiMatrix& z, const ChoiMatrix& x, int p);

std::string result_to_json(const ReconstructionResult& r);

}  // namespace agf
