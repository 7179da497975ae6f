#pragma once

#include <string>
#include <vector>

#include "agf/linalg.hpp"
#include "agf/matrix.hpp"

namespace agf {

// Choi matrix J(X) = (X (x) Id)(|psi><psi|) of a map on H_d, stored on the
// d^2-dimensional doubled space with the map's output as the first tensor
// factor. Quantum channels carry unit trace in this convention.
//
// Vectorisation: vec(T) flattens row-major, so the Choi matrix of a unitary
// channel is (1/d) vec(U) vec(U)^dagger.
struct ChoiMatrix {
  std::size_t d = 1;
  HermitianMatrix matrix;  // dim d*d
};

ChoiMatrix choi_of_unitary(const ComplexMatrix& u);
ChoiMatrix identity_channel_choi(std::size_t d);
ChoiMatrix depolarizing_choi(std::size_t d);  // J = Id / d^2

// Convex mixture of unitary channels sum_i p_i U_i . U_i^dagger.
ChoiMatrix mixed_unitary_choi(const std::vector<double>& weights,
                              const std::vector<ComplexMatrix>& unitaries);

// Hilbert-Schmidt inner product (J(X), J(Y)); the imaginary part must
// vanish (both arguments are Hermitian) and is asserted small.
double hs_inner(const ChoiMatrix& x, const ChoiMatrix& y);

// Average gate fidelity between a unitary channel C and a map X,
//   F = [ d (J(C), J(X)) + Tr(X^dagger(Id))/d ] / (d + 1).
// For trace-preserving X the second term is 1; the same expression is the
// correct generalisation when X is not TP (use is_trace_preserving to flag
// such inputs).
double avg_gate_fidelity(const ChoiMatrix& c_unitary, const ChoiMatrix& x);

// Closed form for two unitaries: ( |Tr(C^dagger U)|^2 / d + 1 ) / (d + 1).
double unitary_agf(const ComplexMatrix& c, const ComplexMatrix& u);

// Apply the map to an operator: X(A), contracted from the Choi matrix.
ComplexMatrix apply_choi(const ChoiMatrix& x, const ComplexMatrix& a);

ComplexMatrix choi_output_identity(const ChoiMatrix& x);          // X(Id)
ComplexMatrix choi_adjoint_output_identity(const ChoiMatrix& x);  // X^dagger(Id)

bool is_trace_preserving(const ChoiMatrix& x, double tol = 1e-8);
bool is_unital_tp(const ChoiMatrix& x, double tol = 1e-8);

// Liouville (Pauli transfer) matrix: real d^2 x d^2 matrix over the
// normalised Pauli basis W_k / sqrt(d), index 0 = identity. Entry
// L_jk = Tr(W_j X(W_k)) / d. Requires d = 2^n.
struct LiouvilleMatrix {
  std::size_t d = 1;
  RealMatrix matrix;
};

LiouvilleMatrix liouville_of_choi(const ChoiMatrix& x);
ChoiMatrix choi_of_liouville(const LiouvilleMatrix& l);

// Orthogonal projection onto the linear hull of unital trace-preserving
// maps: zeroes row 0 and column 0 of the Liouville matrix except the (0,0)
// entry.
LiouvilleMatrix project_utp(const LiouvilleMatrix& l);

// Kraus-type decomposition X(A) = sum_i lambda_i T_i A T_i^dagger with real
// weights and unit-Frobenius operators (eigendecomposition of d*J).
struct KrausDecomposition {
  struct Term {
    double weight;
    ComplexMatrix op;
  };
  std::vector<Term> terms;
};

KrausDecomposition kraus_of_choi(const ChoiMatrix& x, double tol = 1e-12);
ChoiMatrix choi_of_kraus(const KrausDecomposition& k, std::size_t d);

// Best unit-rank approximation by the top (largest algebraic) eigenpair,
// together with the exact remainder tail.
struct UnitRankSplit {
  HermitianMatrix rank_one;
  HermitianMatrix tail;
  double top_eigenvalue = 0.0;
};

UnitRankSplit truncate_unit_rank(const HermitianMatrix& h);

// CSV round-trip: one-line header "d=<d>" followed by rows of interleaved
// real/imag entries.
std::string choi_to_csv(const ChoiMatrix& x);
ChoiMatrix choi_from_csv(const std::string& text);

}  // namespace agf
