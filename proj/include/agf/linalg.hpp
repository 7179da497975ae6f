#pragma once

#include <vector>

#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"

namespace agf {

// Hard cap for the in-repo dense eigensolver. Multi-qubit experiments stay
// far below this (Choi matrices reach 64x64 at three qubits, fourth-order
// tensor spaces 256x256 at two).
inline constexpr std::size_t kMaxEighDim = 4096;

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

// Full eigendecomposition of a Hermitian matrix via Householder
// tridiagonalisation followed by implicit-shift QL. Throws on dimension
// overflow or (never observed in practice) QL non-convergence.
EighResult eigh(const HermitianMatrix& h);

enum class SchattenP { one, two, inf };

double schatten_norm(const HermitianMatrix& h, SchattenP p);

// Partial trace of a d*d-dimensional Hermitian matrix over tensor factor 1
// or 2 (factor 1 is the most significant index block).
HermitianMatrix partial_trace(const HermitianMatrix& m, int subsystem, std::size_t d);

// Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal
// phase correction (Gram-Schmidt with positive real diagonal).
ComplexMatrix haar_unitary(std::size_t d, SeedStream& rng);

// |psi> = d^{-1/2} sum_k |k>|k> on C^d (x) C^d.
std::vector<cdouble> max_entangled(std::size_t d);

}  // namespace agf
