#pragma once

#include <cstdint>
#include <vector>

#include "agf/matrix.hpp"

namespace agf {

// n-qubit Pauli operator
//
//   W(x, z) = i^{phase_power} * prod_j ( i^{x_j z_j} X^{x_j} Z^{z_j} ),
//
// one factor per qubit. The per-qubit i^{x_j z_j} makes each factor
// Hermitian (the (1,1) case is exactly Y), so phase_power in {0, 2} gives a
// Hermitian operator. Qubit j lives on bit j of the basis-state index.
struct PauliOperator {
  int n = 1;
  std::uint32_t x_bits = 0;
  std::uint32_t z_bits = 0;
  int phase_power = 0;  // exponent of i, taken mod 4

  bool hermitian() const { return (phase_power & 1) == 0; }
};

inline constexpr int kMaxPauliQubits = 6;

// Dense 2^n x 2^n form. Throws for n > 6.
ComplexMatrix pauli_dense(const PauliOperator& p);

// Canonical enumeration order of the 4^n phase-free Paulis: index
// k = (x_bits << n) | z_bits, identity first.
std::size_t pauli_index(const PauliOperator& p);
PauliOperator pauli_from_index(int n, std::size_t k);

// All 4^n phase-+1 Paulis in canonical order, as dense matrices.
std::vector<ComplexMatrix> all_paulis_dense(int n);

}  // namespace agf
