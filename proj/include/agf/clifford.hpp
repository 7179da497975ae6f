#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agf/matrix.hpp"
#include "agf/pauli.hpp"
#include "agf/seed_stream.hpp"

namespace agf {

using BigUInt = unsigned __int128;
std::string big_uint_to_string(BigUInt v);

// Symplectic tableau of an n-qubit Clifford, modulo global phase.
//
// Row i < n holds the conjugation image of X_i, row n+i the image of Z_i,
// each as a Pauli (x-mask, z-mask) with a sign bit. The 2n x 2n binary
// matrix formed by the rows (x bits first, then z bits) is symplectic with
// respect to Omega = [[0, I], [I, 0]].
struct CliffordTableau {
  struct PauliRow {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    bool neg = false;

    bool operator==(const PauliRow&) const = default;
  };

  int n = 1;
  std::vector<PauliRow> rows;  // size 2n

  bool operator==(const CliffordTableau&) const = default;
};

CliffordTableau identity_tableau(int n);

// S^T Omega S = Omega over GF(2), i.e. the rows form a symplectic basis.
bool symplectic_condition_holds(const CliffordTableau& t);

// Uniform sample over Cl(2^n) modulo phase: the symplectic matrix is built
// row pair by row pair, drawing each image uniformly among the valid
// completions; sign bits are uniform.
CliffordTableau sample_clifford(int n, SeedStream& rng);

// |Cl(2^n)| = 2^(n^2 + 2n) * prod_{j=1..n} (4^j - 1). Supported for n <= 7
// (the value overflows 128 bits beyond that).
BigUInt clifford_cardinality(int n);

// All tableaux for n <= 2, in a deterministic order. Length matches
// clifford_cardinality(n).
std::vector<CliffordTableau> enumerate_cliffords(int n);

// Dense unitary (n <= 5) whose conjugation action reproduces the tableau,
// with the global phase fixed by making the first nonzero entry real
// positive. Throws if the tableau is not symplectic.
ComplexMatrix tableau_to_unitary(const CliffordTableau& t);

// Line format "n;symplectic-bits-rowmajor;phase-bits".
std::string tableau_to_string(const CliffordTableau& t);
CliffordTableau tableau_from_string(const std::string& s);

// Conjugation image  C W C^dagger  of an arbitrary (Hermitian) Pauli under
// the tableau's Clifford; used by stabiliser bookkeeping.
PauliOperator tableau_pauli_image(const CliffordTableau& t, const PauliOperator& w);

}  // namespace agf
