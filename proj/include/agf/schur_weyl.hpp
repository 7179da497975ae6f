#pragma once

#include <optional>
#include <vector>

#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"

namespace agf {

// Integer partition with non-increasing parts; labels irreducible
// components of the S_k / U(d) joint action on (C^d)^(x)k.
struct Partition {
  std::vector<int> parts;

  int sum() const;
  int num_rows() const { return static_cast<int>(parts.size()); }
  bool operator==(const Partition&) const = default;
};

// All partitions of k with at most max_rows parts, lexicographically
// descending: (k), (k-1,1), ...
std::vector<Partition> partitions(int k, int max_rows);

// Permutations as image tables: sigma[i] is where slot i goes.
using Perm = std::vector<int>;

std::vector<Perm> all_permutations(int k);  // lexicographic
Perm perm_inverse(const Perm& p);
// Product meaning "apply first, then then"; the tensor representation turns
// this composition around: perm_operator(compose(a,b)) =
// perm_operator(b) * perm_operator(a).
Perm perm_compose(const Perm& first, const Perm& then);
std::vector<int> cycle_type(const Perm& p);  // descending cycle lengths

// pi(sigma) |i_1 ... i_k> = |i_{sigma^{-1}(1)} ... i_{sigma^{-1}(k)}> on
// (C^d)^(x)k, first tensor factor most significant.
ComplexMatrix perm_operator(const Perm& sigma, std::size_t d);

// Dimension of the Specht module via the hook length formula (k <= 4 used,
// formula is general).
long specht_dimension(const Partition& lambda);

// Character of S_k irrep lambda on the class with the given cycle type;
// tables hardcoded for k <= 4.
int sn_character(const Partition& lambda, const std::vector<int>& cycles);

struct IrrepData {
  Partition lambda;
  long d_lambda = 0;              // Specht dimension
  double D_lambda = 0.0;          // Weyl dimension, Tr(P)/d_lambda
  std::optional<double> D_plus;   // dim of the Q-side Weyl block (k = 4, d = 2^n <= 4)
  std::optional<double> D_minus;  // complement block dimension
  HermitianMatrix projector;      // central projector on (C^d)^(x)k
};

// Central Young projector P_lambda = (d_lambda / k!) sum_sigma
// chi^lambda(sigma) pi(sigma), with numerically derived Weyl dimensions.
IrrepData young_projector(const Partition& lambda, std::size_t d, int k);

// Q = (1/d^2) sum_k W_k^(x)4 on (C^d)^(x)4, d = 2^n, n <= 2.
HermitianMatrix q_projector(int n);

// (1/d) sum_i W_i (x) W_i, which equals the flip operator; n <= 3.
HermitianMatrix flip_from_paulis(int n);

// Exact Haar twirl E(A) = int U^(x)k A U^+(x)k dU via the commutant
// expansion; d^k <= 4096, k <= 4.
ComplexMatrix twirl_unitary(const ComplexMatrix& a, std::size_t d, int k);

// Exact Clifford twirl of fourth-order diagonal representations, n <= 2.
// Terms whose Weyl block is absent (vanishing dimension) are dropped.
ComplexMatrix twirl_clifford(const ComplexMatrix& a, int n);

enum class TwirlEnsemble { haar, clifford };

struct TwirlMonteCarloResult {
  ComplexMatrix mean;
  RealMatrix std_error;  // per entry, combined re/im standard error
  long samples = 0;
};

// Empirical twirl over `samples` draws; sample i uses rng.derive(i), so
// results are reproducible for any thread count.
TwirlMonteCarloResult twirl_monte_carlo(const ComplexMatrix& a, std::size_t d, int k,
                                        TwirlEnsemble ensemble, long samples,
                                        const SeedStream& rng);

// Conjugate A by U^(x)k without forming the Kronecker power.
ComplexMatrix tensor_power_conjugate(const ComplexMatrix& u, const ComplexMatrix& a, int k);

namespace detail {
// Test hook: mutable view of the S4 character table (5 partitions x 5
// classes, class order [1^4],[2,1,1],[2,2],[3,1],[4]).
int* mutable_s4_character_table();
}  // namespace detail

}  // namespace agf
