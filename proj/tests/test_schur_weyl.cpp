#include <cmath>

#include "agf/clifford.hpp"
#include "agf/linalg.hpp"
#include "agf/pauli.hpp"
#include "agf/schur_weyl.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace agf;
using testutil::random_gaussian_matrix;

namespace {

// |exact - mc| <= 5 sigma entrywise, with a small absolute floor for
// entries whose sample variance vanishes.
void check_matches_mc(const ComplexMatrix& exact, const TwirlMonteCarloResult& mc) {
  REQUIRE(exact.rows == mc.mean.rows);
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.data.size(); ++i) {
    double tol = 5.0 * mc.std_error.data[i] + 1e-9;
    double diff = std::abs(exact.data[i] - mc.mean.data[i]);
    worst = std::max(worst, diff - tol);
  }
  CHECK(worst <= 0.0);
}

}  // namespace

TEST_CASE("partition enumeration respects the row constraint") {
  auto p2 = partitions(2, 4);
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].parts == std::vector<int>{2});
  CHECK(p2[1].parts == std::vector<int>{1, 1});

  CHECK(partitions(4, 4).size() == 5);
  auto p42 = partitions(4, 2);
  REQUIRE(p42.size() == 3);
  CHECK(p42[0].parts == std::vector<int>{4});
  CHECK(p42[1].parts == std::vector<int>{3, 1});
  CHECK(p42[2].parts == std::vector<int>{2, 2});
}

TEST_CASE("hook lengths, characters at identity, and sum of squares") {
  for (int k = 1; k <= 4; ++k) {
    long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    long sum_sq = 0;
    std::vector<int> id_class(k, 1);
    for (const auto& l : partitions(k, k)) {
      long dl = specht_dimension(l);
      CHECK(sn_character(l, id_class) == dl);
      sum_sq += dl * dl;
    }
    CHECK(sum_sq == fact);  // character orthogonality consequence
  }
  CHECK(specht_dimension(Partition{{3, 1}}) == 3);
  CHECK(specht_dimension(Partition{{2, 2}}) == 2);
  CHECK(specht_dimension(Partition{{2, 1, 1}}) == 3);
}

TEST_CASE("permutation operators: identity, flip, traces, composition convention") {
  Perm id2{0, 1};
  CHECK(max_abs_diff(perm_operator(id2, 3), ComplexMatrix::identity(9)) == 0.0);

  // transposition gives the flip
  Perm swap2{1, 0};
  ComplexMatrix f = perm_operator(swap2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(f(b * 2 + a, a * 2 + b) == cdouble(1.0, 0.0));

  // Tr pi(sigma) = d^{#cycles} over S_3 at d = 2
  for (const Perm& s : all_permutations(3)) {
    double want = std::pow(2.0, double(cycle_type(s).size()));
    CHECK(trace(perm_operator(s, 2)).real() == doctest::Approx(want));
  }

  // pi(compose(tau, sigma)) = pi(sigma) pi(tau): the representation inverts
  // "first tau, then sigma" products
  for (const Perm& tau : all_permutations(3))
    for (const Perm& sigma : all_permutations(3)) {
      ComplexMatrix lhs = perm_operator(perm_compose(tau, sigma), 2);
      ComplexMatrix rhs = perm_operator(sigma, 2) * perm_operator(tau, 2);
      CHECK(max_abs_diff(lhs, rhs) == 0.0);
    }
}

TEST_CASE("young projectors: idempotence, orthogonality, completeness, dimensions") {
  for (auto [d, k] : std::vector<std::pair<std::size_t, int>>{{2, 2}, {2, 4}, {4, 2}, {3, 3}}) {
    auto lambdas = partitions(k, static_cast<int>(d));
    const std::size_t dim = static_cast<std::size_t>(std::pow(double(d), k));
    ComplexMatrix sum(dim, dim);
    double dim_sum = 0.0;
    std::vector<IrrepData> irreps;
    for (const auto& l : lambdas) irreps.push_back(young_projector(l, d, k));
    for (std::size_t i = 0; i < irreps.size(); ++i) {
      const auto& p = irreps[i].projector.mat();
      CHECK(frobenius_norm(p * p - p) < 1e-10);
      CHECK(trace(p).real() ==
            doctest::Approx(double(irreps[i].d_lambda) * irreps[i].D_lambda).epsilon(1e-10));
      for (std::size_t j = i + 1; j < irreps.size(); ++j)
        CHECK(frobenius_norm(p * irreps[j].projector.mat()) < 1e-10);
      sum += p;
      dim_sum += double(irreps[i].d_lambda) * irreps[i].D_lambda;
    }
    CHECK(frobenius_norm(sum - ComplexMatrix::identity(dim)) < 1e-10);
    CHECK(dim_sum == doctest::Approx(double(dim)));
  }

  // named values
  IrrepData sym22 = young_projector(Partition{{2}}, 2, 2);
  CHECK(sym22.d_lambda == 1);
  CHECK(sym22.D_lambda == doctest::Approx(3.0));

  IrrepData sym44 = young_projector(Partition{{4}}, 4, 4);
  CHECK(sym44.d_lambda == 1);
  CHECK(sym44.D_lambda == doctest::Approx(35.0));

  CHECK_THROWS_AS(young_projector(Partition{{1, 1, 1}}, 2, 3), std::invalid_argument);
}

TEST_CASE("Q projector: trace, idempotence, commutes with S4, Weyl block split") {
  for (int n : {1, 2}) {
    const double d = std::pow(2.0, n);
    HermitianMatrix q = q_projector(n);
    CHECK(trace(q.mat()).real() == doctest::Approx(d * d).epsilon(1e-10));
    CHECK(frobenius_norm(q.mat() * q.mat() - q.mat()) < 1e-10);
    for (const Perm& s : all_permutations(4)) {
      ComplexMatrix pi = perm_operator(s, std::size_t(d));
      CHECK(frobenius_norm(q.mat() * pi - pi * q.mat()) < 1e-10);
    }
    double dplus_total = 0.0;
    for (const auto& l : partitions(4, int(d))) {
      IrrepData ir = young_projector(l, std::size_t(d), 4);
      REQUIRE(ir.D_plus.has_value());
      CHECK(*ir.D_plus + *ir.D_minus == doctest::Approx(ir.D_lambda).epsilon(1e-9));
      CHECK(*ir.D_plus >= -1e-9);
      CHECK(*ir.D_minus >= -1e-9);
      dplus_total += double(ir.d_lambda) * *ir.D_plus;
    }
    // the Q-side blocks exhaust the d^2-dimensional stabiliser code range
    CHECK(dplus_total == doctest::Approx(d * d).epsilon(1e-9));
  }
}

TEST_CASE("flip operator from paulis") {
  for (int n : {1, 2}) {
    const std::size_t d = std::size_t{1} << n;
    HermitianMatrix f = flip_from_paulis(n);
    CHECK(max_abs_diff(f.mat(), perm_operator(Perm{1, 0}, d)) < 1e-10);
    CHECK(trace(f.mat()).real() == doctest::Approx(double(d)));
  }
}

TEST_CASE("haar twirl fixes the identity and the commutant") {
  SeedStream rng(41, 0);
  for (auto [d, k] : std::vector<std::pair<std::size_t, int>>{{2, 2}, {2, 4}, {4, 3}}) {
    const std::size_t dim = static_cast<std::size_t>(std::pow(double(d), k));
    CHECK(frobenius_norm(twirl_unitary(ComplexMatrix::identity(dim), d, k) -
                         ComplexMatrix::identity(dim)) < 1e-9);
    for (const Perm& s : all_permutations(k)) {
      ComplexMatrix pi = perm_operator(s, d);
      CHECK(frobenius_norm(twirl_unitary(pi, d, k) - pi) < 1e-9);
    }
    // trace preservation and commutation with the diagonal action
    ComplexMatrix a = random_gaussian_matrix(dim, dim, rng);
    ComplexMatrix e = twirl_unitary(a, d, k);
    CHECK(std::abs(trace(e) - trace(a)) < 1e-9 * frobenius_norm(a));
    for (int rep = 0; rep < 3; ++rep) {
      ComplexMatrix v = haar_unitary(d, rng);
      ComplexMatrix vk = v;
      for (int i = 1; i < k; ++i) vk = kron(vk, v);
      CHECK(frobenius_norm(e * vk - vk * e) < 1e-8 * std::max(1.0, frobenius_norm(e)));
    }
  }
}

TEST_CASE("haar twirl matches its Monte Carlo oracle at d=2, k=3") {
  SeedStream rng(42, 0);
  ComplexMatrix a = random_gaussian_matrix(8, 8, rng);
  ComplexMatrix exact = twirl_unitary(a, 2, 3);
  auto mc = twirl_monte_carlo(a, 2, 3, TwirlEnsemble::haar, 100000, SeedStream(4242, 0));
  check_matches_mc(exact, mc);
}

TEST_CASE("clifford twirl fixes identity and commutant elements") {
  for (int n : {1, 2}) {
    const std::size_t d = std::size_t{1} << n;
    const std::size_t dim = d * d * d * d;
    CHECK(frobenius_norm(twirl_clifford(ComplexMatrix::identity(dim), n) -
                         ComplexMatrix::identity(dim)) < 1e-9);
    HermitianMatrix q = q_projector(n);
    for (const Perm& s : all_permutations(4)) {
      ComplexMatrix qpi = q.mat() * perm_operator(s, d);
      CHECK(frobenius_norm(twirl_clifford(qpi, n) - qpi) < 1e-9);
    }
  }
}

TEST_CASE("clifford twirl matches its Monte Carlo oracle at n=1") {
  SeedStream rng(43, 0);
  ComplexMatrix a = random_gaussian_matrix(16, 16, rng);
  ComplexMatrix exact = twirl_clifford(a, 1);
  auto mc = twirl_monte_carlo(a, 2, 4, TwirlEnsemble::clifford, 100000, SeedStream(4343, 0));
  check_matches_mc(exact, mc);
}

TEST_CASE("clifford twirl differs from the haar twirl at fourth order") {
  // the Clifford group is a 3- but not a 4-design
  SeedStream rng(44, 0);
  ComplexMatrix a = random_gaussian_matrix(16, 16, rng);
  CHECK(frobenius_norm(twirl_clifford(a, 1) - twirl_unitary(a, 2, 4)) > 1e-3);
}

TEST_CASE("monte carlo twirl: single sample, exact fixed points, scaling") {
  SeedStream base(77, 7);

  // one haar sample is a bare conjugation by the stream's first unitary
  SeedStream arng(5, 5);
  ComplexMatrix a = random_gaussian_matrix(4, 4, arng);
  auto one = twirl_monte_carlo(a, 2, 2, TwirlEnsemble::haar, 1, base);
  SeedStream replay = base.derive(0);
  ComplexMatrix u = haar_unitary(2, replay);
  ComplexMatrix u2 = kron(u, u);
  CHECK(frobenius_norm(one.mean - u2 * a * adjoint(u2)) < 1e-12);

  // identity is reproduced exactly for any sample count
  auto fixed = twirl_monte_carlo(ComplexMatrix::identity(16), 2, 4, TwirlEnsemble::clifford,
                                 25, SeedStream(6, 6));
  CHECK(frobenius_norm(fixed.mean - ComplexMatrix::identity(16)) < 1e-12);
  CHECK(frobenius_norm(fixed.std_error) < 1e-12);

  // error decays like 1/sqrt(samples): ratio of errors between 1e3 and 1e5
  // samples is ~10 (checked within a factor of 2)
  SeedStream brng(7, 7);
  ComplexMatrix b = random_gaussian_matrix(4, 4, brng);
  ComplexMatrix exact = twirl_unitary(b, 2, 2);
  auto small = twirl_monte_carlo(b, 2, 2, TwirlEnsemble::haar, 1000, SeedStream(8, 1));
  auto large = twirl_monte_carlo(b, 2, 2, TwirlEnsemble::haar, 100000, SeedStream(8, 2));
  double es = frobenius_norm(small.mean - exact);
  double el = frobenius_norm(large.mean - exact);
  CHECK(es / el > 5.0);
  CHECK(es / el < 20.0);
}

TEST_CASE("pauli magnitude bound |Tr(W_j A W_k B)| <= |A|_F |B|_F") {
  SeedStream rng(45, 0);
  auto ws = all_paulis_dense(1);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix a = random_gaussian_matrix(2, 2, rng);
    ComplexMatrix b = random_gaussian_matrix(2, 2, rng);
    const double bound = frobenius_norm(a) * frobenius_norm(b);
    for (const auto& wj : ws)
      for (const auto& wk : ws)
        CHECK(std::abs(trace(wj * a * wk * b)) <= bound + 1e-12);
  }
}

TEST_CASE("Q sandwich bound with stabiliser state saturation") {
  SeedStream rng(46, 0);
  for (int n : {1, 2}) {
    const std::size_t d = std::size_t{1} << n;
    HermitianMatrix q = q_projector(n);
    for (int rep = 0; rep < 4; ++rep) {
      ComplexMatrix prod = ComplexMatrix::identity(1);
      double norms = 1.0;
      for (int j = 0; j < 4; ++j) {
        ComplexMatrix t = random_gaussian_matrix(d, d, rng);
        t *= cdouble(1.0 / frobenius_norm(t), 0.0);
        norms *= frobenius_norm(t);
        prod = kron(prod, t);
      }
      double lhs = frobenius_norm(q.mat() * prod * q.mat());
      CHECK(lhs <= norms / double(d) + 1e-10);
    }

    // all four factors equal to the same stabiliser state saturate the bound
    ComplexMatrix s(d, d);
    s(0, 0) = 1.0;  // |0..0><0..0|
    ComplexMatrix prod = kron(kron(s, s), kron(s, s));
    double lhs = frobenius_norm(q.mat() * prod * q.mat());
    CHECK(lhs == doctest::Approx(1.0 / double(d)).epsilon(1e-9));
  }
}

TEST_CASE("corrupting the S4 character table breaks projector completeness") {
  int* table = detail::mutable_s4_character_table();
  const int saved = table[6];
  table[6] = saved + 1;
  bool complete = true;
  ComplexMatrix sum(16, 16);
  for (const auto& l : partitions(4, 2)) sum += young_projector(l, 2, 4).projector.mat();
  complete = frobenius_norm(sum - ComplexMatrix::identity(16)) < 1e-10;
  table[6] = saved;
  CHECK_FALSE(complete);

  // restored table is healthy again
  ComplexMatrix sum2(16, 16);
  for (const auto& l : partitions(4, 2)) sum2 += young_projector(l, 2, 4).projector.mat();
  CHECK(frobenius_norm(sum2 - ComplexMatrix::identity(16)) < 1e-10);
}
