#include <cmath>
#include <complex>

#include "agf/linalg.hpp"
#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace agf;
using testutil::monte_carlo;
using testutil::random_hermitian;

namespace {

double eigh_residual(const HermitianMatrix& h) {
  EighResult eg = eigh(h);
  const std::size_t n = h.dim();
  ComplexMatrix lam(n, n);
  for (std::size_t i = 0; i < n; ++i) lam(i, i) = eg.eigenvalues[i];
  ComplexMatrix rec = eg.eigenvectors * lam * adjoint(eg.eigenvectors);
  return frobenius_norm(rec - h.mat());
}

}  // namespace

TEST_CASE("seed streams are reproducible and splittable") {
  SeedStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  SeedStream c(42, 7), d(42, 8);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal &= (c.next_u64() == d.next_u64());
  CHECK_FALSE(all_equal);

  SeedStream parent(1, 2);
  SeedStream s1 = parent.derive(5), s2 = parent.derive(5), s3 = parent.derive(6);
  CHECK(s1.next_u64() == s2.next_u64());
  CHECK(s1.next_u64() != s3.next_u64());
}

TEST_CASE("gaussian draws have the right first moments") {
  SeedStream rng(11, 0);
  const long n = 200000;
  double sum = 0, sum2 = 0;
  for (long i = 0; i < n; ++i) {
    double g = rng.next_gaussian();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("eigh on fixed small matrices") {
  // diag(3,1,2) sorts to (1,2,3)
  ComplexMatrix m(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  EighResult eg = eigh(HermitianMatrix(m));
  CHECK(eg.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eg.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eg.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));

  // Pauli X has eigenvalues -1, +1
  ComplexMatrix x(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  EighResult ex = eigh(HermitianMatrix(x));
  CHECK(ex.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ex.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigh round-trip residual stays below 1e-10 relative up to dim 64") {
  SeedStream rng(2024, 1);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 33u, 64u}) {
    for (int rep = 0; rep < 3; ++rep) {
      HermitianMatrix h = random_hermitian(n, rng);
      double scale = std::max(1.0, frobenius_norm(h.mat()));
      CHECK(eigh_residual(h) <= 1e-10 * scale);
      EighResult eg = eigh(h);
      ComplexMatrix vtv = adjoint(eg.eigenvectors) * eg.eigenvectors;
      CHECK(frobenius_norm(vtv - ComplexMatrix::identity(n)) <= 1e-10 * std::sqrt(double(n)));
      for (std::size_t i = 0; i + 1 < n; ++i)
        CHECK(eg.eigenvalues[i] <= eg.eigenvalues[i + 1] + 1e-13);
    }
  }
}

TEST_CASE("eigh handles degenerate spectra and zero matrices") {
  SeedStream rng(7, 0);
  CHECK(eigh_residual(HermitianMatrix::identity(8)) < 1e-12);
  CHECK(eigh_residual(HermitianMatrix::zero(5)) < 1e-14);

  // projector with a 3-fold degenerate unit eigenvalue
  ComplexMatrix u = haar_unitary(6, rng);
  ComplexMatrix p(6, 6);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) p(i, j) += u(i, k) * std::conj(u(j, k));
  HermitianMatrix hp(p);
  CHECK(eigh_residual(hp) < 1e-11);
  EighResult eg = eigh(hp);
  for (int k = 0; k < 3; ++k) CHECK(eg.eigenvalues[k] == doctest::Approx(0.0).epsilon(1e-10));
  for (int k = 3; k < 6; ++k) CHECK(eg.eigenvalues[k] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hermitian constructor rejects non-hermitian input") {
  ComplexMatrix m(2, 2);
  m(0, 1) = cdouble(1.0, 0.0);
  m(1, 0) = cdouble(0.5, 0.0);
  CHECK_THROWS_AS(HermitianMatrix{m}, std::invalid_argument);
}

TEST_CASE("schatten norms on fixed inputs and ordering property") {
  for (std::size_t d : {2u, 3u, 7u}) {
    HermitianMatrix id = HermitianMatrix::identity(d);
    CHECK(schatten_norm(id, SchattenP::one) == doctest::Approx(double(d)).epsilon(1e-12));
    CHECK(schatten_norm(id, SchattenP::two) == doctest::Approx(std::sqrt(double(d))).epsilon(1e-12));
    CHECK(schatten_norm(id, SchattenP::inf) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // rank-1 projector has all Schatten norms equal to 1
  ComplexMatrix p(3, 3);
  p(1, 1) = 1.0;
  HermitianMatrix hp(p);
  CHECK(schatten_norm(hp, SchattenP::one) == doctest::Approx(1.0));
  CHECK(schatten_norm(hp, SchattenP::two) == doctest::Approx(1.0));
  CHECK(schatten_norm(hp, SchattenP::inf) == doctest::Approx(1.0));

  SeedStream rng(3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    HermitianMatrix h = random_hermitian(6, rng);
    double n1 = schatten_norm(h, SchattenP::one);
    double n2 = schatten_norm(h, SchattenP::two);
    double ninf = schatten_norm(h, SchattenP::inf);
    CHECK(ninf <= n2 + 1e-12);
    CHECK(n2 <= n1 + 1e-12);
  }
}

TEST_CASE("partial trace identities") {
  const std::size_t d = 3;
  HermitianMatrix id(ComplexMatrix::identity(d * d));
  HermitianMatrix t1 = partial_trace(id, 1, d);
  CHECK(frobenius_norm(t1.mat() - cdouble(double(d), 0.0) * ComplexMatrix::identity(d)) < 1e-12);

  // Tr_2(rho (x) sigma) = rho for unit-trace sigma
  SeedStream rng(5, 5);
  HermitianMatrix rho = random_hermitian(d, rng);
  HermitianMatrix sig0 = random_hermitian(d, rng);
  cdouble tr = trace(sig0.mat());
  ComplexMatrix sig = (1.0 / tr) * sig0.mat();
  HermitianMatrix prod(kron(rho.mat(), sig));
  HermitianMatrix t2 = partial_trace(prod, 2, d);
  CHECK(frobenius_norm(t2.mat() - rho.mat()) < 1e-10);

  // trace preservation and linearity
  HermitianMatrix a = random_hermitian(d * d, rng), b = random_hermitian(d * d, rng);
  CHECK(std::abs(trace(partial_trace(a, 1, d).mat()) - trace(a.mat())) < 1e-12);
  CHECK(std::abs(trace(partial_trace(a, 2, d).mat()) - trace(a.mat())) < 1e-12);
  HermitianMatrix comb(cdouble(0.3, 0.0) * a.mat() + cdouble(-1.7, 0.0) * b.mat());
  ComplexMatrix lin = partial_trace(comb, 1, d).mat();
  ComplexMatrix sep = cdouble(0.3, 0.0) * partial_trace(a, 1, d).mat() +
                      cdouble(-1.7, 0.0) * partial_trace(b, 1, d).mat();
  CHECK(frobenius_norm(lin - sep) < 1e-12);

  CHECK_THROWS_AS(partial_trace(rho, 1, d), std::invalid_argument);
}

TEST_CASE("partial trace of a unitary Choi matrix gives the maximally mixed state") {
  // Oracle: build the Choi matrix directly from its definition
  // J = (X (x) Id)(|psi><psi|), evaluated entrywise, independent of the
  // library's choi_of_unitary.
  SeedStream rng(17, 0);
  const std::size_t d = 2;
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix u = haar_unitary(d, rng);
    ComplexMatrix j(d * d, d * d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e)
            j(a * d + b, c * d + e) = u(a, b) * std::conj(u(c, e)) / double(d);
    HermitianMatrix hj(j);
    for (int sub : {1, 2}) {
      ComplexMatrix pt = partial_trace(hj, sub, d).mat();
      CHECK(frobenius_norm(pt - cdouble(1.0 / double(d), 0.0) * ComplexMatrix::identity(d)) <
            1e-10);
    }
  }
}

TEST_CASE("haar unitaries are unitary and have Haar trace moments") {
  SeedStream rng(99, 0);
  for (std::size_t d : {1u, 2u, 3u, 8u}) {
    ComplexMatrix u = haar_unitary(d, rng);
    CHECK(is_unitary(u));
  }
  ComplexMatrix u1 = haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  // E|Tr U|^2 = 1 and E|Tr U|^4 = 2 at d = 2 (k! for k <= d)
  const long samples = 100000;
  SeedStream mc(123, 1);
  std::vector<double> s2vals;
  auto r2 = monte_carlo(samples, [&]() {
    ComplexMatrix u = haar_unitary(2, mc);
    double s = std::norm(trace(u));
    s2vals.push_back(s);
    return s;
  });
  CHECK(std::abs(r2.mean - 1.0) <= 3.0 * r2.std_error);

  long i4 = 0;
  auto r4 = monte_carlo(samples, [&]() {
    double s = s2vals[i4++];
    return s * s;
  });
  CHECK(std::abs(r4.mean - 2.0) <= 3.0 * r4.std_error);
}

TEST_CASE("haar invariance proxy: |Tr(VU)|^2 matches |Tr U|^2 in distribution") {
  const long samples = 100000;
  SeedStream rng(7777, 0);
  ComplexMatrix v = haar_unitary(2, rng);

  SeedStream mc1(31, 0), mc2(31, 1);
  auto plain = monte_carlo(samples, [&]() {
    ComplexMatrix u = haar_unitary(2, mc1);
    return std::norm(trace(u));
  });
  auto rotated = monte_carlo(samples, [&]() {
    ComplexMatrix u = haar_unitary(2, mc2);
    return std::norm(trace(v * u));
  });
  double err = std::hypot(plain.std_error, rotated.std_error);
  CHECK(std::abs(plain.mean - rotated.mean) <= 4.0 * err);
}

TEST_CASE("maximally entangled state vector") {
  auto p1 = max_entangled(1);
  REQUIRE(p1.size() == 1);
  CHECK(std::abs(p1[0] - cdouble(1.0, 0.0)) < 1e-15);

  auto p2 = max_entangled(2);
  REQUIRE(p2.size() == 4);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(p2[0] - cdouble(s, 0.0)) < 1e-15);
  CHECK(std::abs(p2[1]) < 1e-15);
  CHECK(std::abs(p2[2]) < 1e-15);
  CHECK(std::abs(p2[3] - cdouble(s, 0.0)) < 1e-15);

  for (std::size_t d : {3u, 5u, 8u}) CHECK(vec_norm(max_entangled(d)) == doctest::Approx(1.0));
}
