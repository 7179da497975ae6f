#pragma once

#include "agf/linalg.hpp"
#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"

namespace agf::testutil {

inline ComplexMatrix random_gaussian_matrix(std::size_t r, std::size_t c, SeedStream& rng) {
  ComplexMatrix g(r, c);
  for (auto& v : g.data) v = cdouble(rng.next_gaussian(), rng.next_gaussian());
  return g;
}

inline HermitianMatrix random_hermitian(std::size_t n, SeedStream& rng) {
  ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return HermitianMatrix(cdouble(0.5, 0.0) * (g + adjoint(g)));
}

inline HermitianMatrix random_psd(std::size_t n, SeedStream& rng) {
  ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return HermitianMatrix(g * adjoint(g));
}

struct MeanVar {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean with its standard error.
template <typename F>
MeanVar monte_carlo(long samples, F&& draw) {
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    double x = draw();
    double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  MeanVar r;
  r.mean = mean;
  r.std_error = samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) *
                                               static_cast<double>(samples - 1)))
                            : 0.0;
  return r;
}

}  // namespace agf::testutil
