#include "agf/pauli.hpp"

#include <stdexcept>

namespace agf {

namespace {

const cdouble kPhases[4] = {cdouble(1, 0), cdouble(0, 1), cdouble(-1, 0), cdouble(0, -1)};

}  // namespace

ComplexMatrix pauli_dense(const PauliOperator& p) {
  if (p.n < 1 || p.n > kMaxPauliQubits)
    throw std::invalid_argument("pauli_dense: qubit count out of range");
  const std::size_t d = std::size_t{1} << p.n;

  // Each basis column c maps to the single row r = c ^ x_bits with amplitude
  // i^{x.z} (-1)^{z.c} (per-qubit phases multiplied out), times the overall
  // i^{phase_power}.
  int xz_overlap = __builtin_popcount(p.x_bits & p.z_bits);
  ComplexMatrix w(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t r = c ^ p.x_bits;
    int zc = __builtin_popcount(p.z_bits & static_cast<std::uint32_t>(c));
    int power = (p.phase_power + xz_overlap + 2 * zc) & 3;
    w(r, c) = kPhases[power];
  }
  return w;
}

std::size_t pauli_index(const PauliOperator& p) {
  return (static_cast<std::size_t>(p.x_bits) << p.n) | p.z_bits;
}

PauliOperator pauli_from_index(int n, std::size_t k) {
  PauliOperator p;
  p.n = n;
  const std::uint32_t mask = (1u << n) - 1u;
  p.z_bits = static_cast<std::uint32_t>(k) & mask;
  p.x_bits = static_cast<std::uint32_t>(k >> n) & mask;
  p.phase_power = 0;
  return p;
}

std::vector<ComplexMatrix> all_paulis_dense(int n) {
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(pauli_dense(pauli_from_index(n, k)));
  return out;
}

}  // namespace agf
