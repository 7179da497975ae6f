#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agf/channel.hpp"
#include "agf/clifford.hpp"
#include "agf/matrix.hpp"
#include "agf/seed_stream.hpp"

namespace agf {

struct NoiseSpec {
  enum class Kind { none, sphere, gaussian };
  Kind kind = Kind::none;
  double eta = 0.0;  // ell_2 radius for sphere, standard deviation for gaussian

  static NoiseSpec none() { return {Kind::none, 0.0}; }
  static NoiseSpec sphere(double eta) { return {Kind::sphere, eta}; }
  static NoiseSpec gaussian(double sigma) { return {Kind::gaussian, sigma}; }
};

// One simulated AGF data set: the Clifford settings, the (noisy) fidelity
// values f_i = F_avg(C_i, X) + eps_i, and enough seed metadata to reproduce
// the draw bit for bit.
struct MeasurementRecord {
  std::size_t d = 2;
  std::vector<CliffordTableau> settings;
  std::vector<double> f;
  NoiseSpec noise;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Draw m uniform Cliffords and their noisy AGFs against X.
MeasurementRecord simulate_agfs(const ChoiMatrix& x, int m, const NoiseSpec& noise,
                                const SeedStream& rng);

// The measurement map A_i(Z) = [ d (J(C_i), Z) + Tr(Z) ] / (d+1) and its
// adjoint. The precomputed form keeps only vec(U_i), which is all the
// rank-one Choi projectors need.
class MeasurementMap {
 public:
  MeasurementMap(std::size_t d, const std::vector<CliffordTableau>& settings);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return vecs_.size(); }

  void apply(const ComplexMatrix& z, std::vector<double>& out) const;
  std::vector<double> apply(const ComplexMatrix& z) const;
  ComplexMatrix adjoint_apply(const std::vector<double>& y) const;

  // |A|_op via power iteration on A^+ A (deterministic start vector).
  double operator_norm(int iterations = 80) const;

 private:
  std::size_t d_;
  std::vector<std::vector<cdouble>> vecs_;  // vec(U_i), each of norm sqrt(d)
};

std::vector<double> measurement_map_apply(const std::vector<CliffordTableau>& settings,
                                          const HermitianMatrix& z);
HermitianMatrix adjoint_measurement_apply(const std::vector<CliffordTableau>& settings,
                                          const std::vector<double>& y);

// JSON round trip (bit exact) of a measurement record.
std::string record_to_json(const MeasurementRecord& r);
MeasurementRecord record_from_json(const std::string& text);

// Direct fidelity estimation of f = (J(C), J(U)) by importance-sampling
// Pauli labels from the stabiliser Choi state of C; one Bernoulli shot per
// label. channel_uses counts the shots.
struct DfeResult {
  double f_hat = 0.0;
  long channel_uses = 0;
};

DfeResult dfe_estimate(const ComplexMatrix& target_u, const CliffordTableau& setting,
                       double eps_f, double delta0, const SeedStream& rng);

}  // namespace agf
