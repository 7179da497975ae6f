#include "agf/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "agf/parallel.hpp"
#include "agf/pauli.hpp"

#include "json.hpp"

namespace agf {

namespace {

constexpr std::uint64_t kNoiseSubstream = 0x8000000000000000ull;
constexpr long kDfeShotCap = 50'000'000;

int qubits_of_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  if ((std::size_t{1} << n) != d)
    throw std::invalid_argument("measurement: dimension must be a power of two");
  return n;
}

// <psi| W |psi> for a Hermitian Pauli on m qubits, using the sparse action
// W |c> = i^{x.z} (-1)^{z.c} |c ^ x> (column form).
double pauli_expectation(const std::vector<cdouble>& psi, const PauliOperator& w) {
  const std::size_t dim = psi.size();
  const int overlap = __builtin_popcount(w.x_bits & w.z_bits);
  static const cdouble phases[4] = {cdouble(1, 0), cdouble(0, 1), cdouble(-1, 0),
                                    cdouble(0, -1)};
  cdouble acc = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const int zc = __builtin_popcount(w.z_bits & static_cast<std::uint32_t>(c));
    const int p = (w.phase_power + overlap + 2 * zc) & 3;
    acc += std::conj(psi[c ^ w.x_bits]) * phases[p] * psi[c];
  }
  return acc.real();
}

std::string noise_kind_name(NoiseSpec::Kind k) {
  switch (k) {
    case NoiseSpec::Kind::none:
      return "none";
    case NoiseSpec::Kind::sphere:
      return "sphere";
    case NoiseSpec::Kind::gaussian:
      return "gaussian";
  }
  return "?";
}

NoiseSpec::Kind noise_kind_from_name(const std::string& s) {
  if (s == "none") return NoiseSpec::Kind::none;
  if (s == "sphere") return NoiseSpec::Kind::sphere;
  if (s == "gaussian") return NoiseSpec::Kind::gaussian;
  throw std::invalid_argument("unknown noise kind: " + s);
}

}  // namespace

MeasurementRecord simulate_agfs(const ChoiMatrix& x, int m, const NoiseSpec& noise,
                                const SeedStream& rng) {
  if (m < 1) throw std::invalid_argument("simulate_agfs: m must be >= 1");
  const int n = qubits_of_dim(x.d);

  MeasurementRecord rec;
  rec.d = x.d;
  rec.noise = noise;
  rec.master_seed = rng.master_seed();
  rec.stream_id = rng.stream_id();
  rec.settings.resize(m);
  rec.f.resize(m);

  const double trj = trace(x.matrix.mat()).real();
  parallel_for(m, [&](long i) {
    SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
    rec.settings[i] = sample_clifford(n, si);
    ComplexMatrix u = tableau_to_unitary(rec.settings[i]);
    const std::vector<cdouble>& v = u.data;
    std::vector<cdouble> jv = matvec(x.matrix.mat(), v);
    rec.f[i] = (vec_dot(v, jv).real() + trj) / (static_cast<double>(x.d) + 1.0);
  });

  if (noise.kind != NoiseSpec::Kind::none && noise.eta != 0.0) {
    SeedStream ns = rng.derive(kNoiseSubstream);
    std::vector<double> eps(m);
    double norm2 = 0.0;
    for (auto& e : eps) {
      e = ns.next_gaussian();
      norm2 += e * e;
    }
    if (noise.kind == NoiseSpec::Kind::sphere) {
      const double scale = noise.eta / std::sqrt(norm2);
      for (int i = 0; i < m; ++i) rec.f[i] += eps[i] * scale;
    } else {
      for (int i = 0; i < m; ++i) rec.f[i] += eps[i] * noise.eta;
    }
  }
  return rec;
}

MeasurementMap::MeasurementMap(std::size_t d, const std::vector<CliffordTableau>& settings)
    : d_(d) {
  vecs_.reserve(settings.size());
  for (const auto& t : settings) {
    if ((std::size_t{1} << t.n) != d)
      throw std::invalid_argument("MeasurementMap: setting dimension mismatch");
    vecs_.push_back(tableau_to_unitary(t).data);
  }
}

void MeasurementMap::apply(const ComplexMatrix& z, std::vector<double>& out) const {
  const std::size_t dim = d_ * d_;
  if (z.rows != dim || z.cols != dim)
    throw std::invalid_argument("MeasurementMap::apply: operand dimension mismatch");
  out.resize(vecs_.size());
  const double tr = trace(z).real();
  const double denom = static_cast<double>(d_) + 1.0;
  for (std::size_t i = 0; i < vecs_.size(); ++i) {
    // d (J_i, Z) = v^+ Z v with v = vec(U_i)
    const std::vector<cdouble>& v = vecs_[i];
    cdouble quad = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      const cdouble* zr = z.row_ptr(r);
      cdouble rowdot = 0.0;
      for (std::size_t c = 0; c < dim; ++c) rowdot += zr[c] * v[c];
      quad += std::conj(v[r]) * rowdot;
    }
    out[i] = (quad.real() + tr) / denom;
  }
}

std::vector<double> MeasurementMap::apply(const ComplexMatrix& z) const {
  std::vector<double> out;
  apply(z, out);
  return out;
}

ComplexMatrix MeasurementMap::adjoint_apply(const std::vector<double>& y) const {
  if (y.size() != vecs_.size())
    throw std::invalid_argument("MeasurementMap::adjoint_apply: length mismatch");
  const std::size_t dim = d_ * d_;
  ComplexMatrix g(dim, dim);
  double ysum = 0.0;
  for (double v : y) ysum += v;
  const double denom = static_cast<double>(d_) + 1.0;
  for (std::size_t i = 0; i < vecs_.size(); ++i) {
    const double w = y[i] / denom;
    if (w == 0.0) continue;
    const std::vector<cdouble>& v = vecs_[i];
    for (std::size_t r = 0; r < dim; ++r) {
      cdouble* gr = g.row_ptr(r);
      const cdouble vr = v[r] * w;
      for (std::size_t c = 0; c < dim; ++c) gr[c] += vr * std::conj(v[c]);
    }
  }
  const double shift = ysum / denom;
  for (std::size_t r = 0; r < dim; ++r) g(r, r) += shift;
  return g;
}

double MeasurementMap::operator_norm(int iterations) const {
  const std::size_t dim = d_ * d_;
  // deterministic, generically non-orthogonal start
  ComplexMatrix z(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    z(r, r) = 1.0 + 0.01 * static_cast<double>(r % 7);
    if (r + 1 < dim) {
      z(r, r + 1) = cdouble(0.05, 0.02 * static_cast<double>(r % 3));
      z(r + 1, r) = std::conj(z(r, r + 1));
    }
  }
  z *= cdouble(1.0 / frobenius_norm(z), 0.0);
  std::vector<double> y;
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    apply(z, y);
    ComplexMatrix next = adjoint_apply(y);  // A^+ A z with |z|_F = 1
    lambda = frobenius_norm(next);
    if (lambda == 0.0) return 0.0;
    next *= cdouble(1.0 / lambda, 0.0);
    z = std::move(next);
  }
  return std::sqrt(lambda);
}

std::vector<double> measurement_map_apply(const std::vector<CliffordTableau>& settings,
                                          const HermitianMatrix& z) {
  if (settings.empty()) throw std::invalid_argument("measurement_map_apply: no settings");
  const std::size_t d = std::size_t{1} << settings[0].n;
  MeasurementMap map(d, settings);
  return map.apply(z.mat());
}

HermitianMatrix adjoint_measurement_apply(const std::vector<CliffordTableau>& settings,
                                          const std::vector<double>& y) {
  if (settings.empty()) throw std::invalid_argument("adjoint_measurement_apply: no settings");
  const std::size_t d = std::size_t{1} << settings[0].n;
  MeasurementMap map(d, settings);
  return HermitianMatrix(map.adjoint_apply(y));
}

std::string record_to_json(const MeasurementRecord& r) {
  nlohmann::json j;
  j["d"] = r.d;
  j["settings"] = nlohmann::json::array();
  for (const auto& t : r.settings) j["settings"].push_back(tableau_to_string(t));
  j["f"] = r.f;
  j["noise"] = {{"kind", noise_kind_name(r.noise.kind)}, {"eta", r.noise.eta}};
  j["master_seed"] = r.master_seed;
  j["stream_id"] = r.stream_id;
  return j.dump(2);
}

MeasurementRecord record_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MeasurementRecord r;
  r.d = j.at("d").get<std::size_t>();
  for (const auto& s : j.at("settings"))
    r.settings.push_back(tableau_from_string(s.get<std::string>()));
  r.f = j.at("f").get<std::vector<double>>();
  r.noise.kind = noise_kind_from_name(j.at("noise").at("kind").get<std::string>());
  r.noise.eta = j.at("noise").at("eta").get<double>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.stream_id = j.at("stream_id").get<std::uint64_t>();
  if (r.f.size() != r.settings.size())
    throw std::invalid_argument("record_from_json: settings/f length mismatch");
  return r;
}

DfeResult dfe_estimate(const ComplexMatrix& target_u, const CliffordTableau& setting,
                       double eps_f, double delta0, const SeedStream& rng) {
  if (eps_f <= 0.0 || delta0 <= 0.0 || delta0 >= 1.0)
    throw std::invalid_argument("dfe_estimate: bad accuracy parameters");
  const int n = setting.n;
  if (n > 2) throw std::invalid_argument("dfe_estimate: dense Pauli table limited to n <= 2");
  const std::size_t d = std::size_t{1} << n;
  if (target_u.rows != d) throw std::invalid_argument("dfe_estimate: dimension mismatch");

  // Choi state vectors |c> = vec(C)/sqrt(d), |u> = vec(U)/sqrt(d) on 2n qubits.
  ComplexMatrix c_dense = tableau_to_unitary(setting);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<cdouble> cvec = c_dense.data, uvec = target_u.data;
  for (auto& v : cvec) v *= inv_sqrt_d;
  for (auto& v : uvec) v *= inv_sqrt_d;

  // Characteristic tables over all d^4 two-copy Paulis. The stabiliser
  // group of |c> shows up as the d^2 labels with expectation +-1.
  const int m_qubits = 2 * n;
  const std::size_t num_paulis = std::size_t{1} << (4 * n);
  std::vector<std::size_t> support;
  std::vector<int> sign;
  std::vector<double> target_expval(num_paulis, 0.0);
  for (std::size_t kidx = 0; kidx < num_paulis; ++kidx) {
    PauliOperator w = pauli_from_index(m_qubits, kidx);
    const double tc = pauli_expectation(cvec, w);
    if (std::abs(tc) > 0.5) {
      support.push_back(kidx);
      sign.push_back(tc > 0 ? 1 : -1);
      target_expval[kidx] = pauli_expectation(uvec, w);
    }
  }
  if (support.size() != d * d)
    throw std::logic_error("dfe_estimate: stabiliser support has unexpected size");

  const long shots =
      static_cast<long>(std::ceil(2.0 * std::log(2.0 / delta0) / (eps_f * eps_f)));
  if (shots > kDfeShotCap) throw std::invalid_argument("dfe_estimate: shot budget overflow");

  SeedStream s = rng;
  double acc = 0.0;
  for (long i = 0; i < shots; ++i) {
    const std::size_t pick = s.next_below(support.size());
    const std::size_t kidx = support[pick];
    const double p_plus = 0.5 * (1.0 + target_expval[kidx]);
    const int outcome = (s.next_double() < p_plus) ? 1 : -1;
    acc += static_cast<double>(outcome * sign[pick]);
  }
  return DfeResult{acc / static_cast<double>(shots), shots};
}

}  // namespace agf
