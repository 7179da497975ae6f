#include "agf/moments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "agf/clifford.hpp"
#include "agf/format.hpp"
#include "agf/linalg.hpp"
#include "agf/parallel.hpp"
#include "agf/schur_weyl.hpp"

namespace agf {

namespace {

struct ScalarStats {
  double mean = 0.0;
  double std_error = 0.0;
};

// Blocked, deterministically merged Monte Carlo mean; sample i draws from
// rng.derive(i) so the result does not depend on the thread count.
template <typename F>
ScalarStats scalar_monte_carlo(long samples, const SeedStream& rng, F&& fn) {
  struct Block {
    long n = 0;
    double mean = 0.0, m2 = 0.0;
  };
  const int nblocks = static_cast<int>(std::min<long>(64, samples));
  std::vector<Block> blocks(nblocks);

  parallel_for(nblocks, [&](long b) {
    const long begin = samples * b / nblocks;
    const long end = samples * (b + 1) / nblocks;
    Block& blk = blocks[b];
    for (long i = begin; i < end; ++i) {
      SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
      double x = fn(si);
      ++blk.n;
      double delta = x - blk.mean;
      blk.mean += delta / static_cast<double>(blk.n);
      blk.m2 += delta * (x - blk.mean);
    }
  });

  Block total;
  for (const Block& b : blocks) {
    if (b.n == 0) continue;
    if (total.n == 0) {
      total = b;
      continue;
    }
    const double na = double(total.n), nb = double(b.n), nt = na + nb;
    const double delta = b.mean - total.mean;
    total.mean += delta * nb / nt;
    total.m2 += b.m2 + delta * delta * na * nb / nt;
    total.n += b.n;
  }

  ScalarStats s;
  s.mean = total.mean;
  if (total.n > 1)
    s.std_error = std::sqrt(total.m2 / (double(total.n - 1) * double(total.n)));
  return s;
}

int qubits_of_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return ((std::size_t{1} << n) == d) ? n : -1;
}

ComplexMatrix draw_unitary(const Ensemble& e, std::size_t d, SeedStream& rng) {
  if (e.kind == Ensemble::Kind::haar) return haar_unitary(d, rng);
  return tableau_to_unitary(sample_clifford(e.qubits, rng));
}

std::string ensemble_label(const Ensemble& e) {
  switch (e.kind) {
    case Ensemble::Kind::haar:
      return "haar";
    case Ensemble::Kind::clifford:
      return "clifford";
    case Ensemble::Kind::design:
      return e.design->label.empty() ? "design" : e.design->label;
  }
  return "?";
}

}  // namespace

DesignSet full_clifford_design(int n) {
  DesignSet ds;
  ds.d = std::size_t{1} << n;
  ds.label = "full-clifford-n" + std::to_string(n);
  auto tableaux = enumerate_cliffords(n);
  ds.elements.reserve(tableaux.size());
  for (const auto& t : tableaux) ds.elements.push_back(tableau_to_unitary(t));
  return ds;
}

DesignSet sampled_clifford_design(int n, int count, const SeedStream& rng) {
  DesignSet ds;
  ds.d = std::size_t{1} << n;
  ds.label = "sampled-clifford";
  ds.elements.resize(count);
  parallel_for(count, [&](long i) {
    SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
    ds.elements[i] = tableau_to_unitary(sample_clifford(n, si));
  });
  return ds;
}

DesignSet haar_design(std::size_t d, int count, const SeedStream& rng) {
  DesignSet ds;
  ds.d = d;
  ds.label = "haar-sampled";
  ds.elements.resize(count);
  parallel_for(count, [&](long i) {
    SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
    ds.elements[i] = haar_unitary(d, si);
  });
  return ds;
}

std::string moment_report_csv_header() {
  return "ensemble,k,samples,empirical,analytic,std_error";
}

std::string moment_report_csv_row(const MomentReport& r) {
  std::string row = r.ensemble + "," + std::to_string(r.k) + "," + std::to_string(r.samples) +
                    "," + format_double(r.empirical) + ",";
  if (r.analytic) row += format_double(*r.analytic);
  row += "," + format_double(r.std_error);
  return row;
}

double s_value(const ChoiMatrix& t, const ComplexMatrix& u) {
  if (u.rows != t.d || !u.square())
    throw std::invalid_argument("s_value: unitary dimension mismatch");
  // S = d^2 (J(T), J(U)) = d * vec(U)^+ J(T) vec(U)
  const std::vector<cdouble>& w = u.data;
  std::vector<cdouble> jw = matvec(t.matrix.mat(), w);
  return static_cast<double>(t.d) * vec_dot(w, jw).real();
}

double second_moment_analytic(const ChoiMatrix& t) {
  const double d = static_cast<double>(t.d);
  const double norm2 = hs_inner(t, t);
  ComplexMatrix tid = choi_output_identity(t);
  ComplexMatrix tadj = choi_adjoint_output_identity(t);
  const double tr = trace(tid).real();
  const double f1 = frobenius_norm(tid), f2 = frobenius_norm(tadj);
  return (d * d * norm2 + tr * tr - (f1 * f1 + f2 * f2) / d) / (d * d - 1.0);
}

MomentReport moment_empirical(const ChoiMatrix& t, const Ensemble& ensemble, int k,
                              long samples, const SeedStream& rng) {
  if (k < 1 || k > 4) throw std::invalid_argument("moment_empirical: k must be 1..4");
  MomentReport r;
  r.ensemble = ensemble_label(ensemble);
  r.k = k;
  if (k == 2) r.analytic = second_moment_analytic(t);

  if (ensemble.kind == Ensemble::Kind::design) {
    const DesignSet& ds = *ensemble.design;
    if (ds.d != t.d) throw std::invalid_argument("moment_empirical: design dimension mismatch");
    double acc = 0.0;
    for (const auto& u : ds.elements) acc += std::pow(s_value(t, u), k);
    r.samples = static_cast<long>(ds.elements.size());
    r.empirical = acc / static_cast<double>(ds.elements.size());
    r.std_error = 0.0;
    return r;
  }

  if (ensemble.kind == Ensemble::Kind::clifford &&
      (std::size_t{1} << ensemble.qubits) != t.d)
    throw std::invalid_argument("moment_empirical: clifford qubit count mismatch");

  auto stats = scalar_monte_carlo(samples, rng, [&](SeedStream& si) {
    ComplexMatrix u = draw_unitary(ensemble, t.d, si);
    return std::pow(s_value(t, u), k);
  });
  r.samples = samples;
  r.empirical = stats.mean;
  r.std_error = stats.std_error;
  return r;
}

double fourth_moment_ratio(const ChoiMatrix& t, const Ensemble& ensemble, long samples,
                           const SeedStream& rng) {
  if (frobenius_norm(t.matrix.mat()) < 1e-14)
    throw std::invalid_argument("fourth_moment_ratio: zero map has no defined ratio");

  if (ensemble.kind == Ensemble::Kind::design) {
    const DesignSet& ds = *ensemble.design;
    double e2 = 0.0, e4 = 0.0;
    for (const auto& u : ds.elements) {
      const double s = s_value(t, u);
      const double s2 = s * s;
      e2 += s2;
      e4 += s2 * s2;
    }
    e2 /= static_cast<double>(ds.elements.size());
    e4 /= static_cast<double>(ds.elements.size());
    return e4 / (e2 * e2);
  }

  // shared draws for numerator and denominator
  struct Acc {
    double e2 = 0, e4 = 0;
  };
  const int nblocks = static_cast<int>(std::min<long>(64, samples));
  std::vector<Acc> blocks(nblocks);
  parallel_for(nblocks, [&](long b) {
    const long begin = samples * b / nblocks;
    const long end = samples * (b + 1) / nblocks;
    for (long i = begin; i < end; ++i) {
      SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
      ComplexMatrix u = draw_unitary(ensemble, t.d, si);
      const double s2 = s_value(t, u) * s_value(t, u);
      blocks[b].e2 += s2;
      blocks[b].e4 += s2 * s2;
    }
  });
  double e2 = 0, e4 = 0;
  for (const auto& a : blocks) {
    e2 += a.e2;
    e4 += a.e4;
  }
  e2 /= static_cast<double>(samples);
  e4 /= static_cast<double>(samples);
  return e4 / (e2 * e2);
}

long haar_trace_moment_analytic(std::size_t d, int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("haar_trace_moment_analytic: k must be 1..4");
  long acc = 0;
  for (const auto& l : partitions(k, static_cast<int>(std::min<std::size_t>(d, 4)))) {
    long dl = specht_dimension(l);
    acc += dl * dl;
  }
  return acc;
}

double frame_potential(const DesignSet& design, int t) {
  if (t < 1 || t > 3) throw std::invalid_argument("frame_potential: t must be 1..3");
  const std::size_t n = design.elements.size();
  if (n == 0 || n > 12000) throw std::invalid_argument("frame_potential: design size out of range");
  std::vector<double> partial(n, 0.0);
  parallel_for(static_cast<long>(n), [&](long j) {
    const ComplexMatrix uj_adj = adjoint(design.elements[j]);
    double acc = 0.0;
    for (std::size_t k = j; k < n; ++k) {
      const double ov = std::norm(trace(uj_adj * design.elements[k]));
      double p = ov;
      for (int i = 1; i < t; ++i) p *= ov;
      acc += (k == static_cast<std::size_t>(j)) ? p : 2.0 * p;
    }
    partial[j] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

std::vector<double> design_expansion_coeffs(const ChoiMatrix& x, const DesignSet& design) {
  if (design.d != x.d)
    throw std::invalid_argument("design_expansion_coeffs: dimension mismatch");
  if (!is_unital_tp(x, 1e-6))
    throw std::invalid_argument("design_expansion_coeffs: map is not unital trace-preserving");
  const double d = static_cast<double>(x.d);
  const double c = d * (d + 1.0) * (d * d - 1.0);
  std::vector<double> out(design.elements.size());
  parallel_for(static_cast<long>(out.size()), [&](long k) {
    const double f = avg_gate_fidelity(choi_of_unitary(design.elements[k]), x);
    out[k] = c * f - c / d + 1.0;
  });
  return out;
}

double unitarity(const ChoiMatrix& x) {
  LiouvilleMatrix l = liouville_of_choi(x);
  const std::size_t d2 = l.matrix.rows;
  double acc = 0.0;
  for (std::size_t i = 1; i < d2; ++i)
    for (std::size_t j = 1; j < d2; ++j) acc += l.matrix(i, j) * l.matrix(i, j);
  return acc / (static_cast<double>(x.d) * static_cast<double>(x.d) - 1.0);
}

std::pair<double, double> agf_variance_identity_check(const ChoiMatrix& x,
                                                      const DesignSet& design) {
  if (design.d != x.d)
    throw std::invalid_argument("agf_variance_identity_check: dimension mismatch");
  const std::size_t n = design.elements.size();
  std::vector<double> f(n);
  parallel_for(static_cast<long>(n), [&](long k) {
    f[k] = avg_gate_fidelity(choi_of_unitary(design.elements[k]), x);
  });
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : f) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);  // population variance over the design

  const double d = static_cast<double>(x.d);
  const double rhs = unitarity(x) / (d * d * (d + 1.0) * (d + 1.0));
  return {var, rhs};
}

std::vector<TailRow> tail_check(std::size_t d, long samples, const SeedStream& rng,
                                const std::vector<double>& thresholds) {
  const double kappa = 1.0 - 1.0 / (2.0 * 2.71828182845904523536);
  std::vector<long> exceed(thresholds.size(), 0);
  const int nblocks = static_cast<int>(std::min<long>(64, samples));
  std::vector<std::vector<long>> blocks(nblocks, std::vector<long>(thresholds.size(), 0));
  parallel_for(nblocks, [&](long b) {
    const long begin = samples * b / nblocks;
    const long end = samples * (b + 1) / nblocks;
    for (long i = begin; i < end; ++i) {
      SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
      const double s = std::norm(trace(haar_unitary(d, si)));
      for (std::size_t ti = 0; ti < thresholds.size(); ++ti)
        if (s >= thresholds[ti]) ++blocks[b][ti];
    }
  });
  for (const auto& b : blocks)
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) exceed[ti] += b[ti];

  std::vector<TailRow> rows;
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    TailRow r;
    r.threshold = thresholds[ti];
    r.empirical = static_cast<double>(exceed[ti]) / static_cast<double>(samples);
    r.bound = std::exp(-kappa * thresholds[ti] + 2.0);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace agf
