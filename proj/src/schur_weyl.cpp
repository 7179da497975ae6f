#include "agf/schur_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "agf/clifford.hpp"
#include "agf/linalg.hpp"
#include "agf/parallel.hpp"
#include "agf/pauli.hpp"

namespace agf {

namespace {

constexpr std::size_t kMaxTensorDim = 4096;

// Character tables, rows in partitions(k, k) order, columns by conjugacy
// class. Class orders:
//   S2: [1,1], [2]
//   S3: [1,1,1], [2,1], [3]
//   S4: [1,1,1,1], [2,1,1], [2,2], [3,1], [4]
int s2_char[2][2] = {{1, 1}, {1, -1}};
int s3_char[3][3] = {{1, 1, 1}, {2, 0, -1}, {1, -1, 1}};
int s4_char[5][5] = {{1, 1, 1, 1, 1},
                     {3, 1, -1, 0, -1},
                     {2, 0, 2, -1, 0},
                     {3, -1, -1, 0, 1},
                     {1, -1, 1, 1, -1}};

int class_index(int k, const std::vector<int>& cycles) {
  if (k == 1) return 0;
  if (k == 2) return cycles[0] == 1 ? 0 : 1;
  if (k == 3) {
    if (cycles[0] == 1) return 0;
    if (cycles[0] == 2) return 1;
    return 2;
  }
  if (cycles[0] == 1) return 0;
  if (cycles[0] == 2) return cycles[1] == 2 ? 2 : 1;
  if (cycles[0] == 3) return 3;
  return 4;
}

int partition_row(int k, const Partition& lambda) {
  auto all = partitions(k, k);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] == lambda) return static_cast<int>(i);
  throw std::invalid_argument("unknown partition");
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int qubits_of_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  if ((std::size_t{1} << n) != d) return -1;
  return n;
}

// column -> row map of pi(sigma): basis column c goes to row map[c].
std::vector<std::size_t> perm_index_map(const Perm& sigma, std::size_t d) {
  const int k = static_cast<int>(sigma.size());
  const std::size_t dim = ipow(d, k);
  Perm inv = perm_inverse(sigma);
  std::vector<std::size_t> map(dim);
  std::vector<int> digits(k);
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t rem = c;
    for (int j = k - 1; j >= 0; --j) {
      digits[j] = static_cast<int>(rem % d);
      rem /= d;
    }
    std::size_t r = 0;
    for (int j = 0; j < k; ++j) r = r * d + digits[inv[j]];
    map[c] = r;
  }
  return map;
}

cdouble trace_times_perm(const ComplexMatrix& a, const std::vector<std::size_t>& map) {
  // Tr(A pi) = sum_i A(i, map[i]); column i of pi has its one at row map[i].
  cdouble t = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) t += a(i, map[i]);
  return t;
}

// out += w * (T * pi), i.e. a column gather of T.
void add_right_perm(ComplexMatrix& out, const ComplexMatrix& t, double w,
                    const std::vector<std::size_t>& map) {
  const std::size_t n = t.rows;
  for (std::size_t i = 0; i < n; ++i) {
    cdouble* orow = out.row_ptr(i);
    const cdouble* trow = t.row_ptr(i);
    for (std::size_t j = 0; j < n; ++j) orow[j] += w * trow[map[j]];
  }
}

// Apply U to tensor leg `leg` of the row index: rows(out) = (I..U..I) rows(in).
void apply_leg_rows(const ComplexMatrix& u, const ComplexMatrix& in, ComplexMatrix& out,
                    int leg, int k) {
  const std::size_t d = u.rows;
  const std::size_t dim = in.rows;
  const std::size_t place = ipow(d, k - 1 - leg);
  const std::size_t outer = ipow(d, leg);
  for (auto& v : out.data) v = cdouble(0.0, 0.0);
  for (std::size_t hi = 0; hi < outer; ++hi) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t src_base = (hi * d + j) * place;
      for (std::size_t i = 0; i < d; ++i) {
        const cdouble uij = u(i, j);
        if (uij == cdouble(0.0, 0.0)) continue;
        const std::size_t dst_base = (hi * d + i) * place;
        for (std::size_t lo = 0; lo < place; ++lo) {
          cdouble* dst = out.row_ptr(dst_base + lo);
          const cdouble* src = in.row_ptr(src_base + lo);
          for (std::size_t c = 0; c < dim; ++c) dst[c] += uij * src[c];
        }
      }
    }
  }
}

ComplexMatrix apply_all_legs_rows(const ComplexMatrix& u, ComplexMatrix a, int k) {
  ComplexMatrix buf(a.rows, a.cols);
  for (int leg = 0; leg < k; ++leg) {
    apply_leg_rows(u, a, buf, leg, k);
    std::swap(a, buf);
  }
  return a;
}

struct WelfordState {
  long n = 0;
  std::vector<double> mean_re, mean_im, m2_re, m2_im;

  explicit WelfordState(std::size_t entries)
      : mean_re(entries, 0.0), mean_im(entries, 0.0), m2_re(entries, 0.0), m2_im(entries, 0.0) {}

  void add(const ComplexMatrix& x) {
    ++n;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      const double re = x.data[i].real(), im = x.data[i].imag();
      const double dre = re - mean_re[i], dim_ = im - mean_im[i];
      mean_re[i] += dre * inv;
      mean_im[i] += dim_ * inv;
      m2_re[i] += dre * (re - mean_re[i]);
      m2_im[i] += dim_ * (im - mean_im[i]);
    }
  }

  void merge(const WelfordState& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double nt = na + nb;
    for (std::size_t i = 0; i < mean_re.size(); ++i) {
      const double dre = o.mean_re[i] - mean_re[i];
      const double dim_ = o.mean_im[i] - mean_im[i];
      mean_re[i] += dre * nb / nt;
      mean_im[i] += dim_ * nb / nt;
      m2_re[i] += o.m2_re[i] + dre * dre * na * nb / nt;
      m2_im[i] += o.m2_im[i] + dim_ * dim_ * na * nb / nt;
    }
    n += o.n;
  }
};

}  // namespace

int Partition::sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::vector<Partition> partitions(int k, int max_rows) {
  if (k < 1 || k > 4) throw std::invalid_argument("partitions: k must be in 1..4");
  std::vector<Partition> out;
  std::vector<int> cur;
  // lexicographic descending: always place the largest feasible part first
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(Partition{cur});
      return;
    }
    if (static_cast<int>(cur.size()) >= max_rows) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, k, k);
  return out;
}

std::vector<Perm> all_permutations(int k) {
  Perm p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Perm perm_inverse(const Perm& p) {
  Perm inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
  return inv;
}

Perm perm_compose(const Perm& first, const Perm& then) {
  Perm r(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) r[i] = then[first[i]];
  return r;
}

std::vector<int> cycle_type(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  std::vector<int> cycles;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = p[j];
      ++len;
    }
    cycles.push_back(len);
  }
  std::sort(cycles.rbegin(), cycles.rend());
  return cycles;
}

ComplexMatrix perm_operator(const Perm& sigma, std::size_t d) {
  const int k = static_cast<int>(sigma.size());
  const std::size_t dim = ipow(d, k);
  if (dim > kMaxTensorDim) throw std::invalid_argument("perm_operator: tensor space too large");
  auto map = perm_index_map(sigma, d);
  ComplexMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) m(map[c], c) = 1.0;
  return m;
}

long specht_dimension(const Partition& lambda) {
  const int k = lambda.sum();
  long fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  long hooks = 1;
  for (int i = 0; i < lambda.num_rows(); ++i) {
    for (int j = 0; j < lambda.parts[i]; ++j) {
      int arm = lambda.parts[i] - j - 1;
      int leg = 0;
      for (int r = i + 1; r < lambda.num_rows(); ++r)
        if (lambda.parts[r] > j) ++leg;
      hooks *= arm + leg + 1;
    }
  }
  return fact / hooks;
}

int sn_character(const Partition& lambda, const std::vector<int>& cycles) {
  const int k = lambda.sum();
  const int row = partition_row(k, lambda);
  const int col = class_index(k, cycles);
  switch (k) {
    case 1:
      return 1;
    case 2:
      return s2_char[row][col];
    case 3:
      return s3_char[row][col];
    case 4:
      return s4_char[row][col];
  }
  throw std::invalid_argument("sn_character: k must be in 1..4");
}

IrrepData young_projector(const Partition& lambda, std::size_t d, int k) {
  if (lambda.sum() != k) throw std::invalid_argument("young_projector: partition sum != k");
  if (lambda.num_rows() > static_cast<int>(d))
    throw std::invalid_argument("young_projector: partition violates the row constraint");
  const std::size_t dim = ipow(d, k);
  if (dim > kMaxTensorDim) throw std::invalid_argument("young_projector: tensor space too large");

  const long dl = specht_dimension(lambda);
  long fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;

  ComplexMatrix p(dim, dim);
  for (const Perm& sigma : all_permutations(k)) {
    const int chi = sn_character(lambda, cycle_type(sigma));
    if (chi == 0) continue;
    const double w = static_cast<double>(dl) * chi / static_cast<double>(fact);
    auto map = perm_index_map(sigma, d);
    for (std::size_t c = 0; c < dim; ++c) p(map[c], c) += w;
  }

  IrrepData data{lambda, dl, 0.0, std::nullopt, std::nullopt, HermitianMatrix(std::move(p))};
  data.D_lambda = trace(data.projector.mat()).real() / static_cast<double>(dl);

  const int n = qubits_of_dim(d);
  if (k == 4 && n >= 1 && n <= 2) {
    HermitianMatrix q = q_projector(n);
    cdouble qp = 0.0;
    const ComplexMatrix& qm = q.mat();
    const ComplexMatrix& pm = data.projector.mat();
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) qp += qm(i, j) * pm(j, i);
    data.D_plus = qp.real() / static_cast<double>(dl);
    data.D_minus = data.D_lambda - *data.D_plus;
  }
  return data;
}

HermitianMatrix q_projector(int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("q_projector: n must be 1 or 2");
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dim = d * d * d * d;
  ComplexMatrix q(dim, dim);
  for (const ComplexMatrix& w : all_paulis_dense(n)) {
    ComplexMatrix w2 = kron(w, w);
    q += kron(w2, w2);
  }
  q *= cdouble(1.0 / static_cast<double>(d * d), 0.0);
  return HermitianMatrix(std::move(q));
}

HermitianMatrix flip_from_paulis(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("flip_from_paulis: n must be 1..3");
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix f(d * d, d * d);
  for (const ComplexMatrix& w : all_paulis_dense(n)) f += kron(w, w);
  f *= cdouble(1.0 / static_cast<double>(d), 0.0);
  return HermitianMatrix(std::move(f));
}

ComplexMatrix twirl_unitary(const ComplexMatrix& a, std::size_t d, int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("twirl_unitary: k must be 1..4");
  const std::size_t dim = ipow(d, k);
  if (dim > kMaxTensorDim) throw std::invalid_argument("twirl_unitary: tensor space too large");
  if (a.rows != dim || a.cols != dim)
    throw std::invalid_argument("twirl_unitary: operand has wrong dimension");

  long fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;

  auto lambdas = partitions(k, static_cast<int>(d));
  std::vector<long> dls;
  std::vector<double> weyl;
  for (const auto& l : lambdas) {
    IrrepData ir = young_projector(l, d, k);
    dls.push_back(ir.d_lambda);
    weyl.push_back(ir.D_lambda);
  }

  // B = (1/k!) sum_tau Tr(A pi(tau)) pi(tau^-1); G = sum_lambda
  // (d_lambda / D_lambda) P_lambda, both assembled in the group ring.
  ComplexMatrix b(dim, dim), g(dim, dim);
  for (const Perm& tau : all_permutations(k)) {
    auto map = perm_index_map(tau, d);
    const cdouble coeff = trace_times_perm(a, map) / static_cast<double>(fact);
    auto inv_map = perm_index_map(perm_inverse(tau), d);
    for (std::size_t c = 0; c < dim; ++c) b(inv_map[c], c) += coeff;

    double gw = 0.0;
    const auto cyc = cycle_type(tau);
    for (std::size_t li = 0; li < lambdas.size(); ++li)
      gw += static_cast<double>(dls[li]) / weyl[li] * static_cast<double>(dls[li]) *
            sn_character(lambdas[li], cyc) / static_cast<double>(fact);
    for (std::size_t c = 0; c < dim; ++c) g(map[c], c) += gw;
  }
  return b * g;
}

ComplexMatrix twirl_clifford(const ComplexMatrix& a, int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("twirl_clifford: n must be 1 or 2");
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dim = d * d * d * d;
  if (a.rows != dim || a.cols != dim)
    throw std::invalid_argument("twirl_clifford: operand has wrong dimension");
  const int k = 4;
  const long fact = 24;

  HermitianMatrix q = q_projector(n);
  ComplexMatrix aq = a * q.mat();
  ComplexMatrix aqp = a - aq;

  auto perms = all_permutations(k);
  std::vector<std::vector<std::size_t>> maps;
  maps.reserve(perms.size());
  for (const auto& s : perms) maps.push_back(perm_index_map(s, d));

  // S+- = sum_sigma Tr(A Q(perp) pi(sigma^-1)) pi(sigma)
  ComplexMatrix splus(dim, dim), sminus(dim, dim);
  for (std::size_t si = 0; si < perms.size(); ++si) {
    auto inv_map = perm_index_map(perm_inverse(perms[si]), d);
    const cdouble tp = trace_times_perm(aq, inv_map);
    const cdouble tm = trace_times_perm(aqp, inv_map);
    for (std::size_t c = 0; c < dim; ++c) {
      splus(maps[si][c], c) += tp;
      sminus(maps[si][c], c) += tm;
    }
  }
  ComplexMatrix tplus = q.mat() * splus;
  ComplexMatrix tminus = sminus - q.mat() * sminus;  // Q^perp S-

  ComplexMatrix e(dim, dim);
  for (const auto& lambda : partitions(k, static_cast<int>(d))) {
    IrrepData ir = young_projector(lambda, d, k);
    const double dplus = ir.D_plus.value();
    const double dminus = ir.D_minus.value();
    // T *  P_lambda, expanded over the group ring
    for (std::size_t si = 0; si < perms.size(); ++si) {
      const int chi = sn_character(lambda, cycle_type(perms[si]));
      if (chi == 0) continue;
      const double base = static_cast<double>(ir.d_lambda) / static_cast<double>(fact) *
                          static_cast<double>(ir.d_lambda) * chi / static_cast<double>(fact);
      if (dplus > 0.5) add_right_perm(e, tplus, base / dplus, maps[si]);
      if (dminus > 0.5) add_right_perm(e, tminus, base / dminus, maps[si]);
    }
  }
  return e;
}

ComplexMatrix tensor_power_conjugate(const ComplexMatrix& u, const ComplexMatrix& a, int k) {
  // U^k A U^+k = U^k (U^k A^+)^+
  ComplexMatrix t = apply_all_legs_rows(u, adjoint(a), k);
  return apply_all_legs_rows(u, adjoint(t), k);
}

TwirlMonteCarloResult twirl_monte_carlo(const ComplexMatrix& a, std::size_t d, int k,
                                        TwirlEnsemble ensemble, long samples,
                                        const SeedStream& rng) {
  const std::size_t dim = ipow(d, k);
  if (dim > kMaxTensorDim)
    throw std::invalid_argument("twirl_monte_carlo: tensor space too large");
  if (a.rows != dim || a.cols != dim)
    throw std::invalid_argument("twirl_monte_carlo: operand has wrong dimension");
  if (samples < 1) throw std::invalid_argument("twirl_monte_carlo: samples must be >= 1");
  int n = qubits_of_dim(d);
  if (ensemble == TwirlEnsemble::clifford && n < 0)
    throw std::invalid_argument("twirl_monte_carlo: clifford ensemble needs d = 2^n");

  const int nblocks = static_cast<int>(std::min<long>(16, samples));
  std::vector<WelfordState> blocks(nblocks, WelfordState(dim * dim));

  parallel_for(nblocks, [&](long b) {
    const long begin = samples * b / nblocks;
    const long end = samples * (b + 1) / nblocks;
    for (long i = begin; i < end; ++i) {
      SeedStream si = rng.derive(static_cast<std::uint64_t>(i));
      ComplexMatrix u = (ensemble == TwirlEnsemble::haar)
                            ? haar_unitary(d, si)
                            : tableau_to_unitary(sample_clifford(n, si));
      blocks[b].add(tensor_power_conjugate(u, a, k));
    }
  });

  WelfordState total(dim * dim);
  for (const auto& b : blocks) total.merge(b);

  TwirlMonteCarloResult res;
  res.samples = samples;
  res.mean = ComplexMatrix(dim, dim);
  res.std_error = RealMatrix(dim, dim);
  for (std::size_t i = 0; i < dim * dim; ++i) {
    res.mean.data[i] = cdouble(total.mean_re[i], total.mean_im[i]);
    if (samples > 1) {
      const double var =
          (total.m2_re[i] + total.m2_im[i]) / static_cast<double>(samples - 1);
      res.std_error.data[i] = std::sqrt(var / static_cast<double>(samples));
    }
  }
  return res;
}

namespace detail {
int* mutable_s4_character_table() { return &s4_char[0][0]; }
}  // namespace detail

}  // namespace agf
