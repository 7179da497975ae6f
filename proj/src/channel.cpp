#include "agf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "agf/pauli.hpp"

namespace agf {

namespace {

int qubits_of_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  if ((std::size_t{1} << n) != d)
    throw std::invalid_argument("liouville: dimension is not a power of two");
  return n;
}

void require_same_d(const ChoiMatrix& a, const ChoiMatrix& b) {
  if (a.d != b.d) throw std::invalid_argument("channel dimension mismatch");
}

}  // namespace

ChoiMatrix choi_of_unitary(const ComplexMatrix& u) {
  if (!u.square()) throw std::invalid_argument("choi_of_unitary: matrix not square");
  if (!is_unitary(u, 1e-10))
    throw std::invalid_argument("choi_of_unitary: input is not unitary");
  const std::size_t d = u.rows;
  ComplexMatrix j(d * d, d * d);
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t p = 0; p < d * d; ++p)
    for (std::size_t q = 0; q < d * d; ++q) j(p, q) = u.data[p] * std::conj(u.data[q]) * inv_d;
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

ChoiMatrix identity_channel_choi(std::size_t d) {
  return choi_of_unitary(ComplexMatrix::identity(d));
}

ChoiMatrix depolarizing_choi(std::size_t d) {
  ComplexMatrix j = ComplexMatrix::identity(d * d);
  j *= cdouble(1.0 / static_cast<double>(d * d), 0.0);
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

ChoiMatrix mixed_unitary_choi(const std::vector<double>& weights,
                              const std::vector<ComplexMatrix>& unitaries) {
  if (weights.size() != unitaries.size() || weights.empty())
    throw std::invalid_argument("mixed_unitary_choi: bad term list");
  const std::size_t d = unitaries[0].rows;
  ComplexMatrix j(d * d, d * d);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    ChoiMatrix ji = choi_of_unitary(unitaries[i]);
    j += cdouble(weights[i], 0.0) * ji.matrix.mat();
  }
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

double hs_inner(const ChoiMatrix& x, const ChoiMatrix& y) {
  require_same_d(x, y);
  cdouble t = hs_dot(x.matrix.mat(), y.matrix.mat());
  if (std::abs(t.imag()) > 1e-12 * std::max(1.0, std::abs(t.real())))
    throw std::logic_error("hs_inner: non-real inner product of Hermitian matrices");
  return t.real();
}

double avg_gate_fidelity(const ChoiMatrix& c_unitary, const ChoiMatrix& x) {
  require_same_d(c_unitary, x);
  const double d = static_cast<double>(x.d);
  // Tr(X^dagger(Id)) = Tr(X(Id)) = d Tr(J)
  const double tr_adj = d * trace(x.matrix.mat()).real();
  return (d * hs_inner(c_unitary, x) + tr_adj / d) / (d + 1.0);
}

double unitary_agf(const ComplexMatrix& c, const ComplexMatrix& u) {
  if (c.rows != u.rows || !c.square() || !u.square())
    throw std::invalid_argument("unitary_agf: dimension mismatch");
  const double d = static_cast<double>(c.rows);
  const double overlap = std::norm(trace(adjoint(c) * u));
  return (overlap / d + 1.0) / (d + 1.0);
}

ComplexMatrix apply_choi(const ChoiMatrix& x, const ComplexMatrix& a) {
  const std::size_t d = x.d;
  if (a.rows != d || a.cols != d) throw std::invalid_argument("apply_choi: shape mismatch");
  // J[(a,b),(c,e)] = <a| X(|b><e|) |c> / d
  ComplexMatrix out(d, d);
  const ComplexMatrix& j = x.matrix.mat();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cdouble acc = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        const cdouble* jrow = j.row_ptr(r * d + b);
        for (std::size_t e = 0; e < d; ++e) acc += a(b, e) * jrow[c * d + e];
      }
      out(r, c) = acc * static_cast<double>(d);
    }
  return out;
}

ComplexMatrix choi_output_identity(const ChoiMatrix& x) {
  ComplexMatrix t = partial_trace(x.matrix, 2, x.d).mat();
  t *= cdouble(static_cast<double>(x.d), 0.0);
  return t;
}

ComplexMatrix choi_adjoint_output_identity(const ChoiMatrix& x) {
  ComplexMatrix t = partial_trace(x.matrix, 1, x.d).mat();
  t *= cdouble(static_cast<double>(x.d), 0.0);
  return t;
}

bool is_trace_preserving(const ChoiMatrix& x, double tol) {
  ComplexMatrix t = partial_trace(x.matrix, 1, x.d).mat();
  const cdouble inv_d(1.0 / static_cast<double>(x.d), 0.0);
  return frobenius_norm(t - inv_d * ComplexMatrix::identity(x.d)) <= tol;
}

bool is_unital_tp(const ChoiMatrix& x, double tol) {
  if (!is_trace_preserving(x, tol)) return false;
  ComplexMatrix t = partial_trace(x.matrix, 2, x.d).mat();
  const cdouble inv_d(1.0 / static_cast<double>(x.d), 0.0);
  return frobenius_norm(t - inv_d * ComplexMatrix::identity(x.d)) <= tol;
}

LiouvilleMatrix liouville_of_choi(const ChoiMatrix& x) {
  const int n = qubits_of_dim(x.d);
  const std::size_t d = x.d, d2 = d * d;
  auto paulis = all_paulis_dense(n);
  RealMatrix l(d2, d2);
  for (std::size_t k = 0; k < d2; ++k) {
    ComplexMatrix xk = apply_choi(x, paulis[k]);
    for (std::size_t j = 0; j < d2; ++j) {
      cdouble t = trace(paulis[j] * xk);
      l(j, k) = t.real() / static_cast<double>(d);
    }
  }
  return LiouvilleMatrix{d, std::move(l)};
}

ChoiMatrix choi_of_liouville(const LiouvilleMatrix& l) {
  const int n = qubits_of_dim(l.d);
  const std::size_t d = l.d, d2 = d * d;
  if (l.matrix.rows != d2 || l.matrix.cols != d2)
    throw std::invalid_argument("choi_of_liouville: shape mismatch");
  auto paulis = all_paulis_dense(n);
  // J = (1/d^2) sum_{jk} L_jk  W_j (x) W_k^T
  ComplexMatrix j(d2, d2);
  const double scale = 1.0 / static_cast<double>(d2);
  for (std::size_t a = 0; a < d2; ++a)
    for (std::size_t b = 0; b < d2; ++b) {
      const double w = l.matrix(a, b);
      if (w == 0.0) continue;
      ComplexMatrix term = kron(paulis[a], transpose(paulis[b]));
      j += cdouble(w * scale, 0.0) * term;
    }
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

LiouvilleMatrix project_utp(const LiouvilleMatrix& l) {
  LiouvilleMatrix out = l;
  for (std::size_t k = 1; k < out.matrix.cols; ++k) {
    out.matrix(0, k) = 0.0;
    out.matrix(k, 0) = 0.0;
  }
  return out;
}

KrausDecomposition kraus_of_choi(const ChoiMatrix& x, double tol) {
  const std::size_t d = x.d;
  HermitianMatrix scaled(cdouble(static_cast<double>(d), 0.0) * x.matrix.mat());
  EighResult eg = eigh(scaled);

  std::vector<std::size_t> order(eg.eigenvalues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(eg.eigenvalues[a]) > std::abs(eg.eigenvalues[b]);
  });

  KrausDecomposition k;
  for (std::size_t idx : order) {
    const double lam = eg.eigenvalues[idx];
    if (std::abs(lam) < tol) continue;
    ComplexMatrix t(d, d);
    for (std::size_t p = 0; p < d * d; ++p) t.data[p] = eg.eigenvectors(p, idx);
    k.terms.push_back({lam, std::move(t)});
  }
  return k;
}

ChoiMatrix choi_of_kraus(const KrausDecomposition& k, std::size_t d) {
  ComplexMatrix j(d * d, d * d);
  const double inv_d = 1.0 / static_cast<double>(d);
  for (const auto& term : k.terms) {
    if (term.op.rows != d || term.op.cols != d)
      throw std::invalid_argument("choi_of_kraus: operator shape mismatch");
    for (std::size_t p = 0; p < d * d; ++p)
      for (std::size_t q = 0; q < d * d; ++q)
        j(p, q) += cdouble(term.weight * inv_d, 0.0) * term.op.data[p] *
                   std::conj(term.op.data[q]);
  }
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

UnitRankSplit truncate_unit_rank(const HermitianMatrix& h) {
  EighResult eg = eigh(h);
  const std::size_t n = h.dim();
  const std::size_t top = n - 1;  // largest algebraic eigenvalue
  ComplexMatrix r1(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r1(i, j) = eg.eigenvalues[top] * eg.eigenvectors(i, top) *
                 std::conj(eg.eigenvectors(j, top));
  HermitianMatrix rank_one(std::move(r1));
  HermitianMatrix tail(h.mat() - rank_one.mat());
  return UnitRankSplit{std::move(rank_one), std::move(tail), eg.eigenvalues[top]};
}

std::string choi_to_csv(const ChoiMatrix& x) {
  std::string out = "d=" + std::to_string(x.d) + "\n";
  char buf[64];
  const ComplexMatrix& j = x.matrix.mat();
  for (std::size_t i = 0; i < j.rows; ++i) {
    for (std::size_t k = 0; k < j.cols; ++k) {
      const cdouble v = j(i, k);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v.real(), v.imag());
      out += buf;
      if (k + 1 < j.cols) out += ',';
    }
    out += '\n';
  }
  return out;
}

ChoiMatrix choi_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("d=", 0) != 0)
    throw std::invalid_argument("choi_from_csv: missing d= header");
  const std::size_t d = std::stoul(header.substr(2));
  const std::size_t dim = d * d;
  ComplexMatrix j(dim, dim);
  std::string line;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("choi_from_csv: truncated");
    std::istringstream row(line);
    std::string cell;
    for (std::size_t k = 0; k < dim; ++k) {
      double re = 0, im = 0;
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("choi_from_csv: short row");
      re = std::stod(cell);
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("choi_from_csv: short row");
      im = std::stod(cell);
      j(i, k) = cdouble(re, im);
    }
  }
  return ChoiMatrix{d, HermitianMatrix(std::move(j))};
}

}  // namespace agf
