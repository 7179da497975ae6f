#include "agf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agf {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("matrix shape mismatch");
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble s) {
  for (auto& v : data) v *= s;
  return *this;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r = a;
  r += b;
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r = a;
  r -= b;
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
  ComplexMatrix r(a.rows, b.cols);
  // i-k-j order keeps the inner loop contiguous in both b and r.
  for (std::size_t i = 0; i < a.rows; ++i) {
    cdouble* ri = r.row_ptr(i);
    const cdouble* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const cdouble aik = ai[k];
      if (aik == cdouble(0.0, 0.0)) continue;
      const cdouble* bk = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols; ++j) ri[j] += aik * bk[j];
    }
  }
  return r;
}

ComplexMatrix operator*(cdouble s, const ComplexMatrix& a) {
  ComplexMatrix r = a;
  r *= s;
  return r;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r(j, i) = a(i, j);
  return r;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix r = a;
  for (auto& v : r.data) v = std::conj(v);
  return r;
}

cdouble trace(const ComplexMatrix& a) {
  cdouble t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows, a.cols); ++i) t += a(i, i);
  return t;
}

cdouble hs_dot(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  cdouble t = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) t += std::conj(a.data[i]) * b.data[i];
  return t;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data) s += std::norm(v);
  return std::sqrt(s);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const cdouble aij = a(i, j);
      if (aij == cdouble(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows; ++k) {
        cdouble* dst = r.row_ptr(i * b.rows + k) + j * b.cols;
        const cdouble* src = b.row_ptr(k);
        for (std::size_t l = 0; l < b.cols; ++l) dst[l] += aij * src[l];
      }
    }
  return r;
}

std::vector<cdouble> matvec(const ComplexMatrix& a, const std::vector<cdouble>& x) {
  if (a.cols != x.size()) throw std::invalid_argument("matvec shape mismatch");
  std::vector<cdouble> y(a.rows, cdouble(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows; ++i) {
    const cdouble* ai = a.row_ptr(i);
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
  return y;
}

cdouble vec_dot(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  cdouble t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += std::conj(a[i]) * b[i];
  return t;
}

double vec_norm(const std::vector<cdouble>& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.square()) return false;
  ComplexMatrix g = adjoint(u) * u;
  return frobenius_norm(g - ComplexMatrix::identity(u.rows)) <= tol * std::sqrt(double(u.rows));
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) {
  if (!m.square()) throw std::invalid_argument("HermitianMatrix: matrix not square");
  double dev = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      nrm += std::norm(m(i, j));
      dev += std::norm(m(i, j) - std::conj(m(j, i)));
    }
  nrm = std::sqrt(nrm);
  dev = std::sqrt(dev);
  if (dev > 1e-10 * std::max(1.0, nrm))
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
  for (std::size_t i = 0; i < m.rows; ++i) {
    m(i, i) = cdouble(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < m.cols; ++j) {
      cdouble avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  mat_ = std::move(m);
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() + b.mat());
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() - b.mat());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(cdouble(s, 0.0) * a.mat());
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("matrix shape mismatch");
  RealMatrix r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("matrix shape mismatch");
  RealMatrix r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
  return r;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
  RealMatrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix r = a;
  for (auto& v : r.data) v *= s;
  return r;
}

double frobenius_norm(const RealMatrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("matrix shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace agf
