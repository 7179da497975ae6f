#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace agf {

using cdouble = std::complex<double>;

// Dense row-major complex matrix. All channel, twirl and solver code works
// on these; there is no sparse path.
struct ComplexMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cdouble> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  cdouble& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  cdouble* row_ptr(std::size_t i) { return data.data() + i * cols; }
  const cdouble* row_ptr(std::size_t i) const { return data.data() + i * cols; }

  bool square() const { return rows == cols; }

  static ComplexMatrix zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }
  static ComplexMatrix identity(std::size_t n);

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cdouble s);
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cdouble s, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
cdouble trace(const ComplexMatrix& a);
// Hilbert-Schmidt inner product Tr(a^dagger b).
cdouble hs_dot(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

std::vector<cdouble> matvec(const ComplexMatrix& a, const std::vector<cdouble>& x);
cdouble vec_dot(const std::vector<cdouble>& a, const std::vector<cdouble>& b);
double vec_norm(const std::vector<cdouble>& a);

// Largest |entry| of a - b; convenient for exactness assertions.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

// Hermitian matrix. Construction rejects input with
// ||M - M^dagger||_F > 1e-10 * max(1, ||M||_F) and then symmetrises, so a
// held value is Hermitian exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;  // empty placeholder
  explicit HermitianMatrix(ComplexMatrix m);

  std::size_t dim() const { return mat_.rows; }
  const ComplexMatrix& mat() const { return mat_; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(ComplexMatrix(n, n)); }
  static HermitianMatrix identity(std::size_t n) {
    return HermitianMatrix(ComplexMatrix::identity(n));
  }

 private:
  ComplexMatrix mat_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

// Dense real matrix, used for Liouville (Pauli transfer) representations.
struct RealMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const double& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  static RealMatrix identity(std::size_t n);
};

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);
double frobenius_norm(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

}  // namespace agf
