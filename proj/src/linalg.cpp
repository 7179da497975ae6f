#include "agf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace agf {

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form. On return `diag`/`off` hold the tridiagonal and `q` the accumulated
// unitary with a = q * tridiag * q^dagger.
void tridiagonalize(ComplexMatrix a, std::vector<double>& diag,
                    std::vector<double>& off, ComplexMatrix& q) {
  const std::size_t n = a.rows;
  q = ComplexMatrix::identity(n);
  std::vector<cdouble> v(n), u(n), w(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing block size
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;

    cdouble x0 = a(k + 1, k);
    cdouble phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cdouble(1.0, 0.0);
    cdouble alpha = -phase * xnorm;

    // v = x - alpha e_1, normalised
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = 0; i < m; ++i) v[i] *= inv;

    // Rank-2 update of the trailing block: A <- A - v w^+ - w v^+ with
    // u = A v, w = 2(u - (v^+ u) v).
    double gamma = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      cdouble acc = 0.0;
      const cdouble* arow = a.row_ptr(k + 1 + i) + (k + 1);
      for (std::size_t j = 0; j < m; ++j) acc += arow[j] * v[j];
      u[i] = acc;
    }
    for (std::size_t i = 0; i < m; ++i) gamma += (std::conj(v[i]) * u[i]).real();
    for (std::size_t i = 0; i < m; ++i) w[i] = 2.0 * (u[i] - gamma * v[i]);
    for (std::size_t i = 0; i < m; ++i) {
      cdouble* arow = a.row_ptr(k + 1 + i) + (k + 1);
      const cdouble vi = v[i], wi = w[i];
      for (std::size_t j = 0; j < m; ++j)
        arow[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
    }

    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }

    // Q <- Q (I - 2 v v^+), restricted to the trailing columns.
    for (std::size_t r = 0; r < n; ++r) {
      cdouble* qrow = q.row_ptr(r) + (k + 1);
      cdouble dot = 0.0;
      for (std::size_t j = 0; j < m; ++j) dot += qrow[j] * v[j];
      dot *= 2.0;
      for (std::size_t j = 0; j < m; ++j) qrow[j] -= dot * std::conj(v[j]);
    }
  }

  // Absorb the phases of the (complex) subdiagonal into a diagonal unitary
  // so that QL can run in real arithmetic.
  diag.assign(n, 0.0);
  off.assign(n > 0 ? n - 1 : 0, 0.0);
  cdouble dphase(1.0, 0.0);
  std::vector<cdouble> dcol(n, cdouble(1.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    diag[k] = a(k, k).real();
    dcol[k] = dphase;
    if (k + 1 < n) {
      cdouble beta = a(k + 1, k);
      double ab = std::abs(beta);
      off[k] = ab;
      if (ab > 0.0) dphase *= beta / ab;
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) q(r, c) *= dcol[c];
}

// Implicit-shift QL on a real symmetric tridiagonal matrix. Rotations are
// accumulated into zt, which holds the transform TRANSPOSED (row j = j-th
// basis vector) so that each rotation touches two contiguous rows.
void tql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& zt) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  e.push_back(0.0);
  const double eps = 2.22044604925031308e-16;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) < 1e-300) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          std::ostringstream msg;
          msg << "eigh: QL failed to converge at dimension " << n
              << " (residual off-diagonal " << e[l] << ")";
          throw std::runtime_error(msg.str());
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          double f = s * e[ii];
          double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          cdouble* lo = zt.row_ptr(ii);
          cdouble* hi = zt.row_ptr(ii + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const cdouble fk = hi[k];
            hi[k] = s * lo[k] + c * fk;
            lo[k] = c * lo[k] - s * fk;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EighResult eigh(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  if (n > kMaxEighDim) throw std::invalid_argument("eigh: dimension above supported cap");
  EighResult res;
  if (n == 0) {
    res.eigenvectors = ComplexMatrix(0, 0);
    return res;
  }

  std::vector<double> d, e;
  ComplexMatrix q;
  tridiagonalize(h.mat(), d, e, q);
  ComplexMatrix qt = transpose(q);
  tql_implicit(d, e, qt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&d](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.eigenvalues[j] = d[order[j]];
    const cdouble* row = qt.row_ptr(order[j]);
    for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, j) = row[i];
  }
  return res;
}

double schatten_norm(const HermitianMatrix& h, SchattenP p) {
  if (p == SchattenP::two) return frobenius_norm(h.mat());
  EighResult eg = eigh(h);
  if (p == SchattenP::one) {
    double s = 0.0;
    for (double v : eg.eigenvalues) s += std::abs(v);
    return s;
  }
  double m = 0.0;
  for (double v : eg.eigenvalues) m = std::max(m, std::abs(v));
  return m;
}

HermitianMatrix partial_trace(const HermitianMatrix& m, int subsystem, std::size_t d) {
  if (m.dim() != d * d)
    throw std::invalid_argument("partial_trace: dimension is not d*d for the given d");
  if (subsystem != 1 && subsystem != 2)
    throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
  ComplexMatrix out(d, d);
  if (subsystem == 1) {
    // trace out the most significant factor
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t e = 0; e < d; ++e) {
        cdouble acc = 0.0;
        for (std::size_t a = 0; a < d; ++a) acc += m(a * d + b, a * d + e);
        out(b, e) = acc;
      }
  } else {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        cdouble acc = 0.0;
        for (std::size_t b = 0; b < d; ++b) acc += m(a * d + b, c * d + b);
        out(a, c) = acc;
      }
  }
  return HermitianMatrix(std::move(out));
}

ComplexMatrix haar_unitary(std::size_t d, SeedStream& rng) {
  if (d == 0) throw std::invalid_argument("haar_unitary: d must be positive");
  ComplexMatrix g(d, d);
  const double inv_sqrt2 = 0.70710678118654752440;
  for (auto& v : g.data)
    v = cdouble(rng.next_gaussian() * inv_sqrt2, rng.next_gaussian() * inv_sqrt2);

  // Modified Gram-Schmidt over columns with one re-orthogonalisation pass.
  // The diagonal of R comes out real positive, which is exactly the phase
  // convention that makes QR of a Ginibre matrix Haar distributed.
  ComplexMatrix q(d, d);
  std::vector<cdouble> col(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) col[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cdouble proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, k)) * col[i];
        for (std::size_t i = 0; i < d; ++i) col[i] -= proj * q(i, k);
      }
    }
    double nrm = vec_norm(col);
    if (nrm < 1e-12) throw std::runtime_error("haar_unitary: degenerate Ginibre draw");
    for (std::size_t i = 0; i < d; ++i) q(i, j) = col[i] / nrm;
  }
  return q;
}

std::vector<cdouble> max_entangled(std::size_t d) {
  if (d == 0) throw std::invalid_argument("max_entangled: d must be positive");
  std::vector<cdouble> psi(d * d, cdouble(0.0, 0.0));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) psi[k * d + k] = a;
  return psi;
}

}  // namespace agf
