#include "agf/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agf/format.hpp"
#include "agf/linalg.hpp"

#include "json.hpp"

namespace agf {

namespace {

std::size_t isqrt_exact(std::size_t n) {
  std::size_t r = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r != n) throw std::invalid_argument("dimension is not a perfect square");
  return r;
}

// --- raw (unwrapped) kernels used in the solver hot loop ------------------

void symmetrize(ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    m(i, i) = cdouble(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < m.cols; ++j) {
      cdouble avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
}

// eigenvalue clipping; also reports the most negative eigenvalue
ComplexMatrix project_psd_raw(const ComplexMatrix& m, double* min_eig = nullptr) {
  EighResult eg = eigh(HermitianMatrix(m));
  const std::size_t n = m.rows;
  if (min_eig) *min_eig = eg.eigenvalues.empty() ? 0.0 : eg.eigenvalues.front();
  ComplexMatrix out(n, n);
  std::vector<cdouble> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eg.eigenvalues[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) col[i] = eg.eigenvectors(i, k);
    for (std::size_t i = 0; i < n; ++i) {
      const cdouble vik = lam * col[i];
      cdouble* orow = out.row_ptr(i);
      for (std::size_t j = 0; j < n; ++j) orow[j] += vik * std::conj(col[j]);
    }
  }
  symmetrize(out);
  return out;
}

ComplexMatrix project_affine_utp_raw(const ComplexMatrix& z, std::size_t d) {
  const double dd = static_cast<double>(d);
  ComplexMatrix out = z;

  cdouble tr = trace(z);

  // partial traces
  ComplexMatrix t1(d, d), t2(d, d);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e) {
      cdouble acc = 0.0;
      for (std::size_t a = 0; a < d; ++a) acc += z(a * d + b, a * d + e);
      t1(b, e) = acc;
    }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < d; ++c) {
      cdouble acc = 0.0;
      for (std::size_t b = 0; b < d; ++b) acc += z(a * d + b, c * d + b);
      t2(a, c) = acc;
    }
  // traceless parts of the marginals
  const cdouble tr_over_d = tr / dd;
  for (std::size_t i = 0; i < d; ++i) {
    t1(i, i) -= tr_over_d;
    t2(i, i) -= tr_over_d;
  }

  // subtract (t2 - tr/d) (x) Id/d   and   Id/d (x) (t1 - tr/d)
  const double inv_d = 1.0 / dd;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < d; ++c) {
      const cdouble w2 = t2(a, c) * inv_d;
      if (w2 != cdouble(0.0, 0.0))
        for (std::size_t b = 0; b < d; ++b) out(a * d + b, c * d + b) -= w2;
    }
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e) {
      const cdouble w1 = t1(b, e) * inv_d;
      if (w1 != cdouble(0.0, 0.0))
        for (std::size_t a = 0; a < d; ++a) out(a * d + b, a * d + e) -= w1;
    }

  // restore the unit-trace component
  const cdouble fix = (cdouble(1.0, 0.0) - tr) / (dd * dd);
  for (std::size_t i = 0; i < d * d; ++i) out(i, i) += fix;

  symmetrize(out);
  return out;
}

double partial_trace_deviation(const ComplexMatrix& z, std::size_t d) {
  const double inv_d = 1.0 / static_cast<double>(d);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e) {
      cdouble acc1 = 0.0, acc2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        acc1 += z(a * d + b, a * d + e);
        acc2 += z(b * d + a, e * d + a);
      }
      if (b == e) {
        acc1 -= inv_d;
        acc2 -= inv_d;
      }
      s1 += std::norm(acc1);
      s2 += std::norm(acc2);
    }
  return std::sqrt(std::max(s1, s2));
}

ComplexMatrix dykstra_raw(ComplexMatrix x, std::size_t d, int sweeps, double tol,
                          double* gap_out) {
  const std::size_t dim = x.rows;
  ComplexMatrix p(dim, dim), q(dim, dim);
  double gap = 0.0;
  for (int it = 0; it < sweeps; ++it) {
    double min_eig = 0.0;
    ComplexMatrix xp = x + p;
    ComplexMatrix y = project_psd_raw(xp, &min_eig);
    p = xp - y;
    ComplexMatrix yq = y + q;
    ComplexMatrix xn = project_affine_utp_raw(yq, d);
    q = yq - xn;
    gap = frobenius_norm(xn - y);
    x = std::move(xn);
    if (gap <= tol && min_eig >= -tol) break;
  }
  if (gap_out) *gap_out = gap;
  return x;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged:
      return "converged";
    case SolverStatus::max_iters:
      return "max_iters";
    case SolverStatus::infeasible_tolerance:
      return "infeasible_tolerance";
  }
  return "?";
}

HermitianMatrix project_psd(const HermitianMatrix& h) {
  return HermitianMatrix(project_psd_raw(h.mat()));
}

HermitianMatrix project_affine_utp(const HermitianMatrix& h) {
  const std::size_t d = isqrt_exact(h.dim());
  return HermitianMatrix(project_affine_utp_raw(h.mat(), d));
}

HermitianMatrix project_feasible_dykstra(const HermitianMatrix& h, int sweeps, double tol,
                                         double* gap) {
  const std::size_t d = isqrt_exact(h.dim());
  return HermitianMatrix(dykstra_raw(h.mat(), d, sweeps, tol, gap));
}

ReconstructionResult reconstruct(const MeasurementRecord& record, const SolverConfig& cfg,
                                 const ChoiMatrix* ground_truth) {
  if (record.settings.empty() || record.f.size() != record.settings.size())
    throw std::invalid_argument("reconstruct: empty or inconsistent record");
  if (cfg.max_iters < 1 || cfg.tol_obj <= 0.0 || cfg.tol_feas <= 0.0)
    throw std::invalid_argument("reconstruct: invalid solver configuration");

  const std::size_t d = record.d;
  const std::size_t dim = d * d;
  MeasurementMap map(d, record.settings);
  const std::vector<double>& f = record.f;
  const auto m = static_cast<double>(f.size());
  (void)m;

  const double op_norm = map.operator_norm();
  const double step_base = 1.0 / std::max(op_norm * op_norm, 1e-12);
  const bool backtracking = cfg.step_rule == SolverConfig::StepRule::backtracking;
  double step = backtracking ? 4.0 * step_base : step_base;
  const double step_floor = 1e-4 * step_base;
  const double step_cap = 64.0 * step_base;

  // data-fit value used for descent decisions (Huber when requested)
  auto fit_value = [&](const std::vector<double>& av) {
    double acc = 0.0;
    if (!cfg.l1_huber) {
      for (std::size_t i = 0; i < av.size(); ++i) {
        const double r = av[i] - f[i];
        acc += 0.5 * r * r;
      }
    } else {
      const double del = cfg.huber_delta;
      for (std::size_t i = 0; i < av.size(); ++i) {
        const double r = std::abs(av[i] - f[i]);
        acc += (r <= del) ? 0.5 * r * r : del * (r - 0.5 * del);
      }
    }
    return acc;
  };
  auto residual_weights = [&](const std::vector<double>& av, std::vector<double>& w) {
    w.resize(av.size());
    if (!cfg.l1_huber) {
      for (std::size_t i = 0; i < av.size(); ++i) w[i] = av[i] - f[i];
    } else {
      const double del = cfg.huber_delta;
      for (std::size_t i = 0; i < av.size(); ++i)
        w[i] = std::clamp(av[i] - f[i], -del, del);
    }
  };

  // Warm start: feasibility projection of the unbiased linear estimate
  // (1/m) sum_i c(f_i) J(C_i) with the 2-design expansion coefficients.
  // Far closer to the target than the maximally mixed state and still
  // projected into the feasible set before use.
  ComplexMatrix x(dim, dim);
  {
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(f.size());
    const double c_const = dd * (dd + 1.0) * (dd * dd - 1.0);
    // est = (1/m) sum_i c_i J(C_i); with adjoint_apply(y) =
    // [sum y_i v_i v_i^+ + (sum y_i) Id] / (d+1) this is one adjoint call
    // with y_i = c_i (d+1) / (m d), minus the mean_c/d identity shift.
    std::vector<double> y_w(f.size());
    double mean_c = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double ci = c_const * f[i] - c_const / dd + 1.0;
      mean_c += ci / mm;
      y_w[i] = ci * (dd + 1.0) / (mm * dd);
    }
    ComplexMatrix est = map.adjoint_apply(y_w);
    const double shift = mean_c / dd;
    for (std::size_t i = 0; i < dim; ++i) est(i, i) -= shift;
    symmetrize(est);
    x = dykstra_raw(std::move(est), d, std::max(cfg.dykstra_iters, 24), cfg.tol_feas, nullptr);
  }
  ComplexMatrix x_prev = x;
  ComplexMatrix y = x;

  std::vector<double> av, w;
  map.apply(x, av);
  double fx = fit_value(av);
  double t = 1.0;
  int used_iters = 0;
  bool obj_converged = false;
  int sweeps = cfg.dykstra_iters;
  int stall = 0;            // consecutive non-descending proposals
  double window_fx = fx;    // objective value 100 iterations ago

  // Monotone FISTA: the proposal z always feeds the extrapolation sequence,
  // but x only moves on descent. Long stalls trigger a hard restart with a
  // tighter inner projection, then a step-size reduction.
  for (int it = 1; it <= cfg.max_iters; ++it) {
    used_iters = it;
    if (it % 200 == 0) {
      // windowed stagnation check: fires once progress over 200 iterations
      // drops below the objective-change tolerance
      if (window_fx - fx <= cfg.tol_obj * std::max(window_fx, 1.0)) {
        obj_converged = true;
        break;
      }
      window_fx = fx;
    }
    map.apply(y, av);
    residual_weights(av, w);
    ComplexMatrix grad = map.adjoint_apply(w);

    ComplexMatrix g = y;
    const cdouble s(-step, 0.0);
    for (std::size_t i2 = 0; i2 < g.data.size(); ++i2) g.data[i2] += s * grad.data[i2];
    ComplexMatrix z = dykstra_raw(std::move(g), d, sweeps, cfg.tol_feas, nullptr);
    map.apply(z, av);
    const double fz = fit_value(av);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (fz < fx) {
      x_prev = std::move(x);
      x = std::move(z);
      fx = fz;
      // y = x + (t-1)/t_next (x - x_prev)
      y = x;
      const cdouble c1((t - 1.0) / t_next, 0.0);
      for (std::size_t i2 = 0; i2 < y.data.size(); ++i2)
        y.data[i2] += c1 * (x.data[i2] - x_prev.data[i2]);
      t = t_next;
      stall = 0;
      if (backtracking) step = std::min(step * 1.4, step_cap);
      if (sweeps > cfg.dykstra_iters) sweeps = std::max(cfg.dykstra_iters, sweeps / 2);
      if (fx <= 1e-24) {
        obj_converged = true;
        break;
      }
    } else {
      // keep x, extrapolate through the rejected proposal
      // y = x + (t/t_next)(z - x) + ((t-1)/t_next)(x - x_prev)
      ComplexMatrix ynew = x;
      const cdouble cz(t / t_next, 0.0);
      const cdouble cx((t - 1.0) / t_next, 0.0);
      for (std::size_t i2 = 0; i2 < ynew.data.size(); ++i2)
        ynew.data[i2] += cz * (z.data[i2] - x.data[i2]) + cx * (x.data[i2] - x_prev.data[i2]);
      y = std::move(ynew);
      t = t_next;

      if (++stall >= 20) {
        stall = 0;
        y = x;
        x_prev = x;
        t = 1.0;
        if (sweeps < 128) {
          sweeps *= 2;  // descent blocked by projection error
        } else {
          step *= 0.5;
          if (step < step_floor) {
            obj_converged = true;
            break;
          }
        }
      }
    }
  }

  // final feasibility polish
  double gap = 0.0;
  x = dykstra_raw(std::move(x), d, std::max(cfg.dykstra_iters, 200), 1e-12, &gap);

  ReconstructionResult res;
  map.apply(x, av);
  std::vector<double> resid(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) resid[i] = av[i] - f[i];
  res.objective = l2_norm(resid);
  res.feasibility = partial_trace_deviation(x, d);
  res.iterations = used_iters;

  double min_eig = 0.0;
  {
    EighResult eg = eigh(HermitianMatrix(x));
    min_eig = eg.eigenvalues.empty() ? 0.0 : eg.eigenvalues.front();
  }
  const bool feasible = res.feasibility <= cfg.tol_feas && min_eig >= -1e-8;
  if (!feasible)
    res.status = SolverStatus::infeasible_tolerance;
  else if (obj_converged)
    res.status = SolverStatus::converged;
  else
    res.status = SolverStatus::max_iters;

  res.z_sharp = ChoiMatrix{d, HermitianMatrix(std::move(x))};
  if (ground_truth) res.eps_rec = reconstruction_error(res.z_sharp, *ground_truth, 2);
  return res;
}

LiouvilleMatrix linear_inversion_2design(const std::vector<double>& agfs,
                                         const DesignSet& design) {
  if (agfs.size() != design.elements.size())
    throw std::invalid_argument("linear_inversion_2design: AGF/design length mismatch");
  const std::size_t d = design.d;
  const double dd = static_cast<double>(d);
  const double c_const = dd * (dd + 1.0) * (dd * dd - 1.0);

  RealMatrix acc(d * d, d * d);
  const double inv_n = 1.0 / static_cast<double>(design.elements.size());
  for (std::size_t k = 0; k < design.elements.size(); ++k) {
    const double ck = c_const * agfs[k] - c_const / dd + 1.0;
    LiouvilleMatrix lk = liouville_of_choi(choi_of_unitary(design.elements[k]));
    acc = acc + (ck * inv_n) * lk.matrix;
  }
  return LiouvilleMatrix{d, std::move(acc)};
}

double reconstruction_error(const ChoiMatrix& z, const ChoiMatrix& x, int p) {
  if (z.d != x.d) throw std::invalid_argument("reconstruction_error: dimension mismatch");
  if (p != 1 && p != 2) throw std::invalid_argument("reconstruction_error: p must be 1 or 2");
  HermitianMatrix diff(z.matrix.mat() - x.matrix.mat());
  return schatten_norm(diff, p == 1 ? SchattenP::one : SchattenP::two);
}

std::string result_to_json(const ReconstructionResult& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["objective"] = r.objective;
  j["feasibility"] = r.feasibility;
  j["iterations"] = r.iterations;
  if (r.eps_rec) j["eps_rec"] = *r.eps_rec;
  return j.dump(2);
}

}  // namespace agf
