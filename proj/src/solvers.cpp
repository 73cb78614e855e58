#include "phenopf/solvers.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <random>
#include <sstream>

namespace phenopf {

namespace {

void check_dims(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0) {
  if (a.n_rows != a.n_cols) throw std::invalid_argument("linear solve: matrix is not square");
  if (b.size() != a.n_rows || x0.size() != a.n_rows) {
    throw std::invalid_argument("linear solve: dimension mismatch");
  }
}

std::vector<double> true_residual(const SparseMatrix& a, std::span<const double> b,
                                  std::span<const double> x) {
  auto r = multiply(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  std::copy(r.begin(), r.end(), z.begin());
}

JacobiPreconditioner::JacobiPreconditioner(const SparseMatrix& a) : inv_diag_(a.diagonal()) {
  for (auto& d : inv_diag_) d = d != 0.0 ? 1.0 / d : 1.0;
}

void JacobiPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
}

Ilu0Preconditioner::Ilu0Preconditioner(const SparseMatrix& a, std::size_t interleave)
    : perm_(a.n_rows), work_(a.n_rows) {
  const std::size_t n = a.n_rows;
  if (a.n_cols != n) throw std::invalid_argument("ILU(0): matrix is not square");
  if (interleave == 0 || n % interleave != 0) {
    throw std::invalid_argument("ILU(0): size is not a multiple of the interleave factor");
  }
  const std::size_t block = n / interleave;
  std::vector<std::size_t> inverse(n);
  for (std::size_t old = 0; old < n; ++old) {
    perm_[old] = (old % block) * interleave + old / block;
    inverse[perm_[old]] = old;
  }

  // Symmetric permutation, rows kept sorted by column.
  lu_.n_rows = lu_.n_cols = n;
  lu_.row_offsets.assign(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t old = inverse[r];
    lu_.row_offsets[r + 1] = lu_.row_offsets[r] + (a.row_offsets[old + 1] - a.row_offsets[old]);
  }
  lu_.col_indices.resize(a.nnz());
  lu_.values.resize(a.nnz());
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t old = inverse[r];
    row.clear();
    for (std::size_t p = a.row_offsets[old]; p < a.row_offsets[old + 1]; ++p) {
      row.emplace_back(perm_[a.col_indices[p]], a.values[p]);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      lu_.col_indices[lu_.row_offsets[r] + k] = row[k].first;
      lu_.values[lu_.row_offsets[r] + k] = row[k].second;
    }
  }

  diag_.assign(n, 0);
  std::vector<std::size_t> pos(n, SIZE_MAX);
  auto& v = lu_.values;
  const auto& col = lu_.col_indices;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = lu_.row_offsets[i];
    const std::size_t end = lu_.row_offsets[i + 1];
    for (std::size_t p = begin; p < end; ++p) pos[col[p]] = p;
    bool has_diag = false;
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t k = col[p];
      if (k >= i) {
        has_diag = k == i;
        diag_[i] = p;
        break;
      }
      v[p] /= v[diag_[k]];
      for (std::size_t q = diag_[k] + 1; q < lu_.row_offsets[k + 1]; ++q) {
        const std::size_t slot = pos[col[q]];
        if (slot != SIZE_MAX) v[slot] -= v[p] * v[q];
      }
    }
    if (!has_diag || v[diag_[i]] == 0.0 || !std::isfinite(v[diag_[i]])) {
      throw SolverError("ILU(0): zero or invalid pivot in row " + std::to_string(i));
    }
    for (std::size_t p = begin; p < end; ++p) pos[col[p]] = SIZE_MAX;
  }
}

void Ilu0Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = perm_.size();
  auto& w = work_;
  for (std::size_t i = 0; i < n; ++i) w[perm_[i]] = r[i];
  const auto& off = lu_.row_offsets;
  const auto& col = lu_.col_indices;
  const auto& v = lu_.values;
  for (std::size_t i = 0; i < n; ++i) {
    double s = w[i];
    for (std::size_t p = off[i]; p < diag_[i]; ++p) s -= v[p] * w[col[p]];
    w[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = w[i];
    for (std::size_t p = diag_[i] + 1; p < off[i + 1]; ++p) s -= v[p] * w[col[p]];
    w[i] = s / v[diag_[i]];
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = w[perm_[i]];
}

std::unique_ptr<LinearPreconditioner> make_preconditioner(const SparseMatrix& a,
                                                          const SolverControls& ctl) {
  switch (ctl.preconditioner) {
    case Preconditioner::none:
      return std::make_unique<IdentityPreconditioner>();
    case Preconditioner::diagonal:
      return std::make_unique<JacobiPreconditioner>(a);
    case Preconditioner::ilu0:
      return std::make_unique<Ilu0Preconditioner>(a, ctl.interleave);
  }
  throw std::invalid_argument("unknown preconditioner");
}

const LinearPreconditioner& PreconditionerCache::get(const SparseMatrix& a,
                                                     const SolverControls& ctl) {
  if (!prec_) {
    prec_ = make_preconditioner(a, ctl);
    fresh_ = true;
    ++rebuilds_;
  }
  return *prec_;
}

void PreconditionerCache::record(std::size_t iterations) {
  if (fresh_) {
    baseline_ = iterations;
    fresh_ = false;
  } else if (iterations > 2 * baseline_ + 10) {
    prec_.reset();
  }
}

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                     const SolverControls& ctl, const IterateObserver& observer) {
  check_dims(a, b, x0);
  const std::size_t n = a.n_rows;
  const double target = std::max(ctl.rel_tol * norm2(b), ctl.abs_tol);
  const auto prec = make_preconditioner(a, ctl);

  SolveResult out{std::vector<double>(x0.begin(), x0.end()), {}};
  auto& x = out.x;
  auto& rep = out.report;
  std::vector<double> r = true_residual(a, b, x);
  std::vector<double> z(n), p(n), q(n);
  rep.residual = norm2(r);

  std::size_t it = 0;
  // Outer loop restarts from the true residual if the recursive one drifted.
  while (rep.residual > target && it < ctl.max_iter) {
    prec->apply(r, z);
    p = z;
    double rz = dot(r, z);
    while (it < ctl.max_iter) {
      multiply_into(a, p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) {
        rep.status = SolveStatus::breakdown;
        rep.iterations = it;
        rep.residual = norm2(true_residual(a, b, x));
        return out;
      }
      const double step = rz / pq;
      kernels::omp::axpy(step, p, x);
      kernels::omp::axpy(-step, q, r);
      ++it;
      if (observer) observer(it, x);
      const double rn = norm2(r);
      if (rn <= target) break;
      prec->apply(r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    r = true_residual(a, b, x);
    rep.residual = norm2(r);
  }
  rep.iterations = it;
  rep.converged = rep.residual <= target;
  rep.status = rep.converged ? SolveStatus::converged : SolveStatus::max_iterations;
  return out;
}

SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b,
                           std::span<const double> x0, const SolverControls& ctl) {
  check_dims(a, b, x0);
  return bicgstab_solve(a, b, x0, ctl, *make_preconditioner(a, ctl));
}

SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b,
                           std::span<const double> x0, const SolverControls& ctl,
                           const LinearPreconditioner& prec) {
  check_dims(a, b, x0);
  const std::size_t n = a.n_rows;
  const double target = std::max(ctl.rel_tol * norm2(b), ctl.abs_tol);

  SolveResult out{std::vector<double>(x0.begin(), x0.end()), {}};
  auto& x = out.x;
  auto& rep = out.report;
  std::vector<double> r = true_residual(a, b, x);
  rep.residual = norm2(r);

  std::vector<double> r_hat(n), p(n), v(n), p_hat(n), s(n), s_hat(n), t(n);
  std::size_t it = 0;
  int restarts = 0;
  while (rep.residual > target && it < ctl.max_iter) {
    r_hat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    bool broke_down = false;
    while (it < ctl.max_iter) {
      const double rho_new = dot(r_hat, r);
      if (rho_new == 0.0 || !std::isfinite(rho_new)) {
        broke_down = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      prec.apply(p, p_hat);
      multiply_into(a, p_hat, v);
      const double rv = dot(r_hat, v);
      if (rv == 0.0) {
        broke_down = true;
        break;
      }
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      ++it;
      if (norm2(s) <= target) {
        kernels::omp::axpy(alpha, p_hat, x);
        r = s;
        break;
      }
      prec.apply(s, s_hat);
      multiply_into(a, s_hat, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p_hat[i] + omega * s_hat[i];
        r[i] = s[i] - omega * t[i];
      }
      if (omega == 0.0) {
        broke_down = true;
        break;
      }
      if (norm2(r) <= target) break;
    }
    r = true_residual(a, b, x);
    rep.residual = norm2(r);
    if (broke_down && rep.residual > target) {
      // Restart with a fresh shadow residual a few times before giving up.
      if (restarts++ >= 3) {
        rep.iterations = it;
        rep.status = SolveStatus::breakdown;
        return out;
      }
    }
  }
  rep.iterations = it;
  rep.converged = rep.residual <= target;
  rep.status = rep.converged ? SolveStatus::converged : SolveStatus::max_iterations;
  return out;
}

SolveResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                         std::span<const double> x0, const SolverControls& ctl,
                         const SolverControls& linear, const NewtonOptions& options) {
  SolveResult out{std::vector<double>(x0.begin(), x0.end()), {}};
  auto& x = out.x;
  auto& rep = out.report;
  auto r = residual(x);
  if (r.size() != x.size()) throw std::invalid_argument("newton_solve: residual size mismatch");
  rep.residual = norm2(r);
  rep.history.push_back(rep.residual);
  const double target = std::max(ctl.rel_tol * rep.residual, ctl.abs_tol);

  const double r0 = rep.residual;
  std::vector<double> zero(x.size(), 0.0);
  while (rep.residual > target && rep.iterations < ctl.max_iter) {
    const SparseMatrix jac = jacobian(x);
    SolverControls inner = linear;
    if (options.adaptive_forcing && r0 > 0.0) {
      inner.rel_tol = std::max(linear.rel_tol, std::min(1e-3, rep.residual / r0));
    }
    SolveResult step;
    if (options.cache != nullptr) {
      step = bicgstab_solve(jac, r, zero, inner, options.cache->get(jac, inner));
      options.cache->record(step.report.iterations);
    } else {
      step = bicgstab_solve(jac, r, zero, inner);
    }
    if (!step.report.converged) {
      if (options.cache != nullptr) options.cache->invalidate();
      std::ostringstream msg;
      msg << "newton step " << rep.iterations + 1 << ": linear solve failed ("
          << (step.report.status == SolveStatus::breakdown ? "breakdown" : "max iterations")
          << ", " << step.report.iterations << " iterations, residual " << step.report.residual
          << ")";
      throw SolverError(msg.str());
    }
    rep.inner_iterations += step.report.iterations;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step.x[i];
    ++rep.iterations;
    r = residual(x);
    rep.residual = norm2(r);
    rep.history.push_back(rep.residual);
    if (!std::isfinite(rep.residual)) break;
  }
  rep.converged = rep.residual <= target;
  rep.status = rep.converged ? SolveStatus::converged : SolveStatus::max_iterations;
  return out;
}

bool spot_check_symmetry(const SparseMatrix& a, std::size_t samples, double tol) {
  if (a.n_rows != a.n_cols) return false;
  if (a.nnz() == 0) return true;
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::size_t> pick(0, a.nnz() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t p = pick(rng);
    const auto row_it = std::upper_bound(a.row_offsets.begin(), a.row_offsets.end(), p);
    const auto i = static_cast<std::size_t>(row_it - a.row_offsets.begin()) - 1;
    const std::size_t j = a.col_indices[p];
    if (std::abs(a.values[p] - a.at(j, i)) > tol * std::max(1.0, std::abs(a.values[p]))) {
      return false;
    }
  }
  return true;
}

}  // namespace phenopf
