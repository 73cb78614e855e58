#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phenopf/sparse.hpp"

namespace phenopf {

enum class Preconditioner { none, diagonal, ilu0 };

struct SolverControls {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  std::size_t max_iter = 10000;
  Preconditioner preconditioner = Preconditioner::diagonal;
  /// For ilu0 on a system of `interleave` stacked blocks, factorize in the
  /// node-interleaved ordering (unknown b of node k at position k*interleave+b).
  std::size_t interleave = 1;
};

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveReport {
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  /// Residual norm after each iteration (Newton only).
  std::vector<double> history;
  /// Krylov iterations summed over all Newton steps (Newton only).
  std::size_t inner_iterations = 0;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Thrown by nonlinear and time-stepping layers when an inner solve fails.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Approximate inverse applied as z = P^{-1} r.
class LinearPreconditioner {
 public:
  virtual ~LinearPreconditioner() = default;
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
};

class IdentityPreconditioner final : public LinearPreconditioner {
 public:
  void apply(std::span<const double> r, std::span<double> z) const override;
};

class JacobiPreconditioner final : public LinearPreconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  std::vector<double> inv_diag_;
};

/// Zero-fill incomplete LU. With interleave > 1 the factorization runs on
/// the symmetrically permuted, node-interleaved matrix; apply() takes and
/// returns vectors in the original ordering.
class Ilu0Preconditioner final : public LinearPreconditioner {
 public:
  explicit Ilu0Preconditioner(const SparseMatrix& a, std::size_t interleave = 1);
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  SparseMatrix lu_;
  std::vector<std::size_t> diag_;
  std::vector<std::size_t> perm_;  // original index -> factor index
  mutable std::vector<double> work_;
};

std::unique_ptr<LinearPreconditioner> make_preconditioner(const SparseMatrix& a,
                                                          const SolverControls& ctl);

/// Keeps a factorized preconditioner alive across solves with slowly
/// changing matrices and rebuilds it once iteration counts degrade.
class PreconditionerCache {
 public:
  const LinearPreconditioner& get(const SparseMatrix& a, const SolverControls& ctl);
  void record(std::size_t iterations);
  void invalidate() { prec_.reset(); }
  std::size_t rebuilds() const { return rebuilds_; }

 private:
  std::unique_ptr<LinearPreconditioner> prec_;
  std::size_t baseline_ = 0;
  bool fresh_ = false;
  std::size_t rebuilds_ = 0;
};

/// Called with (iteration, current iterate) after every Krylov iteration.
using IterateObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Preconditioned conjugate gradients for SPD systems. Converged means
/// ||b - A x|| <= max(rel_tol*||b||, abs_tol) for the true residual.
SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                     const SolverControls& ctl, const IterateObserver& observer = {});

/// Right-preconditioned BiCGSTAB for general nonsingular systems.
SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b,
                           std::span<const double> x0, const SolverControls& ctl);
SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b,
                           std::span<const double> x0, const SolverControls& ctl,
                           const LinearPreconditioner& prec);

using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;
using JacobianFn = std::function<SparseMatrix(std::span<const double>)>;

struct NewtonOptions {
  /// Inexact Newton: the k-th correction is solved to relative tolerance
  /// max(linear.rel_tol, min(1e-3, ||r_k|| / ||r_0||)).
  bool adaptive_forcing = false;
  /// Reuse the preconditioner across iterations (and across calls sharing it).
  PreconditionerCache* cache = nullptr;
};

/// Plain Newton iteration (no line search); every correction is solved with
/// bicgstab_solve. Converged means ||r(x)|| <= max(rel_tol*||r(x0)||, abs_tol).
/// Throws SolverError, naming the Newton step, when an inner solve fails.
SolveResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                         std::span<const double> x0, const SolverControls& ctl,
                         const SolverControls& linear, const NewtonOptions& options = {});

/// Checks |a_ij - a_ji| on `samples` pseudo-random stored entries.
bool spot_check_symmetry(const SparseMatrix& a, std::size_t samples = 100, double tol = 1e-12);

}  // namespace phenopf
