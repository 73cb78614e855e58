#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "phenopf/assembly.hpp"
#include "phenopf/config.hpp"
#include "phenopf/mesh.hpp"
#include "phenopf/phenotype.hpp"
#include "phenopf/solvers.hpp"

namespace phenopf {

struct ChState {
  ScalarField phi{FieldTag::phi, {}};
  ScalarField mu{FieldTag::mu, {}};
  std::size_t step = 0;
  SolveReport report;
  /// True when the step needed the two-half-step fallback.
  bool halved = false;
};

struct ChParams {
  double m_mob = 1e-2;
  double eps = 1e-2;
  double dt = 1e-3;
};

struct ChControls {
  SolverControls newton;
  SolverControls linear;
  bool adaptive_forcing = true;
  bool reuse_preconditioner = true;
};

/// Default Newton/linear controls for the Cahn-Hilliard block.
ChControls ch_controls(const SimulationConfig& cfg);

/// Convex-splitting Cahn-Hilliard step with unknowns x = [phi; mu]:
///   (M/dt)(phi - phi_n) + m K mu - M g = 0
///   M mu - eps K phi - (1/eps) N(phi) + (1/eps) M phi_n = 0
/// solved by Newton. Keeps the Jacobian pattern and the preconditioner
/// between steps.
class ChSolver {
 public:
  ChSolver(const FemOperators& ops, ChParams params, ChControls controls);

  /// Throws SolverError when Newton fails at dt and again on two half steps.
  ChState step(const ChState& state, std::span<const double> source);

  std::vector<double> residual(std::span<const double> phi_n, std::span<const double> source,
                               std::span<const double> x) const;
  SparseMatrix jacobian(std::span<const double> x) const;
  const ChParams& params() const { return params_; }

 private:
  ChState solve(const ChState& state, std::span<const double> source);

  const FemOperators* ops_;
  ChParams params_;
  ChControls controls_;
  SparseMatrix base_;                    // Jacobian without the cubic block
  std::vector<std::size_t> cubic_slot_;  // pattern slot -> position in base_
  PreconditionerCache cache_;
  std::unique_ptr<ChSolver> half_;
};

/// One step with a fresh solver.
ChState ch_step(const ChState& state, std::span<const double> source, double m_mob, double eps,
                double dt, const FemOperators& ops, const ChControls& controls);

/// mu from the chemical-potential equation with phi_n = phi:
/// M mu = eps K phi + (1/eps) (N(phi) - M phi).
ScalarField initial_mu(const ScalarField& phi, double eps, const FemOperators& ops,
                       const SolverControls& linear);

/// Backward-Euler nutrient update (M/dt + D K + W + b M) sigma = M (sigma_n/dt + b sigma_B),
/// W the weighted mass of `consumption` (nodal h(phi_n) * Kbar_n).
class SigmaSolver {
 public:
  SigmaSolver(const FemOperators& ops, double d_sigma, double b, double sigma_b, double dt,
              SolverControls controls);

  ScalarField step(const ScalarField& sigma_n, std::span<const double> consumption) const;
  /// (D K + W + b M) sigma = b M sigma_B, started from sigma_B.
  ScalarField steady(std::span<const double> consumption) const;
  const SolveReport& last_report() const { return report_; }

 private:
  const FemOperators* ops_;
  double d_sigma_, b_, sigma_b_, dt_;
  SolverControls controls_;
  std::vector<double> transient_values_;
  std::vector<double> steady_values_;
  mutable SolveReport report_;
};

/// Nodal h(phi) * sum_i w_i k(y_i) f_i.
std::vector<double> consumption_coefficient(const ScalarField& phi, const PhenotypeField& f,
                                            const ModelFunctions& fns);

ScalarField sigma_step(const ScalarField& sigma_n, const ScalarField& phi_n,
                       const PhenotypeField& f_n, const ModelFunctions& fns,
                       const SimulationConfig& cfg, const FemOperators& ops,
                       const SolverControls& controls);

ScalarField sigma_steady_init(const ScalarField& phi0, const PhenotypeField& f0,
                              const ModelFunctions& fns, const SimulationConfig& cfg,
                              const FemOperators& ops, const SolverControls& controls);

/// Controls for the symmetric nutrient solves (CG, Jacobi).
SolverControls sigma_controls(const SimulationConfig& cfg);

}  // namespace phenopf
