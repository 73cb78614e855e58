#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "phenopf/assembly.hpp"
#include "phenopf/config.hpp"
#include "phenopf/field_solvers.hpp"
#include "phenopf/phenotype.hpp"

namespace phenopf {

struct SimulationState {
  double time = 0.0;
  std::size_t step = 0;
  ChState ch;
  PhenotypeField f;
  ScalarField sigma{FieldTag::sigma, {}};
};

struct ObservableRecord {
  double time = 0.0;
  double tumour_measure = 0.0;
  double phi_mass = 0.0;
  double energy = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  std::array<PhenotypeStats, 3> probes{};
  double fmass_err = 0.0;
  double ifw_min = 0.0;
  double ifw_max = 0.0;
};

/// Monitors evaluated by every advance().
struct StepDiagnostics {
  std::size_t step = 0;
  /// |1'M(phi_new - phi_old) - dt 1'M g|
  double mass_balance_defect = 0.0;
  /// dt 1'M g
  double source_mass = 0.0;
  double fmass_err = 0.0;
  double f_min = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  std::size_t newton_iterations = 0;
  std::size_t linear_iterations = 0;
  std::size_t sigma_iterations = 0;
  bool halved = false;
};

/// A runtime invariant failed; the message names the step.
class InvariantViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Tolerance of the per-step f-mass and phi mass-balance monitors.
inline constexpr double kInvariantTol = 1e-10;

/// Area where the P1 interpolant of phi exceeds `threshold`, by exact
/// clipping of every triangle against the level line.
double tumour_measure(const ScalarField& phi, const Mesh& mesh, double threshold);

/// (eps/2) phi'K phi + (1/eps) int F(phi_h), F the quartic double well,
/// integrated exactly per element.
double energy(const ScalarField& phi, const FemOperators& ops, double eps);

/// Largest deviation from the two mirror symmetries the mesh has, x <-> y
/// and (x, y) <-> (1 - y, 1 - x).
double diagonal_asymmetry(const ScalarField& phi, const Mesh& mesh);

/// Owns the discretization of one configuration and advances states.
class Simulation {
 public:
  explicit Simulation(SimulationConfig cfg);
  Simulation(SimulationConfig cfg, ModelFunctions fns);

  const SimulationConfig& config() const { return cfg_; }
  const ModelFunctions& functions() const { return fns_; }
  const FemOperators& operators() const { return *ops_; }
  const PhenotypeGrid& grid() const { return *grid_; }
  const KernelMatrix& kernel() const { return kernel_; }
  std::array<std::size_t, 3> probe_nodes() const { return probes_; }

  /// phi0 disk indicator, f0 at every node, steady sigma0, mu0 from phi0.
  SimulationState initial_state() const;

  /// One step: moments, Cahn-Hilliard, phenotype, nutrient; then monitors.
  /// Throws SolverError (or InvariantViolation) naming the step.
  SimulationState advance(const SimulationState& state);
  const StepDiagnostics& last_diagnostics() const { return diag_; }

  /// Nodal source h(phi)(sigma Pbar - Qbar) of a state.
  std::vector<double> source(const SimulationState& state) const;
  ObservableRecord observe(const SimulationState& state) const;

 private:
  SimulationConfig cfg_;
  ModelFunctions fns_;
  std::shared_ptr<const FemOperators> ops_;
  std::shared_ptr<const PhenotypeGrid> grid_;
  KernelMatrix kernel_;
  std::vector<double> fitness_;
  std::array<std::size_t, 3> probes_{};
  std::unique_ptr<ChSolver> ch_;
  std::unique_ptr<SigmaSolver> sigma_;
  StepDiagnostics diag_;
};

SimulationState build_initial_state(const SimulationConfig& cfg, const ModelFunctions& fns,
                                    const Mesh& mesh);

struct RunHooks {
  /// Called for t = 0 (diagnostics null) and after every step.
  std::function<void(const SimulationState&, const ObservableRecord&, const StepDiagnostics*)>
      on_record;
  /// Called with the last good state before RunAborted is thrown.
  std::function<void(const SimulationState&, const std::string&)> on_abort;
};

struct RunResult {
  std::vector<ObservableRecord> records;
  std::vector<StepDiagnostics> diagnostics;
  SimulationState final_state;
};

class RunAborted : public SolverError {
 public:
  RunAborted(const std::string& message, std::size_t last_good_step)
      : SolverError(message), last_good_step_(last_good_step) {}
  std::size_t last_good_step() const { return last_good_step_; }

 private:
  std::size_t last_good_step_;
};

/// Advances `initial` by `steps` steps, recording observables every step.
RunResult run(Simulation& sim, SimulationState initial, std::size_t steps,
              const RunHooks& hooks = {});

/// Full run of a configuration from its initial state for round(t_end/dt) steps.
RunResult run(const SimulationConfig& cfg, const RunHooks& hooks = {});

}  // namespace phenopf
