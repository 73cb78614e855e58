#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phenopf/mesh.hpp"
#include "phenopf/solvers.hpp"

namespace phenopf {

/// Configuration problem. Syntax errors carry a 1-based line and column;
/// semantic errors (missing key, out-of-domain value) carry line 0 when no
/// single line is to blame.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A model function picked from the built-in registry, e.g. `parabolic(1, 0.1, 1)`.
struct FunctionSpec {
  std::string name;
  std::vector<double> params;

  std::string text() const;
  bool operator==(const FunctionSpec&) const = default;
};

/// Registry selections for every model function.
struct FunctionChoices {
  FunctionSpec p_rate{"constant", {1.5}};
  FunctionSpec q_rate{"quadratic_well", {1.0, 1.0}};
  FunctionSpec k_rate{"constant", {1.0}};
  FunctionSpec w_mob{"constant", {1.0}};
  FunctionSpec fitness{"parabolic", {1.0, 0.1, 1.0}};
  FunctionSpec kernel{"gaussian", {100.0}};
  FunctionSpec truncation{"half_linear", {}};
  FunctionSpec potential{"quartic", {}};

  bool operator==(const FunctionChoices&) const = default;
};

using PhenotypeFn = std::function<double(double)>;

struct ModelFunctions {
  PhenotypeFn p_rate;
  PhenotypeFn q_rate;
  PhenotypeFn k_rate;
  PhenotypeFn w_mob;
  PhenotypeFn fitness;
  /// Density of a change from y_source to y_dest; integrates to 1 over the
  /// phenotype domain in y_dest.
  std::function<double(double y_source, double y_dest)> kernel;
  std::function<double(double)> truncation;
  std::function<double(double)> potential_convex;
  std::function<double(double)> potential_expansive;
  std::function<double(double)> potential_convex_deriv;
  std::function<double(double)> potential_expansive_deriv;

  double potential(double r) const { return potential_convex(r) + potential_expansive(r); }
};

/// Builds the functions; the kernel is normalized over [y_min, y_max].
/// Throws ConfigError for unknown names or wrong parameter counts.
ModelFunctions build_model_functions(const FunctionChoices& choices, double y_min, double y_max);

/// The function set of the reference setup on y in [0, 2].
ModelFunctions default_paper_functions();

struct DiskInitialPhase {
  Point2 disk_center{0.5, 0.5};
  double disk_radius_sq = 0.01;
};

struct InitialPhenotype {
  double a = 2.5;
  double y_bar0 = 1.75;
};

struct OutputPolicy {
  std::size_t stride = 100;
  Point2 probe_a{0.5, 0.5};
  Point2 probe_b{0.65, 0.65};
  Point2 probe_c{0.8, 0.8};
  std::string dir = "out";
};

struct SimulationConfig {
  double eps = 1e-2;
  double d_sigma = 1e2;
  double b = 1e4;
  double sigma_b = 1.0;
  double m_mob = 1e-2;
  double alpha = 500.0;
  double theta = 0.5;
  std::size_t nx = 120;
  std::size_t n_y = 17;
  double y_min = 0.0;
  double y_max = 2.0;
  double dt = 1e-3;
  double t_end = 5.4;
  DiskInitialPhase ic_phi;
  InitialPhenotype ic_f;

  double newton_tol = 1e-10;
  double newton_abs_tol = 1e-13;
  std::size_t newton_max_iter = 20;
  double linear_tol = 1e-12;
  std::size_t linear_max_iter = 10000;
  Preconditioner linear_preconditioner = Preconditioner::ilu0;
  double tumour_threshold = -0.9;
  OutputPolicy output;

  FunctionChoices functions;

  /// Number of time steps, round(t_end / dt).
  std::size_t step_count() const;
  SolverControls newton_controls() const;
  SolverControls linear_controls() const;
};

/// Parses a `key = value` document. Every required key must be present,
/// unknown and repeated keys are rejected, and domain checks run last.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::string& path);

/// Sets one key from its textual value, then re-runs the domain checks.
void apply_override(SimulationConfig& cfg, const std::string& key, const std::string& value);

/// Domain checks on parameter values; throws ConfigError naming the failed condition.
void check_config(const SimulationConfig& cfg);

/// Every key, in canonical order, in the syntax parse_config reads.
std::string format_config(const SimulationConfig& cfg);

/// The reference configuration (nx = 120, theta = 0.5, T = 5.4).
SimulationConfig paper_config();

struct AssumptionCheck {
  std::string id;
  std::string description;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
};

/// Checks A1 to A7 by sampling the model functions on 1001-point grids.
ValidationReport validate_assumptions(const SimulationConfig& cfg, const ModelFunctions& fns);

/// Largest dt * alpha * h_max * (theta + max R - min R) over the phenotype
/// grid; the explicit phenotype update keeps f >= 0 while this is below 1.
double nonnegativity_bound(const SimulationConfig& cfg, const ModelFunctions& fns);

}  // namespace phenopf
