#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phenopf/config.hpp"
#include "phenopf/simulation.hpp"

namespace phenopf::validation {

struct Check {
  std::string name;
  bool passed = false;
  std::string measured;
  std::string tolerance;
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  bool passed() const;
};

/// "PASS  name: measured (tolerance)"
void print_check(std::ostream& out, const Check& c);
void print_report(std::ostream& out, const SuiteReport& r);

inline constexpr std::string_view kSuiteNames[] = {"assembly", "conservation", "energy",
                                                   "convergence", "scenario"};

SuiteReport assembly_suite();
SuiteReport conservation_suite(std::size_t nx = 32, std::size_t steps = 500);
SuiteReport energy_suite();
SuiteReport convergence_suite();
/// Figure scenarios on the desk mesh; several minutes per run.
SuiteReport scenario_suite();
/// nullopt for an unknown suite name.
std::optional<SuiteReport> run_suite(std::string_view name);

/// Everything the criteria need from one run, gathered without keeping
/// every state in memory.
struct RunTrace {
  std::string label;
  SimulationConfig cfg;
  bool ok = false;
  std::string message;
  std::vector<ObservableRecord> records;
  /// h(phi) at probe C for every record.
  std::vector<double> h_probe_c;
  /// tumour_measure at threshold 0 for every record.
  std::vector<double> measure_zero;
  double f_min = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double max_fmass_err = 0.0;
  double max_balance_defect = 0.0;
  double seconds = 0.0;
};

RunTrace trace_run(const std::string& label, const SimulationConfig& cfg);

/// Reference parameters on the nx = 64 desk mesh.
SimulationConfig desk_config();
/// The alpha = 0 scenarios of the controlled/uncontrolled comparison.
SimulationConfig ic1_config();
SimulationConfig ic2_config();

// One check per acceptance criterion.
Check fmass_conservation(const RunTrace& full_run);
Check f_nonnegativity(const std::vector<const RunTrace*>& runs);
Check gradient_stability();
Check ch_mass_balance(const RunTrace& full_run);
Check nutrient_bounds(const RunTrace& desk_run);
Check assembly_oracles();
Check heat_convergence();
/// theta_runs ordered by increasing theta.
Check fittest_phenotype(const std::vector<const RunTrace*>& theta_runs);
Check ic_ordering(const RunTrace& ic0, const RunTrace& ic1, const RunTrace& ic2, double t_cmp = 4.0);
Check onset_at_probe_c(const RunTrace& desk_run);
Check continuous_dependence();

}  // namespace phenopf::validation
