// Acceptance gate: one PASS/FAIL line per criterion. The scenario runs take
// several minutes each on the nx=64 desk mesh; each is done once and shared
// between the criteria that read it.

#include <cstdio>
#include <iostream>
#include <vector>

#include "suites.hpp"

using namespace phenopf;
using namespace phenopf::validation;

namespace {

int failures = 0;

void report(int id, const Check& c) {
  std::cout << "criterion " << id << ' ' << (c.passed ? "PASS" : "FAIL") << "  " << c.name << ": "
            << c.measured << " (" << c.tolerance << ")" << std::endl;
  failures += c.passed ? 0 : 1;
}

void note(const RunTrace& t) {
  std::fprintf(stderr, "  run %-12s %6zu records  %7.1f s%s\n", t.label.c_str(), t.records.size(),
               t.seconds, t.ok ? "" : "  ABORTED");
}

}  // namespace

int main() {
  report(3, gradient_stability());
  report(6, assembly_oracles());
  report(7, heat_convergence());

  auto coarse_cfg = paper_config();
  coarse_cfg.nx = 32;
  const auto coarse = trace_run("nx=32", coarse_cfg);
  note(coarse);
  report(1, fmass_conservation(coarse));
  report(4, ch_mass_balance(coarse));

  std::vector<RunTrace> theta_runs;
  for (double theta : {0.3, 0.5, 0.7}) {
    auto cfg = desk_config();
    cfg.theta = theta;
    theta_runs.push_back(trace_run("theta=" + std::to_string(theta).substr(0, 3), cfg));
    note(theta_runs.back());
  }
  const RunTrace& ic0 = theta_runs[1];
  const auto ic1 = trace_run("IC1", ic1_config());
  note(ic1);
  const auto ic2 = trace_run("IC2", ic2_config());
  note(ic2);

  report(2, f_nonnegativity({&coarse, &theta_runs[0], &theta_runs[1], &theta_runs[2], &ic1, &ic2}));
  report(5, nutrient_bounds(ic0));
  report(8, fittest_phenotype({&theta_runs[0], &theta_runs[1], &theta_runs[2]}));
  report(9, ic_ordering(ic0, ic1, ic2));
  report(10, onset_at_probe_c(ic0));
  report(11, continuous_dependence());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
