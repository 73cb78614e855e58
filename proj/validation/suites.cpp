#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "oracles.hpp"
#include "phenopf/assembly.hpp"
#include "phenopf/field_solvers.hpp"
#include "phenopf/sparse.hpp"

namespace phenopf::validation {

namespace {

std::string num(double v, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double max_abs_diff(const oracle::Dense& a, const oracle::Dense& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  }
  return worst;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> random_vector(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Check bound_check(std::string name, double measured, double tol) {
  return {std::move(name), measured <= tol, num(measured), "<= " + num(tol)};
}

// Combines several error checks into one line reporting the worst of them.
Check worst_of(std::string name, const std::vector<Check>& parts, const std::vector<double>& errs,
               double tol) {
  Check c{std::move(name), true, "", "<= " + num(tol)};
  double worst = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    c.passed = c.passed && parts[i].passed;
    worst = std::max(worst, errs[i]);
  }
  c.measured = "worst " + num(worst) + " over " + std::to_string(parts.size()) + " comparisons";
  return c;
}

double relative_increase(double before, double after) {
  return (after - before) / std::max(std::abs(before), std::numeric_limits<double>::min());
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void print_check(std::ostream& out, const Check& c) {
  out << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << c.measured;
  if (!c.tolerance.empty()) out << " (" << c.tolerance << ")";
  out << '\n';
}

void print_report(std::ostream& out, const SuiteReport& r) {
  out << "suite " << r.name << '\n';
  for (const auto& c : r.checks) print_check(out, c);
  out << (r.passed() ? "suite passed" : "suite FAILED") << '\n';
}

// ---- assembly --------------------------------------------------------------

namespace {

struct AssemblyCompare {
  std::vector<Check> checks;
  std::vector<double> errors;
};

AssemblyCompare compare_assembly() {
  constexpr double tol = 1e-12;
  AssemblyCompare out;
  auto add = [&](std::string name, double err) {
    out.checks.push_back(bound_check(std::move(name), err, tol));
    out.errors.push_back(err);
  };
  for (std::size_t nx : {1u, 2u}) {
    const auto mesh = build_uniform_mesh(nx);
    const std::string tag = " nx=" + std::to_string(nx);
    const auto n = mesh.node_count();
    add("mass vs quadrature" + tag, max_abs_diff(to_dense(assemble_mass(mesh)), oracle::mass(mesh)));
    add("stiffness vs quadrature" + tag,
        max_abs_diff(to_dense(assemble_stiffness(mesh)), oracle::stiffness(mesh)));
    const auto c = random_vector(n, -2.0, 2.0, 11 + static_cast<unsigned>(nx));
    add("weighted mass vs quadrature" + tag,
        max_abs_diff(to_dense(assemble_weighted_mass(mesh, c)), oracle::weighted_mass(mesh, c)));
    const auto phi = random_vector(n, -1.5, 1.5, 23 + static_cast<unsigned>(nx));
    const auto cubic = assemble_nonlinear_cubic(mesh, phi);
    add("cubic load vs quadrature" + tag, max_abs_diff(cubic.load, oracle::cubic_load(mesh, phi)));
    add("cubic jacobian vs quadrature" + tag,
        max_abs_diff(to_dense(cubic.jacobian), oracle::cubic_jacobian(mesh, phi)));
  }
  return out;
}

}  // namespace

Check assembly_oracles() {
  const auto cmp = compare_assembly();
  return worst_of("assembly matches exact-integration oracles on nx<=2", cmp.checks, cmp.errors,
                  1e-12);
}

SuiteReport assembly_suite() {
  SuiteReport r{"assembly", {}};
  auto cmp = compare_assembly();
  r.checks = std::move(cmp.checks);

  const auto mesh2 = build_uniform_mesh(2);
  const auto k = assemble_stiffness(mesh2);
  const std::vector<double> ones(mesh2.node_count(), 1.0);
  r.checks.push_back(bound_check("K 1 = 0", norm_inf(multiply(k, ones)), 1e-12));
  const auto x = interpolate([](double xx, double) { return xx; }, mesh2, FieldTag::phi);
  r.checks.push_back(bound_check("x'Kx = 1", std::abs(dot(x.values, multiply(k, x.values)) - 1.0),
                                 1e-12));
  const auto m = assemble_mass(mesh2);
  r.checks.push_back(bound_check("1'M1 = 1", std::abs(dot(ones, multiply(m, ones)) - 1.0), 1e-12));

  const auto mesh64 = build_uniform_mesh(64);
  const auto half = interpolate([](double xx, double) { return 2.0 * xx - 1.0; }, mesh64, FieldTag::phi);
  r.checks.push_back(bound_check("measure of {2x-1 > 0} = 1/2",
                                 std::abs(tumour_measure(half, mesh64, 0.0) - 0.5), 1e-12));
  double area = 0.0;
  for (double a : mesh64.areas) area += a;
  r.checks.push_back(bound_check("sum of areas = 1", std::abs(area - 1.0), 1e-12));
  return r;
}

// ---- energy ----------------------------------------------------------------

Check gradient_stability() {
  constexpr double tol = 1e-9;
  const auto cfg = paper_config();
  const FemOperators ops(build_uniform_mesh(16));
  const auto phi0 = random_vector(ops.mesh.node_count(), -1.0, 1.0, 2024);
  const std::vector<double> zero(ops.mesh.node_count(), 0.0);
  double worst = -1.0;
  std::size_t halved = 0;
  std::string where;
  for (double dt : {1e-3, 1e-2, 1e-1}) {
    ChSolver solver(ops, ChParams{cfg.m_mob, cfg.eps, dt}, ch_controls(cfg));
    ChState s;
    s.phi = {FieldTag::phi, phi0};
    s.mu = initial_mu(s.phi, cfg.eps, ops, sigma_controls(cfg));
    double e = energy(s.phi, ops, cfg.eps);
    for (int n = 0; n < 100; ++n) {
      s = solver.step(s, zero);
      halved += s.halved ? 1 : 0;
      const double e_next = energy(s.phi, ops, cfg.eps);
      const double inc = relative_increase(e, e_next);
      if (inc > worst) {
        worst = inc;
        where = "dt=" + num(dt) + " step " + std::to_string(n + 1);
      }
      e = e_next;
    }
  }
  Check c{"discrete energy nonincreasing, zero source, random phi0, nx=16", worst <= tol, "", ""};
  c.measured = "largest relative increase " + num(worst) + " at " + where;
  if (halved > 0) c.measured += ", " + std::to_string(halved) + " halved steps";
  c.tolerance = "<= " + num(tol) + " per step";
  return c;
}

SuiteReport energy_suite() {
  SuiteReport r{"energy", {}};
  const double eps = paper_config().eps;
  const FemOperators ops2(build_uniform_mesh(2));
  const auto n2 = ops2.mesh.node_count();
  r.checks.push_back(
      bound_check("E(phi = 1) = 0", std::abs(energy({FieldTag::phi, std::vector<double>(n2, 1.0)}, ops2, eps)),
                  1e-12));
  r.checks.push_back(bound_check(
      "E(phi = 0) = 1/(4 eps)",
      std::abs(energy({FieldTag::phi, std::vector<double>(n2, 0.0)}, ops2, eps) - 0.25 / eps), 1e-12));
  const auto phi = random_vector(n2, -1.5, 1.5, 77);
  const double e_lib = energy({FieldTag::phi, phi}, ops2, eps);
  const double e_ref = oracle::ch_energy(ops2.mesh, phi, eps);
  r.checks.push_back(bound_check("E(random phi, nx=2) vs quadrature, relative",
                                 std::abs(e_lib - e_ref) / std::abs(e_ref), 1e-12));

  // One zero-source step conserves mass; a uniform state is stationary.
  const auto cfg = paper_config();
  const FemOperators ops16(build_uniform_mesh(16));
  const auto n16 = ops16.mesh.node_count();
  ChState s;
  s.phi = {FieldTag::phi, random_vector(n16, -1.0, 1.0, 5)};
  s.mu = initial_mu(s.phi, cfg.eps, ops16, sigma_controls(cfg));
  const auto next = ch_step(s, std::vector<double>(n16, 0.0), cfg.m_mob, cfg.eps, cfg.dt, ops16,
                            ch_controls(cfg));
  const std::vector<double> ones(n16, 1.0);
  const auto m1 = multiply(ops16.mass, ones);
  r.checks.push_back(bound_check("zero source step conserves 1'M phi",
                                 std::abs(dot(m1, next.phi.values) - dot(m1, s.phi.values)), 1e-10));
  ChState u;
  const double c0 = 0.3;
  u.phi = {FieldTag::phi, std::vector<double>(n16, c0)};
  u.mu = {FieldTag::mu, std::vector<double>(n16, (c0 * c0 * c0 - c0) / cfg.eps)};
  const auto un = ch_step(u, std::vector<double>(n16, 0.0), cfg.m_mob, cfg.eps, cfg.dt, ops16,
                          ch_controls(cfg));
  double dev = 0.0;
  for (std::size_t i = 0; i < n16; ++i) {
    dev = std::max(dev, std::abs(un.phi.values[i] - c0));
    dev = std::max(dev, cfg.eps * std::abs(un.mu.values[i] - u.mu.values[i]));
  }
  r.checks.push_back(bound_check("uniform state is stationary", dev, 1e-10));
  r.checks.push_back(gradient_stability());
  return r;
}

// ---- convergence -----------------------------------------------------------

namespace {

struct HeatError {
  std::size_t nx;
  double error;
};

std::vector<HeatError> heat_errors() {
  constexpr double d = 1.0, t_end = 0.1;
  const auto exact = [](double x, double y, double t) {
    return std::cos(std::numbers::pi * x) * std::cos(std::numbers::pi * y) *
           std::exp(-2.0 * std::numbers::pi * std::numbers::pi * d * t);
  };
  SolverControls ctl;
  ctl.rel_tol = 1e-13;
  ctl.max_iter = 10000;
  ctl.preconditioner = Preconditioner::diagonal;
  std::vector<HeatError> out;
  for (std::size_t nx : {8u, 16u, 32u}) {
    // dt = 0.1 h^2 keeps the backward-Euler error on the h^2 scale.
    const std::size_t steps = nx * nx;
    const double dt = t_end / static_cast<double>(steps);
    const FemOperators ops(build_uniform_mesh(nx));
    const SigmaSolver heat(ops, d, 0.0, 0.0, dt, ctl);
    const std::vector<double> none(ops.mesh.node_count(), 0.0);
    auto u = interpolate([&](double x, double y) { return exact(x, y, 0.0); }, ops.mesh,
                         FieldTag::sigma);
    for (std::size_t n = 0; n < steps; ++n) u = heat.step(u, none);
    out.push_back({nx, oracle::l2_error(ops.mesh, u.values,
                                        [&](double x, double y) { return exact(x, y, t_end); })});
  }
  return out;
}

}  // namespace

Check heat_convergence() {
  const auto errs = heat_errors();
  Check c{"heat sub-problem L2 error ratio per mesh doubling", true, "", ">= 3.5"};
  std::string m = "errors";
  for (const auto& e : errs) m += " nx=" + std::to_string(e.nx) + ":" + num(e.error);
  m += "; ratios";
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i - 1].error / errs[i].error;
    c.passed = c.passed && ratio >= 3.5;
    m += " " + num(ratio);
  }
  c.measured = m;
  return c;
}

SuiteReport convergence_suite() { return {"convergence", {heat_convergence()}}; }

// ---- runs ------------------------------------------------------------------

SimulationConfig desk_config() {
  auto cfg = paper_config();
  cfg.nx = 64;
  return cfg;
}

SimulationConfig ic1_config() {
  auto cfg = desk_config();
  cfg.alpha = 0.0;
  cfg.ic_f.y_bar0 = 1.7;
  cfg.t_end = 4.0;
  return cfg;
}

SimulationConfig ic2_config() {
  auto cfg = ic1_config();
  cfg.ic_f.y_bar0 = 1.0;
  return cfg;
}

RunTrace trace_run(const std::string& label, const SimulationConfig& cfg) {
  RunTrace t;
  t.label = label;
  t.cfg = cfg;
  const auto start = std::chrono::steady_clock::now();
  try {
    Simulation sim(cfg);
    const auto& mesh = sim.operators().mesh;
    const std::size_t c = sim.probe_nodes()[2];
    const auto& h = sim.functions().truncation;
    const auto s0 = sim.initial_state();
    t.f_min = *std::min_element(s0.f.values.begin(), s0.f.values.end());
    t.sigma_min = t.sigma_max = s0.sigma.values.front();
    RunHooks hooks;
    hooks.on_record = [&](const SimulationState& s, const ObservableRecord& r,
                          const StepDiagnostics* d) {
      t.records.push_back(r);
      t.h_probe_c.push_back(h(s.ch.phi.values[c]));
      t.measure_zero.push_back(tumour_measure(s.ch.phi, mesh, 0.0));
      t.sigma_min = std::min(t.sigma_min, r.sigma_min);
      t.sigma_max = std::max(t.sigma_max, r.sigma_max);
      t.max_fmass_err = std::max(t.max_fmass_err, r.fmass_err);
      if (d != nullptr) {
        t.f_min = std::min(t.f_min, d->f_min);
        t.max_balance_defect = std::max(t.max_balance_defect, d->mass_balance_defect);
      }
    };
    run(sim, s0, cfg.step_count(), hooks);
    t.ok = true;
  } catch (const std::exception& e) {
    t.message = e.what();
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

namespace {

std::string run_note(const RunTrace& t) {
  return t.ok ? "" : " [" + t.label + " aborted: " + t.message + "]";
}

std::size_t record_at(const RunTrace& t, double time) {
  const auto k = static_cast<std::size_t>(std::llround(time / t.cfg.dt));
  return std::min(k, t.records.size() - 1);
}

}  // namespace

Check fmass_conservation(const RunTrace& run) {
  constexpr double tol = 1e-10;
  Check c = bound_check("per-node f mass within 1e-10 of 1 at every step, nx=" +
                            std::to_string(run.cfg.nx),
                        run.max_fmass_err, tol);
  c.passed = c.passed && run.ok;
  c.measured = "max |sum w f - 1| = " + c.measured + " over " + std::to_string(run.records.size()) +
               " records" + run_note(run);
  return c;
}

Check f_nonnegativity(const std::vector<const RunTrace*>& runs) {
  Check c{"f >= 0 at every node, phenotype and step", true, "", ">= 0 exactly"};
  double worst = std::numeric_limits<double>::infinity();
  std::string notes;
  for (const auto* r : runs) {
    worst = std::min(worst, r->f_min);
    c.passed = c.passed && r->ok;
    notes += run_note(*r);
  }
  c.passed = c.passed && worst >= 0.0;
  const auto fns = build_model_functions(runs.front()->cfg.functions, runs.front()->cfg.y_min,
                                         runs.front()->cfg.y_max);
  c.measured = "min f = " + num(worst) + " over " + std::to_string(runs.size()) +
               " runs; step bound " + num(nonnegativity_bound(runs.front()->cfg, fns)) + notes;
  return c;
}

Check ch_mass_balance(const RunTrace& run) {
  Check c = bound_check("1'M(phi_new - phi_old) = dt 1'M g every step, nx=" +
                            std::to_string(run.cfg.nx),
                        run.max_balance_defect, 1e-10);
  c.passed = c.passed && run.ok;
  c.measured = "max defect " + c.measured + run_note(run);
  return c;
}

Check nutrient_bounds(const RunTrace& run) {
  constexpr double tol = 1e-8;
  const double hi = run.cfg.sigma_b;
  Check c{"sigma in [0, sigma_B] nodewise every step, nx=" + std::to_string(run.cfg.nx),
          run.ok && run.sigma_min >= -tol && run.sigma_max <= hi + tol, "", "margin " + num(tol)};
  c.measured = "sigma range [" + num(run.sigma_min, 12) + ", " + num(run.sigma_max, 12) +
               "]" + run_note(run);
  return c;
}

Check fittest_phenotype(const std::vector<const RunTrace*>& theta_runs) {
  Check c{"centre-probe mean within 0.05 of y=1 at T and variance increasing in theta", true, "",
          "|mean - 1| < 0.05, strictly increasing variance"};
  std::string m;
  double prev_var = -1.0;
  for (const auto* r : theta_runs) {
    const auto& last = r->records.back().probes[0];
    const bool at_end = r->ok && r->records.back().time >= r->cfg.t_end - 0.5 * r->cfg.dt;
    c.passed = c.passed && at_end && std::abs(last.mean - 1.0) < 0.05 && last.variance > prev_var;
    prev_var = last.variance;
    m += "theta=" + num(r->cfg.theta) + ": mean " + num(last.mean) + " var " + num(last.variance) +
         "; ";
    m += run_note(*r);
  }
  c.measured = m;
  return c;
}

Check ic_ordering(const RunTrace& ic0, const RunTrace& ic1, const RunTrace& ic2, double t_cmp) {
  Check c{"tumour measure IC2 > IC0 > IC1 at t=" + num(t_cmp), false, "",
          "margins > 2x threshold noise, same order at thresholds -0.9 and 0"};
  const auto k0 = record_at(ic0, t_cmp), k1 = record_at(ic1, t_cmp), k2 = record_at(ic2, t_cmp);
  const bool reached = ic0.records[k0].time >= t_cmp - 1e-9 &&
                       ic1.records[k1].time >= t_cmp - 1e-9 && ic2.records[k2].time >= t_cmp - 1e-9;
  const double a0 = ic0.records[k0].tumour_measure, a1 = ic1.records[k1].tumour_measure,
               a2 = ic2.records[k2].tumour_measure;
  const double z0 = ic0.measure_zero[k0], z1 = ic1.measure_zero[k1], z2 = ic2.measure_zero[k2];
  const double d20 = a2 - a0, d01 = a0 - a1;
  const double noise20 = std::abs(d20 - (z2 - z0)), noise01 = std::abs(d01 - (z0 - z1));
  c.passed = reached && d20 > 2.0 * noise20 && d01 > 2.0 * noise01 && z2 > z0 && z0 > z1;
  c.measured = "thr -0.9: IC2 " + num(a2) + " IC0 " + num(a0) + " IC1 " + num(a1) +
               "; thr 0: IC2 " + num(z2) + " IC0 " + num(z0) + " IC1 " + num(z1) +
               "; margins " + num(d20) + "/" + num(d01) + " vs noise " + num(noise20) + "/" +
               num(noise01) + run_note(ic0) + run_note(ic1) + run_note(ic2);
  return c;
}

Check onset_at_probe_c(const RunTrace& run) {
  constexpr double tol = 1e-12;
  Check c{"probe C mean frozen while h(phi)=0 there, then moves toward 1", false, "",
          "drift < " + num(tol) + " before onset"};
  const auto& rec = run.records;
  const double m0 = rec.front().probes[2].mean;
  // Record k holds f after k updates, the last of which used h at level k-1.
  std::size_t onset = run.h_probe_c.size();
  for (std::size_t j = 0; j < run.h_probe_c.size(); ++j) {
    if (run.h_probe_c[j] > 0.0) {
      onset = j;
      break;
    }
  }
  double frozen_drift = 0.0;
  for (std::size_t k = 0; k <= std::min(onset, rec.size() - 1); ++k) {
    frozen_drift = std::max(frozen_drift, std::abs(rec[k].probes[2].mean - m0));
  }
  std::size_t first_move = rec.size();
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (std::abs(rec[k].probes[2].mean - m0) >= tol) {
      first_move = k;
      break;
    }
  }
  const double toward = 1.0 - m0;
  const bool first_toward =
      first_move < rec.size() && (rec[first_move].probes[2].mean - m0) * toward > 0.0;
  const double m_end = rec.back().probes[2].mean;
  c.passed = run.ok && frozen_drift < tol && first_move > onset && first_toward &&
             std::abs(m_end - 1.0) < std::abs(m0 - 1.0);
  const auto time_of = [&](std::size_t k) {
    return k < rec.size() ? num(rec[k].time) : std::string("never");
  };
  c.measured = "h(phi_C) > 0 from t=" + time_of(onset) + ", drift before " + num(frozen_drift) +
               ", first move at t=" + time_of(first_move) + (first_toward ? " toward 1" : " away from 1") +
               ", mean " + num(m0) + " -> " + num(m_end) + run_note(run);
  return c;
}

Check continuous_dependence() {
  auto cfg = paper_config();
  cfg.nx = 32;
  cfg.t_end = 1.0;
  const auto final_fields = [&](double delta) {
    Simulation sim(cfg);
    auto s0 = sim.initial_state();
    for (auto& v : s0.sigma.values) v += delta;
    auto res = run(sim, std::move(s0), cfg.step_count());
    return std::pair{res.final_state.ch.phi.values, res.final_state.sigma.values};
  };
  Check c{"final (phi, sigma) max-norm change linear in sigma0 perturbation, nx=32, T=1", false, "",
          "decade ratios within [10/3, 30]"};
  try {
    const auto base = final_fields(0.0);
    std::vector<double> diffs;
    for (double delta : {1e-3, 1e-4, 1e-5}) {
      const auto p = final_fields(delta);
      diffs.push_back(std::max(max_abs_diff(p.first, base.first), max_abs_diff(p.second, base.second)));
    }
    const double r1 = diffs[0] / diffs[1], r2 = diffs[1] / diffs[2];
    const auto in_band = [](double r) { return r >= 10.0 / 3.0 && r <= 30.0; };
    c.passed = in_band(r1) && in_band(r2);
    c.measured = "differences " + num(diffs[0]) + ", " + num(diffs[1]) + ", " + num(diffs[2]) +
                 "; ratios " + num(r1) + ", " + num(r2);
  } catch (const std::exception& e) {
    c.measured = std::string("run failed: ") + e.what();
  }
  return c;
}

// ---- suites built from runs -----------------------------------------------

SuiteReport conservation_suite(std::size_t nx, std::size_t steps) {
  SuiteReport r{"conservation", {}};
  auto cfg = paper_config();
  cfg.nx = nx;
  cfg.t_end = static_cast<double>(steps) * cfg.dt;
  const auto run = trace_run("conservation", cfg);
  r.checks.push_back(fmass_conservation(run));
  r.checks.push_back(ch_mass_balance(run));
  r.checks.push_back(f_nonnegativity({&run}));
  r.checks.push_back(nutrient_bounds(run));

  // Initial nutrient against the radial two-region reduction.
  Simulation sim(cfg);
  const auto s0 = sim.initial_state();
  const auto& mesh = sim.operators().mesh;
  const std::size_t lowest = static_cast<std::size_t>(
      std::min_element(s0.sigma.values.begin(), s0.sigma.values.end()) - s0.sigma.values.begin());
  const auto p = mesh.nodes[lowest];
  const double r_in = std::sqrt(cfg.ic_phi.disk_radius_sq);
  const auto radial = oracle::radial_sigma(cfg.d_sigma, cfg.b, cfg.sigma_b, 1.0, r_in, 0.5, 2000);
  const double dip_fem = cfg.sigma_b - s0.sigma.values[lowest];
  const double dip_ref = cfg.sigma_b - radial.s.front();
  const bool inside = std::hypot(p.x - cfg.ic_phi.disk_center.x, p.y - cfg.ic_phi.disk_center.y) < r_in;
  const double rel = std::abs(dip_fem - dip_ref) / dip_ref;
  r.checks.push_back({"sigma0 in [0,1], minimum inside the disk, depth vs radial reduction",
                      inside && rel <= 0.25 &&
                          *std::max_element(s0.sigma.values.begin(), s0.sigma.values.end()) <=
                              cfg.sigma_b + 1e-12 &&
                          s0.sigma.values[lowest] >= 0.0,
                      "depth " + num(dip_fem) + " vs radial " + num(dip_ref) + " (rel " + num(rel) + ")",
                      "rel <= 0.25"});
  return r;
}

SuiteReport scenario_suite() {
  SuiteReport r{"scenario", {}};
  std::vector<RunTrace> theta_runs;
  for (double theta : {0.3, 0.5, 0.7}) {
    auto cfg = desk_config();
    cfg.theta = theta;
    theta_runs.push_back(trace_run("theta=" + num(theta), cfg));
  }
  const auto ic1 = trace_run("IC1", ic1_config());
  const auto ic2 = trace_run("IC2", ic2_config());
  const RunTrace& ic0 = theta_runs[1];
  r.checks.push_back(fittest_phenotype({&theta_runs[0], &theta_runs[1], &theta_runs[2]}));
  r.checks.push_back(ic_ordering(ic0, ic1, ic2));
  r.checks.push_back(onset_at_probe_c(ic0));
  r.checks.push_back(nutrient_bounds(ic0));
  r.checks.push_back(f_nonnegativity({&theta_runs[0], &theta_runs[1], &theta_runs[2]}));
  return r;
}

std::optional<SuiteReport> run_suite(std::string_view name) {
  if (name == "assembly") return assembly_suite();
  if (name == "conservation") return conservation_suite();
  if (name == "energy") return energy_suite();
  if (name == "convergence") return convergence_suite();
  if (name == "scenario") return scenario_suite();
  return std::nullopt;
}

}  // namespace phenopf::validation
