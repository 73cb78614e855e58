#include "phenopf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phenopf {

namespace {

// Fraction of a triangle where the linear interpolant of v exceeds t.
double fraction_above(const double v[3], double t) {
  int above = 0;
  for (int k = 0; k < 3; ++k) above += v[k] > t ? 1 : 0;
  if (above == 0) return 0.0;
  if (above == 3) return 1.0;
  // The lone vertex on one side cuts off a similar corner triangle.
  const bool lone_above = above == 1;
  int a = 0;
  for (int k = 0; k < 3; ++k) {
    if ((v[k] > t) == lone_above) a = k;
  }
  const int b = (a + 1) % 3;
  const int c = (a + 2) % 3;
  const double corner = ((v[a] - t) / (v[a] - v[b])) * ((v[a] - t) / (v[a] - v[c]));
  return lone_above ? corner : 1.0 - corner;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

double tumour_measure(const ScalarField& phi, const Mesh& mesh, double threshold) {
  if (phi.values.size() != mesh.node_count()) {
    throw std::invalid_argument("tumour_measure: field length does not match mesh");
  }
  double area = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const double v[3] = {phi.values[t[0]], phi.values[t[1]], phi.values[t[2]]};
    area += mesh.areas[e] * fraction_above(v, threshold);
  }
  return area;
}

double energy(const ScalarField& phi, const FemOperators& ops, double eps) {
  const auto k_phi = multiply(ops.stiffness, phi.values);
  const double gradient = 0.5 * eps * dot(phi.values, k_phi);
  const double bulk = integrate_pointwise(ops.mesh, phi.values, [](double r) {
    const double s = r * r - 1.0;
    return 0.25 * s * s;
  });
  return gradient + bulk / eps;
}

double diagonal_asymmetry(const ScalarField& phi, const Mesh& mesh) {
  const std::size_t n = mesh.nx;
  double worst = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double v = phi.values[mesh.node_index(i, j)];
      worst = std::max(worst, std::abs(v - phi.values[mesh.node_index(j, i)]));
      worst = std::max(worst, std::abs(v - phi.values[mesh.node_index(n - j, n - i)]));
    }
  }
  return worst;
}

Simulation::Simulation(SimulationConfig cfg)
    : Simulation(cfg, build_model_functions(cfg.functions, cfg.y_min, cfg.y_max)) {}

Simulation::Simulation(SimulationConfig cfg, ModelFunctions fns)
    : cfg_(std::move(cfg)),
      fns_(std::move(fns)),
      ops_(std::make_shared<FemOperators>(build_uniform_mesh(cfg_.nx))),
      grid_(std::make_shared<PhenotypeGrid>(build_grid(cfg_.y_min, cfg_.y_max, cfg_.n_y))),
      kernel_(build_kernel_matrix(*grid_, fns_.kernel)) {
  fitness_.resize(grid_->size());
  for (std::size_t i = 0; i < fitness_.size(); ++i) fitness_[i] = fns_.fitness(grid_->y_values[i]);
  const auto& mesh = ops_->mesh;
  probes_ = {mesh.nearest_node(cfg_.output.probe_a), mesh.nearest_node(cfg_.output.probe_b),
             mesh.nearest_node(cfg_.output.probe_c)};
  ch_ = std::make_unique<ChSolver>(*ops_, ChParams{cfg_.m_mob, cfg_.eps, cfg_.dt},
                                   ch_controls(cfg_));
  sigma_ = std::make_unique<SigmaSolver>(*ops_, cfg_.d_sigma, cfg_.b, cfg_.sigma_b, cfg_.dt,
                                         sigma_controls(cfg_));
}

SimulationState Simulation::initial_state() const {
  const auto& mesh = ops_->mesh;
  const auto c = cfg_.ic_phi.disk_center;
  const double r2 = cfg_.ic_phi.disk_radius_sq;
  SimulationState s;
  s.ch.phi = interpolate(
      [c, r2](double x, double y) {
        return (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r2 ? 1.0 : -1.0;
      },
      mesh, FieldTag::phi);
  s.f = uniform_field(grid_, mesh.node_count(),
                      initial_distribution(*grid_, cfg_.ic_f.a, cfg_.ic_f.y_bar0));
  s.sigma = sigma_->steady(consumption_coefficient(s.ch.phi, s.f, fns_));
  s.ch.mu = initial_mu(s.ch.phi, cfg_.eps, *ops_, sigma_controls(cfg_));
  return s;
}

std::vector<double> Simulation::source(const SimulationState& state) const {
  const auto p_bar = nodal_moment(state.f, fns_.p_rate);
  const auto q_bar = nodal_moment(state.f, fns_.q_rate);
  std::vector<double> g(p_bar.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = fns_.truncation(state.ch.phi.values[i]) * (state.sigma.values[i] * p_bar[i] - q_bar[i]);
  }
  return g;
}

SimulationState Simulation::advance(const SimulationState& state) {
  const std::size_t step = state.step + 1;
  auto fail = [step](const std::string& what) -> SolverError {
    return SolverError("step " + std::to_string(step) + ": " + what);
  };
  const std::size_t n = ops_->mesh.node_count();

  // Moments and couplings from level n; the three updates below all read
  // the old state only.
  const auto g = source(state);
  const auto k_bar = nodal_moment(state.f, fns_.k_rate);
  std::vector<double> h(n), consumption(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = fns_.truncation(state.ch.phi.values[i]);
    consumption[i] = h[i] * k_bar[i];
  }

  SimulationState next;
  next.step = step;
  next.time = static_cast<double>(step) * cfg_.dt;
  try {
    next.ch = ch_->step(state.ch, g);
    next.f = phenotype_step(state.f, h, fitness_, kernel_, cfg_.alpha, cfg_.theta, cfg_.dt);
    next.sigma = sigma_->step(state.sigma, consumption);
  } catch (const SolverError& e) {
    throw fail(e.what());
  } catch (const StepBoundError& e) {
    throw fail(e.what());
  }

  diag_ = {};
  diag_.step = step;
  diag_.newton_iterations = next.ch.report.iterations;
  diag_.linear_iterations = next.ch.report.inner_iterations;
  diag_.sigma_iterations = sigma_->last_report().iterations;
  diag_.halved = next.ch.halved;
  std::vector<double> dphi(n);
  for (std::size_t i = 0; i < n; ++i) dphi[i] = next.ch.phi.values[i] - state.ch.phi.values[i];
  diag_.source_mass = cfg_.dt * dot(ops_->lumped_mass, g);
  diag_.mass_balance_defect = std::abs(dot(ops_->lumped_mass, dphi) - diag_.source_mass);
  diag_.fmass_err = max_mass_error(next.f);
  diag_.f_min = min_of(next.f.values);
  diag_.sigma_min = min_of(next.sigma.values);
  diag_.sigma_max = max_of(next.sigma.values);

  std::ostringstream msg;
  if (!(diag_.fmass_err <= kInvariantTol)) {
    msg << "step " << step << ": phenotype mass error " << diag_.fmass_err << " exceeds "
        << kInvariantTol;
    throw InvariantViolation(msg.str());
  }
  if (!(diag_.mass_balance_defect <= kInvariantTol)) {
    msg << "step " << step << ": phase mass balance defect " << diag_.mass_balance_defect
        << " exceeds " << kInvariantTol;
    throw InvariantViolation(msg.str());
  }
  return next;
}

ObservableRecord Simulation::observe(const SimulationState& state) const {
  ObservableRecord r;
  r.time = state.time;
  r.tumour_measure = tumour_measure(state.ch.phi, ops_->mesh, cfg_.tumour_threshold);
  r.phi_mass = dot(ops_->lumped_mass, state.ch.phi.values);
  r.energy = energy(state.ch.phi, *ops_, cfg_.eps);
  r.sigma_min = min_of(state.sigma.values);
  r.sigma_max = max_of(state.sigma.values);
  for (std::size_t k = 0; k < 3; ++k) r.probes[k] = mean_and_variance(state.f.node(probes_[k]), *grid_);
  r.fmass_err = max_mass_error(state.f);
  const auto ifw = nodal_moment(state.f, fns_.w_mob);
  r.ifw_min = min_of(ifw);
  r.ifw_max = max_of(ifw);
  return r;
}

SimulationState build_initial_state(const SimulationConfig& cfg, const ModelFunctions& fns,
                                    const Mesh& mesh) {
  SimulationConfig c = cfg;
  c.nx = mesh.nx;
  return Simulation(c, fns).initial_state();
}

RunResult run(Simulation& sim, SimulationState initial, std::size_t steps, const RunHooks& hooks) {
  RunResult out;
  out.records.reserve(steps + 1);
  out.diagnostics.reserve(steps);
  out.records.push_back(sim.observe(initial));
  if (hooks.on_record) hooks.on_record(initial, out.records.back(), nullptr);
  SimulationState state = std::move(initial);
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      state = sim.advance(state);
    } catch (const SolverError& e) {
      if (hooks.on_abort) hooks.on_abort(state, e.what());
      throw RunAborted(e.what(), state.step);
    }
    out.diagnostics.push_back(sim.last_diagnostics());
    out.records.push_back(sim.observe(state));
    if (hooks.on_record) hooks.on_record(state, out.records.back(), &out.diagnostics.back());
  }
  out.final_state = std::move(state);
  return out;
}

RunResult run(const SimulationConfig& cfg, const RunHooks& hooks) {
  Simulation sim(cfg);
  return run(sim, sim.initial_state(), cfg.step_count(), hooks);
}

}  // namespace phenopf
