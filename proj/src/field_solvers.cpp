#include "phenopf/field_solvers.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace phenopf {

ChControls ch_controls(const SimulationConfig& cfg) {
  ChControls c;
  c.newton = cfg.newton_controls();
  c.linear = cfg.linear_controls();
  c.linear.interleave = 2;
  return c;
}

SolverControls sigma_controls(const SimulationConfig& cfg) {
  SolverControls c;
  c.rel_tol = cfg.linear_tol;
  c.abs_tol = 1e-300;
  c.max_iter = cfg.linear_max_iter;
  c.preconditioner = Preconditioner::diagonal;
  return c;
}

ChSolver::ChSolver(const FemOperators& ops, ChParams params, ChControls controls)
    : ops_(&ops), params_(params), controls_(controls) {
  const auto& pat = ops.pattern;
  const std::size_t n = pat.n_nodes();
  const auto po = pat.row_offsets();
  const auto pc = pat.col_indices();
  const auto mv = pat.values_of(ops.mass);
  const auto kv = pat.values_of(ops.stiffness);
  const double eps = params_.eps;

  base_.n_rows = base_.n_cols = 2 * n;
  base_.row_offsets.assign(2 * n + 1, 0);
  for (std::size_t r = 0; r < 2 * n; ++r) {
    const std::size_t i = r % n;
    base_.row_offsets[r + 1] = base_.row_offsets[r] + 2 * (po[i + 1] - po[i]);
  }
  base_.col_indices.reserve(base_.row_offsets.back());
  base_.values.reserve(base_.row_offsets.back());
  cubic_slot_.resize(pat.nnz());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = po[i]; p < po[i + 1]; ++p) {
      base_.col_indices.push_back(pc[p]);
      base_.values.push_back(mv[p] / params_.dt);
    }
    for (std::size_t p = po[i]; p < po[i + 1]; ++p) {
      base_.col_indices.push_back(n + pc[p]);
      base_.values.push_back(params_.m_mob * kv[p]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = po[i]; p < po[i + 1]; ++p) {
      cubic_slot_[p] = base_.col_indices.size();
      base_.col_indices.push_back(pc[p]);
      base_.values.push_back(-eps * kv[p]);
    }
    for (std::size_t p = po[i]; p < po[i + 1]; ++p) {
      base_.col_indices.push_back(n + pc[p]);
      base_.values.push_back(mv[p]);
    }
  }
}

std::vector<double> ChSolver::residual(std::span<const double> phi_n,
                                       std::span<const double> source,
                                       std::span<const double> x) const {
  const std::size_t n = ops_->mesh.node_count();
  if (x.size() != 2 * n || phi_n.size() != n || source.size() != n) {
    throw std::invalid_argument("ChSolver::residual: size mismatch");
  }
  const auto phi = x.subspan(0, n);
  const auto mu = x.subspan(n, n);
  std::vector<double> dphi(n);
  for (std::size_t i = 0; i < n; ++i) dphi[i] = (phi[i] - phi_n[i]) / params_.dt - source[i];
  const auto m_dphi = multiply(ops_->mass, dphi);
  const auto k_mu = multiply(ops_->stiffness, mu);
  const auto m_mu = multiply(ops_->mass, mu);
  const auto k_phi = multiply(ops_->stiffness, phi);
  const auto m_phin = multiply(ops_->mass, phi_n);
  const auto cubic = assemble_cubic_load(ops_->mesh, phi);
  const double eps = params_.eps;
  std::vector<double> r(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = m_dphi[i] + params_.m_mob * k_mu[i];
    r[n + i] = m_mu[i] - eps * k_phi[i] - (cubic[i] - m_phin[i]) / eps;
  }
  return r;
}

SparseMatrix ChSolver::jacobian(std::span<const double> x) const {
  const std::size_t n = ops_->mesh.node_count();
  const auto j3 = weighted_mass_values(ops_->pattern, ops_->mesh, x.subspan(0, n),
                                       [](double p) { return 3.0 * p * p; });
  SparseMatrix jac = base_;
  const double inv_eps = 1.0 / params_.eps;
  for (std::size_t p = 0; p < j3.size(); ++p) jac.values[cubic_slot_[p]] -= inv_eps * j3[p];
  return jac;
}

ChState ChSolver::solve(const ChState& state, std::span<const double> source) {
  const std::size_t n = ops_->mesh.node_count();
  std::vector<double> x0(2 * n);
  std::copy(state.phi.values.begin(), state.phi.values.end(), x0.begin());
  std::copy(state.mu.values.begin(), state.mu.values.end(), x0.begin() + static_cast<std::ptrdiff_t>(n));
  const std::vector<double> phi_n = state.phi.values;
  const std::vector<double> g(source.begin(), source.end());

  NewtonOptions opts;
  opts.adaptive_forcing = controls_.adaptive_forcing;
  opts.cache = controls_.reuse_preconditioner ? &cache_ : nullptr;
  const auto result = newton_solve([&](std::span<const double> x) { return residual(phi_n, g, x); },
                                   [&](std::span<const double> x) { return jacobian(x); }, x0,
                                   controls_.newton, controls_.linear, opts);
  if (!result.report.converged) {
    std::ostringstream msg;
    msg << "Cahn-Hilliard Newton did not converge in " << result.report.iterations
        << " iterations (residual " << result.report.residual << ")";
    throw SolverError(msg.str());
  }
  ChState out;
  out.phi.values.assign(result.x.begin(), result.x.begin() + static_cast<std::ptrdiff_t>(n));
  out.mu.values.assign(result.x.begin() + static_cast<std::ptrdiff_t>(n), result.x.end());
  out.step = state.step + 1;
  out.report = result.report;
  return out;
}

ChState ChSolver::step(const ChState& state, std::span<const double> source) {
  try {
    return solve(state, source);
  } catch (const SolverError& first) {
    cache_.invalidate();
    if (!half_) {
      ChParams hp = params_;
      hp.dt *= 0.5;
      half_ = std::make_unique<ChSolver>(*ops_, hp, controls_);
    }
    try {
      const ChState mid = half_->solve(state, source);
      ChState out = half_->solve(mid, source);
      out.step = state.step + 1;
      out.halved = true;
      out.report.iterations += mid.report.iterations;
      out.report.inner_iterations += mid.report.inner_iterations;
      return out;
    } catch (const SolverError& second) {
      throw SolverError(std::string(first.what()) + "; retry with two half steps failed: " +
                        second.what());
    }
  }
}

ChState ch_step(const ChState& state, std::span<const double> source, double m_mob, double eps,
                double dt, const FemOperators& ops, const ChControls& controls) {
  ChSolver solver(ops, {m_mob, eps, dt}, controls);
  return solver.step(state, source);
}

ScalarField initial_mu(const ScalarField& phi, double eps, const FemOperators& ops,
                       const SolverControls& linear) {
  const auto k_phi = multiply(ops.stiffness, phi.values);
  const auto m_phi = multiply(ops.mass, phi.values);
  const auto cubic = assemble_cubic_load(ops.mesh, phi.values);
  std::vector<double> rhs(k_phi.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = eps * k_phi[i] + (cubic[i] - m_phi[i]) / eps;
  SolverControls ctl = linear;
  ctl.preconditioner = Preconditioner::diagonal;
  const auto res = cg_solve(ops.mass, rhs, std::vector<double>(rhs.size(), 0.0), ctl);
  if (!res.report.converged) throw SolverError("initial chemical potential: CG did not converge");
  return {FieldTag::mu, res.x};
}

SigmaSolver::SigmaSolver(const FemOperators& ops, double d_sigma, double b, double sigma_b,
                         double dt, SolverControls controls)
    : ops_(&ops), d_sigma_(d_sigma), b_(b), sigma_b_(sigma_b), dt_(dt), controls_(controls) {
  const auto mv = ops.pattern.values_of(ops.mass);
  const auto kv = ops.pattern.values_of(ops.stiffness);
  transient_values_.resize(mv.size());
  steady_values_.resize(mv.size());
  for (std::size_t p = 0; p < mv.size(); ++p) {
    transient_values_[p] = (1.0 / dt_ + b_) * mv[p] + d_sigma_ * kv[p];
    steady_values_[p] = b_ * mv[p] + d_sigma_ * kv[p];
  }
}

namespace {

SparseMatrix with_consumption(const FemOperators& ops, const std::vector<double>& base,
                              std::span<const double> consumption) {
  if (consumption.size() != ops.mesh.node_count()) {
    throw std::invalid_argument("nutrient solve: coefficient length does not match mesh");
  }
  auto values = weighted_mass_values(ops.pattern, ops.mesh, consumption, [](double c) { return c; });
  for (std::size_t p = 0; p < values.size(); ++p) values[p] += base[p];
  return ops.pattern.with_values(std::move(values));
}

}  // namespace

ScalarField SigmaSolver::step(const ScalarField& sigma_n, std::span<const double> consumption) const {
  const auto a = with_consumption(*ops_, transient_values_, consumption);
  std::vector<double> v(sigma_n.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sigma_n.values[i] / dt_ + b_ * sigma_b_;
  const auto rhs = multiply(ops_->mass, v);
  auto res = cg_solve(a, rhs, sigma_n.values, controls_);
  report_ = res.report;
  if (!res.report.converged) {
    std::ostringstream msg;
    msg << "nutrient CG did not converge in " << res.report.iterations << " iterations (residual "
        << res.report.residual << ")";
    throw SolverError(msg.str());
  }
  return {FieldTag::sigma, std::move(res.x)};
}

ScalarField SigmaSolver::steady(std::span<const double> consumption) const {
  const auto a = with_consumption(*ops_, steady_values_, consumption);
  const std::size_t n = ops_->mesh.node_count();
  const auto rhs = multiply(ops_->mass, std::vector<double>(n, b_ * sigma_b_));
  auto res = cg_solve(a, rhs, std::vector<double>(n, sigma_b_), controls_);
  report_ = res.report;
  if (!res.report.converged) {
    std::ostringstream msg;
    msg << "steady nutrient CG did not converge in " << res.report.iterations
        << " iterations (residual " << res.report.residual << ")";
    throw SolverError(msg.str());
  }
  return {FieldTag::sigma, std::move(res.x)};
}

std::vector<double> consumption_coefficient(const ScalarField& phi, const PhenotypeField& f,
                                            const ModelFunctions& fns) {
  auto c = nodal_moment(f, fns.k_rate);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= fns.truncation(phi.values[i]);
  return c;
}

ScalarField sigma_step(const ScalarField& sigma_n, const ScalarField& phi_n,
                       const PhenotypeField& f_n, const ModelFunctions& fns,
                       const SimulationConfig& cfg, const FemOperators& ops,
                       const SolverControls& controls) {
  const SigmaSolver solver(ops, cfg.d_sigma, cfg.b, cfg.sigma_b, cfg.dt, controls);
  return solver.step(sigma_n, consumption_coefficient(phi_n, f_n, fns));
}

ScalarField sigma_steady_init(const ScalarField& phi0, const PhenotypeField& f0,
                              const ModelFunctions& fns, const SimulationConfig& cfg,
                              const FemOperators& ops, const SolverControls& controls) {
  const SigmaSolver solver(ops, cfg.d_sigma, cfg.b, cfg.sigma_b, cfg.dt, controls);
  return solver.steady(consumption_coefficient(phi0, f0, fns));
}

}  // namespace phenopf
