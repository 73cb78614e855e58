#include "phenopf/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "phenopf/kernels.hpp"

namespace phenopf {

PhenotypeGrid build_grid(double y_min, double y_max, std::size_t n_y) {
  if (!(y_min < y_max)) throw std::invalid_argument("build_grid: need y_min < y_max");
  if (n_y == 0) throw std::invalid_argument("build_grid: need n_y >= 1");
  PhenotypeGrid g;
  g.dy = (y_max - y_min) / static_cast<double>(n_y);
  g.y_values.resize(n_y + 1);
  g.weights.assign(n_y + 1, g.dy);
  for (std::size_t i = 0; i <= n_y; ++i) {
    g.y_values[i] = i == n_y ? y_max : y_min + static_cast<double>(i) * g.dy;
  }
  g.weights.front() = g.weights.back() = 0.5 * g.dy;
  return g;
}

KernelMatrix build_kernel_matrix(const PhenotypeGrid& grid,
                                 const std::function<double(double, double)>& kernel) {
  const std::size_t n = grid.size();
  KernelMatrix m{n, std::vector<double>(n * n)};
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = kernel(grid.y_values[j], grid.y_values[i]);
      if (!(v >= 0.0)) throw std::invalid_argument("build_kernel_matrix: negative kernel value");
      m.entries[i * n + j] = v;
      norm += grid.weights[i] * v;
    }
    if (!(norm > 0.0)) {
      throw std::invalid_argument("build_kernel_matrix: kernel column " + std::to_string(j) +
                                  " is zero everywhere");
    }
    for (std::size_t i = 0; i < n; ++i) m.entries[i * n + j] /= norm;
  }
  return m;
}

double moment(std::span<const double> f_node, const std::function<double(double)>& g,
              const PhenotypeGrid& grid) {
  if (f_node.size() != grid.size()) throw std::invalid_argument("moment: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f_node.size(); ++i) {
    s += grid.weights[i] * g(grid.y_values[i]) * f_node[i];
  }
  return s;
}

PhenotypeStats mean_and_variance(std::span<const double> f_node, const PhenotypeGrid& grid) {
  const double mean = moment(f_node, [](double y) { return y; }, grid);
  const double second = moment(f_node, [](double y) { return y * y; }, grid);
  return {mean, std::max(0.0, second - mean * mean)};
}

std::vector<double> initial_distribution(const PhenotypeGrid& grid, double a, double y_bar0) {
  if (!(a > 0.0)) throw std::invalid_argument("initial_distribution: need a > 0");
  std::vector<double> f(grid.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = grid.y_values[i] - y_bar0;
    f[i] = std::exp(-a * d * d);
    norm += grid.weights[i] * f[i];
  }
  if (!(norm > 0.0)) throw std::invalid_argument("initial_distribution: underflow");
  for (auto& v : f) v /= norm;
  return f;
}

PhenotypeField uniform_field(std::shared_ptr<const PhenotypeGrid> grid, std::size_t n_nodes,
                             std::span<const double> f_node) {
  if (f_node.size() != grid->size()) throw std::invalid_argument("uniform_field: length mismatch");
  PhenotypeField f{std::move(grid), n_nodes, {}};
  f.values.reserve(n_nodes * f_node.size());
  for (std::size_t k = 0; k < n_nodes; ++k) f.values.insert(f.values.end(), f_node.begin(), f_node.end());
  return f;
}

std::vector<double> nodal_moment(const PhenotypeField& f, const std::function<double(double)>& g) {
  const auto& grid = *f.grid;
  std::vector<double> wg(grid.size());
  for (std::size_t i = 0; i < wg.size(); ++i) wg[i] = grid.weights[i] * g(grid.y_values[i]);
  std::vector<double> out(f.n_nodes);
  kernels::omp::nodal_moments(f.n_nodes, grid.size(), wg, f.values, out);
  return out;
}

double max_mass_error(const PhenotypeField& f) {
  const auto mass = nodal_moment(f, [](double) { return 1.0; });
  double worst = 0.0;
  for (double m : mass) worst = std::max(worst, std::abs(m - 1.0));
  return worst;
}

PhenotypeField phenotype_step(const PhenotypeField& f, std::span<const double> truncation,
                              std::span<const double> fitness, const KernelMatrix& kernel,
                              double alpha, double theta, double dt) {
  const auto& grid = *f.grid;
  if (truncation.size() != f.n_nodes || fitness.size() != grid.size() || kernel.n != grid.size()) {
    throw std::invalid_argument("phenotype_step: size mismatch");
  }
  const auto [r_lo, r_hi] = std::minmax_element(fitness.begin(), fitness.end());
  double h_max = 0.0;
  for (double h : truncation) h_max = std::max(h_max, h);
  const double bound = dt * alpha * h_max * (theta + (*r_hi - *r_lo));
  if (!(bound < 1.0)) {
    std::ostringstream msg;
    msg << "phenotype_step: step bound dt*alpha*h_max*(theta + max R - min R) = " << bound
        << " is not below 1";
    throw StepBoundError(msg.str());
  }
  kernels::PhenotypeUpdate u;
  u.n_nodes = f.n_nodes;
  u.n_y = grid.size();
  u.weights = grid.weights;
  u.kernel = kernel.entries;
  u.fitness = fitness;
  u.truncation = truncation;
  u.alpha = alpha;
  u.theta = theta;
  u.dt = dt;
  PhenotypeField out{f.grid, f.n_nodes, std::vector<double>(f.values.size())};
  kernels::omp::phenotype_update(u, f.values, out.values);
  return out;
}

PhenotypeField phenotype_step(const PhenotypeField& f, const ScalarField& phi,
                              const ModelFunctions& fns, const KernelMatrix& kernel, double alpha,
                              double theta, double dt) {
  if (phi.values.size() != f.n_nodes) throw std::invalid_argument("phenotype_step: size mismatch");
  std::vector<double> h(f.n_nodes);
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = fns.truncation(phi.values[k]);
  std::vector<double> r(f.grid->size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = fns.fitness(f.grid->y_values[i]);
  return phenotype_step(f, h, r, kernel, alpha, theta, dt);
}

}  // namespace phenopf
