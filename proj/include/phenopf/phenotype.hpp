#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "phenopf/config.hpp"
#include "phenopf/mesh.hpp"

namespace phenopf {

/// Uniform phenotype grid with trapezoidal weights.
struct PhenotypeGrid {
  std::vector<double> y_values;
  std::vector<double> weights;
  double dy = 0.0;

  std::size_t size() const { return y_values.size(); }
  double length() const { return y_values.back() - y_values.front(); }
};

/// Throws std::invalid_argument unless y_min < y_max and n_y >= 1.
PhenotypeGrid build_grid(double y_min, double y_max, std::size_t n_y);

/// Discrete mutation kernel. entry(i, j) approximates the density of a move
/// from y_j to y_i; every column satisfies sum_i w_i entry(i, j) = 1.
struct KernelMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major, n x n

  double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

/// Throws std::invalid_argument for negative kernel values or a column
/// that is zero everywhere.
KernelMatrix build_kernel_matrix(const PhenotypeGrid& grid,
                                 const std::function<double(double, double)>& kernel);

/// sum_i w_i g(y_i) f_i
double moment(std::span<const double> f_node, const std::function<double(double)>& g,
              const PhenotypeGrid& grid);

struct PhenotypeStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance (clamped at zero) of a normalized distribution.
PhenotypeStats mean_and_variance(std::span<const double> f_node, const PhenotypeGrid& grid);

/// exp(-a (y - y_bar0)^2), normalized with the grid weights.
std::vector<double> initial_distribution(const PhenotypeGrid& grid, double a, double y_bar0);

/// One distribution per mesh node, stored node-major.
struct PhenotypeField {
  std::shared_ptr<const PhenotypeGrid> grid;
  std::size_t n_nodes = 0;
  std::vector<double> values;

  std::span<const double> node(std::size_t k) const {
    return std::span<const double>(values).subspan(k * grid->size(), grid->size());
  }
  std::span<double> node(std::size_t k) {
    return std::span<double>(values).subspan(k * grid->size(), grid->size());
  }
};

/// The same distribution at every node.
PhenotypeField uniform_field(std::shared_ptr<const PhenotypeGrid> grid, std::size_t n_nodes,
                             std::span<const double> f_node);

/// Per-node moments sum_i w_i g(y_i) f_i.
std::vector<double> nodal_moment(const PhenotypeField& f, const std::function<double(double)>& g);

/// max over nodes of |sum_i w_i f_i - 1|
double max_mass_error(const PhenotypeField& f);

/// Raised when the explicit update would violate its step-size bound.
class StepBoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Explicit nodal selection-mutation update with the truncation evaluated
/// at phi. Throws StepBoundError if dt*alpha*h_max*(theta + max R - min R) >= 1
/// for the current h values.
PhenotypeField phenotype_step(const PhenotypeField& f, const ScalarField& phi,
                              const ModelFunctions& fns, const KernelMatrix& kernel, double alpha,
                              double theta, double dt);

/// Same update from precomputed nodal truncation values and fitness on the grid.
PhenotypeField phenotype_step(const PhenotypeField& f, std::span<const double> truncation,
                              std::span<const double> fitness, const KernelMatrix& kernel,
                              double alpha, double theta, double dt);

}  // namespace phenopf
