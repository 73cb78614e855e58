#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial loop
// kept as the reference implementation, and an OpenMP version that the
// library uses. The OpenMP versions are deterministic for any thread count:
// element/row work never races, and reductions sum a fixed set of chunks in
// a fixed order.

#include <cstddef>
#include <span>

namespace phenopf::kernels {

/// CSR view used by the matrix-vector kernels.
struct CsrView {
  std::size_t n_rows = 0;
  std::span<const std::size_t> row_offsets;
  std::span<const std::size_t> col_indices;
  std::span<const double> values;
};

/// Per-node phenotype update inputs. `f` is node-major: node k owns
/// f[k*n_y .. (k+1)*n_y).
struct PhenotypeUpdate {
  std::size_t n_nodes = 0;
  std::size_t n_y = 0;
  std::span<const double> weights;       // quadrature weights, length n_y
  std::span<const double> kernel;        // n_y x n_y row-major, M(dest i, source j)
  std::span<const double> fitness;       // R(y_i), length n_y
  std::span<const double> truncation;    // h(phi) per node
  double alpha = 0.0;
  double theta = 0.0;
  double dt = 0.0;
};

namespace serial {

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
/// out[k] = sum_i g[i] * f[k*n_y + i] for every node k.
void nodal_moments(std::size_t n_nodes, std::size_t n_y, std::span<const double> weighted_g,
                   std::span<const double> f, std::span<double> out);
void phenotype_update(const PhenotypeUpdate& u, std::span<const double> f_in,
                      std::span<double> f_out);

}  // namespace serial

namespace omp {

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void nodal_moments(std::size_t n_nodes, std::size_t n_y, std::span<const double> weighted_g,
                   std::span<const double> f, std::span<double> out);
void phenotype_update(const PhenotypeUpdate& u, std::span<const double> f_in,
                      std::span<double> f_out);

}  // namespace omp

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace phenopf::kernels
