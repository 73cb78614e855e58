#include "phenopf/kernels.hpp"

namespace phenopf::kernels::serial {

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    double s = 0.0;
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      s += a.values[p] * x[a.col_indices[p]];
    }
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void nodal_moments(std::size_t n_nodes, std::size_t n_y, std::span<const double> weighted_g,
                   std::span<const double> f, std::span<double> out) {
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double* fk = f.data() + k * n_y;
    double s = 0.0;
    for (std::size_t i = 0; i < n_y; ++i) s += weighted_g[i] * fk[i];
    out[k] = s;
  }
}

void phenotype_update(const PhenotypeUpdate& u, std::span<const double> f_in,
                      std::span<double> f_out) {
  const std::size_t n = u.n_y;
  for (std::size_t k = 0; k < u.n_nodes; ++k) {
    const double* f = f_in.data() + k * n;
    double* g = f_out.data() + k * n;
    const double rate = u.dt * u.alpha * u.truncation[k];
    if (rate == 0.0) {
      for (std::size_t i = 0; i < n; ++i) g[i] = f[i];
      continue;
    }
    double mean_fitness = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean_fitness += u.weights[j] * u.fitness[j] * f[j];
    for (std::size_t i = 0; i < n; ++i) {
      double redistributed = 0.0;
      const double* row = u.kernel.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) redistributed += row[j] * u.weights[j] * f[j];
      g[i] = f[i] + rate * (u.theta * (redistributed - f[i]) +
                            (u.fitness[i] - mean_fitness) * f[i]);
    }
  }
}

}  // namespace phenopf::kernels::serial
