#include "phenopf/kernels.hpp"

#include <array>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phenopf::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

namespace {

// Fixed chunking makes the reduction order independent of the thread count.
constexpr std::size_t kReduceChunks = 64;
constexpr std::size_t kParallelThreshold = 4096;

}  // namespace

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(a.n_rows);
#pragma omp parallel for schedule(static) if (a.n_rows > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      s += a.values[p] * x[a.col_indices[p]];
    }
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::array<double, kReduceChunks> partial{};
  const std::size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(kReduceChunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    partial[static_cast<std::size_t>(c)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void nodal_moments(std::size_t n_nodes, std::size_t n_y, std::span<const double> weighted_g,
                   std::span<const double> f, std::span<double> out) {
  const auto nn = static_cast<std::int64_t>(n_nodes);
#pragma omp parallel for schedule(static) if (n_nodes * n_y > kParallelThreshold)
  for (std::int64_t k = 0; k < nn; ++k) {
    const double* fk = f.data() + static_cast<std::size_t>(k) * n_y;
    double s = 0.0;
    for (std::size_t i = 0; i < n_y; ++i) s += weighted_g[i] * fk[i];
    out[k] = s;
  }
}

void phenotype_update(const PhenotypeUpdate& u, std::span<const double> f_in,
                      std::span<double> f_out) {
  const std::size_t n = u.n_y;
  const auto nn = static_cast<std::int64_t>(u.n_nodes);
  // Same arithmetic, same order as the serial loop: results are bitwise equal.
#pragma omp parallel for schedule(static) if (u.n_nodes * n > kParallelThreshold)
  for (std::int64_t kk = 0; kk < nn; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
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

}  // namespace omp
}  // namespace phenopf::kernels
