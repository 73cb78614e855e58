// Serial reference loops against their OpenMP versions on problem sizes
// of the desk and reference meshes.

#include <benchmark/benchmark.h>

#include <random>

#include "phenopf/assembly.hpp"
#include "phenopf/config.hpp"
#include "phenopf/kernels.hpp"
#include "phenopf/phenotype.hpp"

using namespace phenopf;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void bm_spmv(benchmark::State& state) {
  const auto a = assemble_stiffness(build_uniform_mesh(static_cast<std::size_t>(state.range(0))));
  const auto x = random_vector(a.n_rows, 1);
  std::vector<double> y(a.n_rows);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::spmv(a.view(), x, y);
    else kernels::serial::spmv(a.view(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

template <bool Parallel>
void bm_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, 2), y = random_vector(n, 3);
  for (auto _ : state) {
    double d = Parallel ? kernels::omp::dot(x, y) : kernels::serial::dot(x, y);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct PhenotypeData {
  PhenotypeGrid grid = build_grid(0.0, 2.0, 17);
  KernelMatrix kernel;
  std::vector<double> f, h, fitness, out;
  std::size_t nodes;

  explicit PhenotypeData(std::size_t nx) : nodes((nx + 1) * (nx + 1)) {
    const auto fns = default_paper_functions();
    kernel = build_kernel_matrix(grid, fns.kernel);
    f = random_vector(nodes * grid.size(), 4);
    h = random_vector(nodes, 5);
    out.resize(f.size());
    for (double y : grid.y_values) fitness.push_back(fns.fitness(y));
  }
  kernels::PhenotypeUpdate update() const {
    return {nodes, grid.size(), grid.weights, kernel.entries, fitness, h, 500.0, 0.5, 1e-3};
  }
};

template <bool Parallel>
void bm_phenotype_update(benchmark::State& state) {
  PhenotypeData d(static_cast<std::size_t>(state.range(0)));
  const auto u = d.update();
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::phenotype_update(u, d.f, d.out);
    else kernels::serial::phenotype_update(u, d.f, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.nodes));
}

template <bool Parallel>
void bm_nodal_moments(benchmark::State& state) {
  PhenotypeData d(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(d.nodes);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::nodal_moments(d.nodes, d.grid.size(), d.grid.weights, d.f, out);
    else kernels::serial::nodal_moments(d.nodes, d.grid.size(), d.grid.weights, d.f, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.nodes));
}

}  // namespace

BENCHMARK(bm_spmv<false>)->Name("spmv/serial")->Arg(64)->Arg(120)->Arg(256);
BENCHMARK(bm_spmv<true>)->Name("spmv/omp")->Arg(64)->Arg(120)->Arg(256);
BENCHMARK(bm_dot<false>)->Name("dot/serial")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_dot<true>)->Name("dot/omp")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_phenotype_update<false>)->Name("phenotype_update/serial")->Arg(64)->Arg(120);
BENCHMARK(bm_phenotype_update<true>)->Name("phenotype_update/omp")->Arg(64)->Arg(120);
BENCHMARK(bm_nodal_moments<false>)->Name("nodal_moments/serial")->Arg(64)->Arg(120);
BENCHMARK(bm_nodal_moments<true>)->Name("nodal_moments/omp")->Arg(64)->Arg(120);

BENCHMARK_MAIN();
