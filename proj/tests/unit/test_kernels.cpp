#include <doctest.h>

#include <random>

#include "phenopf/kernels.hpp"
#include "phenopf/mesh.hpp"
#include "phenopf/assembly.hpp"
#include "phenopf/config.hpp"
#include "phenopf/phenotype.hpp"

using namespace phenopf;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("serial and OpenMP kernels agree") {
    const auto m = assemble_stiffness(build_uniform_mesh(100));
    const auto x = random_vector(m.n_rows, 1);
    std::vector<double> ys(m.n_rows), yp(m.n_rows);
    kernels::serial::spmv(m.view(), x, ys);
    kernels::omp::spmv(m.view(), x, yp);
    CHECK(ys == yp);

    const auto y = random_vector(x.size(), 2);
    CHECK(kernels::omp::dot(x, y) == doctest::Approx(kernels::serial::dot(x, y)).epsilon(1e-13));
    CHECK(kernels::omp::dot(x, y) == kernels::omp::dot(x, y));

    auto a1 = y, a2 = y;
    kernels::serial::axpy(0.3, x, a1);
    kernels::omp::axpy(0.3, x, a2);
    CHECK(a1 == a2);
  }

  TEST_CASE("phenotype kernels agree") {
    const auto grid = build_grid(0.0, 2.0, 17);
    const auto fns = default_paper_functions();
    const auto k = build_kernel_matrix(grid, fns.kernel);
    const std::size_t nodes = 5000, ny = grid.size();
    std::vector<double> f(nodes * ny), h(nodes), fit(ny), wg(ny);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : f) v = u(rng);
    for (auto& v : h) v = u(rng);
    for (std::size_t i = 0; i < ny; ++i) {
      fit[i] = fns.fitness(grid.y_values[i]);
      wg[i] = grid.weights[i] * grid.y_values[i];
    }
    kernels::PhenotypeUpdate up{nodes, ny, grid.weights, k.entries, fit, h, 500.0, 0.5, 1e-3};
    std::vector<double> s(f.size()), p(f.size());
    kernels::serial::phenotype_update(up, f, s);
    kernels::omp::phenotype_update(up, f, p);
    CHECK(s == p);
    std::vector<double> ms(nodes), mp(nodes);
    kernels::serial::nodal_moments(nodes, ny, wg, f, ms);
    kernels::omp::nodal_moments(nodes, ny, wg, f, mp);
    CHECK(ms == mp);
  }
}
