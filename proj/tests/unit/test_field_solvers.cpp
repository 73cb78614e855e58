#include <doctest.h>

#include <cmath>
#include <random>

#include "phenopf/field_solvers.hpp"
#include "phenopf/simulation.hpp"
#include "phenopf/sparse.hpp"

using namespace phenopf;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

ChState random_state(const FemOperators& ops, double eps, unsigned seed) {
  ChState s;
  s.phi = {FieldTag::phi, random_vector(ops.mesh.node_count(), seed)};
  s.mu = initial_mu(s.phi, eps, ops, sigma_controls(paper_config()));
  return s;
}

}  // namespace

TEST_SUITE("field-solvers") {
  const auto cfg = paper_config();

  TEST_CASE("uniform state is stationary") {
    const FemOperators ops(build_uniform_mesh(8));
    const std::size_t n = ops.mesh.node_count();
    ChState s;
    const double c = -0.4;
    s.phi = {FieldTag::phi, std::vector<double>(n, c)};
    s.mu = {FieldTag::mu, std::vector<double>(n, 0.0)};
    const auto next = ch_step(s, std::vector<double>(n, 0.0), cfg.m_mob, cfg.eps, cfg.dt, ops,
                              ch_controls(cfg));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(next.phi.values[i] - c) <= 1e-10);
      CHECK(std::abs(next.mu.values[i] - (c * c * c - c) / cfg.eps) <= 1e-8);
    }
  }

  TEST_CASE("mass conservation and constant source") {
    const FemOperators ops(build_uniform_mesh(12));
    const std::size_t n = ops.mesh.node_count();
    const auto s = random_state(ops, cfg.eps, 1);
    const std::vector<double> ones(n, 1.0);
    const auto m1 = multiply(ops.mass, ones);
    const auto a = ch_step(s, std::vector<double>(n, 0.0), cfg.m_mob, cfg.eps, cfg.dt, ops,
                           ch_controls(cfg));
    CHECK(std::abs(dot(m1, a.phi.values) - dot(m1, s.phi.values)) <= 1e-10);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(a.phi.values[i] - s.phi.values[i]));
    CHECK(moved > 1e-6);
    const double g = 0.8;
    const auto b = ch_step(s, std::vector<double>(n, g), cfg.m_mob, cfg.eps, cfg.dt, ops,
                           ch_controls(cfg));
    CHECK(std::abs(dot(m1, b.phi.values) - dot(m1, s.phi.values) - cfg.dt * g) <= 1e-10);
  }

  TEST_CASE("jacobian matches finite differences of the residual") {
    const FemOperators ops(build_uniform_mesh(5));
    const std::size_t n = ops.mesh.node_count();
    ChSolver solver(ops, ChParams{cfg.m_mob, cfg.eps, cfg.dt}, ch_controls(cfg));
    const auto phi_n = random_vector(n, 2);
    const auto g = random_vector(n, 3, 0.0, 1.0);
    auto x = random_vector(2 * n, 4);
    const auto dir = random_vector(2 * n, 5);
    const auto j = solver.jacobian(x);
    const auto jd = multiply(j, dir);
    const double h = 1e-6;
    auto xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xp[i] += h * dir[i];
      xm[i] -= h * dir[i];
    }
    const auto rp = solver.residual(phi_n, g, xp), rm = solver.residual(phi_n, g, xm);
    double worst = 0.0, scale = norm_inf(jd);
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::abs((rp[i] - rm[i]) / (2 * h) - jd[i]));
    CHECK(worst <= 1e-7 * scale);
  }

  TEST_CASE("energy decreases without sources") {
    const FemOperators ops(build_uniform_mesh(16));
    const std::size_t n = ops.mesh.node_count();
    for (double dt : {1e-3, 1e-1}) {
      ChSolver solver(ops, ChParams{cfg.m_mob, cfg.eps, dt}, ch_controls(cfg));
      auto s = random_state(ops, cfg.eps, 9);
      double e = energy(s.phi, ops, cfg.eps);
      for (int k = 0; k < 30; ++k) {
        s = solver.step(s, std::vector<double>(n, 0.0));
        const double e2 = energy(s.phi, ops, cfg.eps);
        CHECK(e2 <= e * (1.0 + 1e-9));
        e = e2;
      }
    }
  }

  TEST_CASE("newton failure is reported") {
    const FemOperators ops(build_uniform_mesh(8));
    auto ctl = ch_controls(cfg);
    ctl.newton.max_iter = 1;
    ctl.newton.rel_tol = 1e-15;
    ctl.newton.abs_tol = 1e-300;
    ChSolver solver(ops, ChParams{cfg.m_mob, cfg.eps, 0.1}, ctl);
    const auto s = random_state(ops, cfg.eps, 11);
    CHECK_THROWS_AS(solver.step(s, std::vector<double>(ops.mesh.node_count(), 0.0)), SolverError);
  }

  TEST_CASE("nutrient equilibrium and uniform reduction") {
    const FemOperators ops(build_uniform_mesh(10));
    const std::size_t n = ops.mesh.node_count();
    const SigmaSolver sigma(ops, cfg.d_sigma, cfg.b, cfg.sigma_b, cfg.dt, sigma_controls(cfg));
    const ScalarField ones{FieldTag::sigma, std::vector<double>(n, cfg.sigma_b)};
    const auto same = sigma.step(ones, std::vector<double>(n, 0.0));
    CHECK(same.values == ones.values);

    const double s0 = 0.6, hk = 0.5 * 1.0;
    const auto u = sigma.step({FieldTag::sigma, std::vector<double>(n, s0)}, std::vector<double>(n, hk));
    const double expected = (s0 / cfg.dt + cfg.b * cfg.sigma_b) / (1.0 / cfg.dt + hk + cfg.b);
    for (double v : u.values) CHECK(std::abs(v - expected) <= 1e-10);
  }

  TEST_CASE("initial nutrient") {
    const FemOperators ops(build_uniform_mesh(16));
    const std::size_t n = ops.mesh.node_count();
    const auto grid = std::make_shared<PhenotypeGrid>(build_grid(0.0, 2.0, 17));
    const auto f0 = uniform_field(grid, n, initial_distribution(*grid, 2.5, 1.75));
    const auto fns = default_paper_functions();
    const ScalarField minus{FieldTag::phi, std::vector<double>(n, -1.0)};
    const auto s_out = sigma_steady_init(minus, f0, fns, cfg, ops, sigma_controls(cfg));
    for (double v : s_out.values) CHECK(std::abs(v - cfg.sigma_b) <= 1e-12);

    auto no_uptake = fns;
    no_uptake.k_rate = [](double) { return 0.0; };
    const ScalarField plus{FieldTag::phi, std::vector<double>(n, 1.0)};
    const auto s_k0 = sigma_steady_init(plus, f0, no_uptake, cfg, ops, sigma_controls(cfg));
    for (double v : s_k0.values) CHECK(std::abs(v - cfg.sigma_b) <= 1e-12);

    const auto disk = interpolate(
        [](double x, double y) { return (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) <= 0.01 ? 1.0 : -1.0; },
        ops.mesh, FieldTag::phi);
    const auto s_disk = sigma_steady_init(disk, f0, fns, cfg, ops, sigma_controls(cfg));
    const auto lo = std::min_element(s_disk.values.begin(), s_disk.values.end());
    CHECK(*lo >= 0.0);
    CHECK(*std::max_element(s_disk.values.begin(), s_disk.values.end()) <= cfg.sigma_b + 1e-12);
    CHECK(disk.values[static_cast<std::size_t>(lo - s_disk.values.begin())] == 1.0);
    CHECK(*lo < cfg.sigma_b);
  }

  TEST_CASE("consumption coefficient") {
    const auto grid = std::make_shared<PhenotypeGrid>(build_grid(0.0, 2.0, 17));
    const auto f = uniform_field(grid, 3, initial_distribution(*grid, 2.5, 1.0));
    const ScalarField phi{FieldTag::phi, {-1.0, 0.0, 1.0}};
    const auto c = consumption_coefficient(phi, f, default_paper_functions());
    CHECK(c[0] == 0.0);
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(c[2] == doctest::Approx(1.0));
  }
}
