#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "phenopf/assembly.hpp"
#include "phenopf/mesh.hpp"
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

double max_entry_diff(const SparseMatrix& a, const SparseMatrix& b) {
  const auto da = to_dense(a), db = to_dense(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < da.size(); ++j) worst = std::max(worst, std::abs(da[i][j] - db[i][j]));
  return worst;
}

}  // namespace

TEST_SUITE("mesh-fem") {
  TEST_CASE("single cell mesh") {
    const auto m = build_uniform_mesh(1);
    CHECK(m.node_count() == 4);
    CHECK(m.triangle_count() == 2);
    for (double a : m.areas) CHECK(a == 0.5);
    CHECK_THROWS_AS(build_uniform_mesh(0), std::invalid_argument);
  }

  TEST_CASE("reference resolution has 28800 triangles") {
    CHECK(build_uniform_mesh(120).triangle_count() == 28800);
  }

  TEST_CASE("areas sum to one and triangles are counter-clockwise") {
    for (std::size_t nx : {1u, 3u, 17u, 64u}) {
      const auto m = build_uniform_mesh(nx);
      double s = 0.0;
      for (std::size_t e = 0; e < m.triangle_count(); ++e) {
        s += m.areas[e];
        const auto& t = m.triangles[e];
        const auto a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
        CHECK((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) > 0.0);
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("nearest node") {
    const auto m = build_uniform_mesh(4);
    CHECK(m.nearest_node({0.5, 0.5}) == m.node_index(2, 2));
    CHECK(m.nearest_node({0.0, 1.0}) == m.node_index(0, 4));
    CHECK_THROWS_AS(m.nearest_node({1.5, 0.5}), std::out_of_range);
  }

  TEST_CASE("mass matrix") {
    const auto m = build_uniform_mesh(1);
    const auto mass = assemble_mass(m);
    // node 1 = (1,0) belongs to one triangle only: (A/12)*2 with A = 1/2
    CHECK(mass.at(1, 1) == doctest::Approx(1.0 / 12.0));
    const auto m8 = build_uniform_mesh(8);
    const auto mm = assemble_mass(m8);
    const std::vector<double> ones(m8.node_count(), 1.0);
    CHECK(std::abs(dot(ones, multiply(mm, ones)) - 1.0) <= 1e-12);
    CHECK(max_entry_diff(mm, transpose(mm)) == 0.0);
  }

  TEST_CASE("stiffness matrix") {
    const auto m = build_uniform_mesh(6);
    const auto k = assemble_stiffness(m);
    const std::vector<double> ones(m.node_count(), 1.0);
    CHECK(norm_inf(multiply(k, ones)) <= 1e-12);
    const auto x = interpolate([](double xx, double) { return xx; }, m, FieldTag::phi);
    CHECK(std::abs(dot(x.values, multiply(k, x.values)) - 1.0) <= 1e-12);
    // Galerkin consistency for linear u, v: int grad u . grad v = 2*3 + (-1)*4 = 2
    const auto u = interpolate([](double xx, double yy) { return 2 * xx - yy; }, m, FieldTag::phi);
    const auto v = interpolate([](double xx, double yy) { return 3 * xx + 4 * yy; }, m, FieldTag::phi);
    CHECK(std::abs(dot(v.values, multiply(k, u.values)) - 2.0) <= 1e-12);
    for (unsigned s = 0; s < 100; ++s) {
      const auto r = random_vector(m.node_count(), s);
      CHECK(dot(r, multiply(k, r)) >= -1e-12);
    }
  }

  TEST_CASE("weighted mass") {
    const auto m = build_uniform_mesh(5);
    const std::vector<double> ones(m.node_count(), 1.0), zeros(m.node_count(), 0.0);
    CHECK(max_entry_diff(assemble_weighted_mass(m, ones), assemble_mass(m)) <= 1e-12);
    CHECK(assemble_weighted_mass(m, zeros).nnz() == 0);
    const auto m1 = build_uniform_mesh(1);
    const auto x = interpolate([](double xx, double) { return xx; }, m1, FieldTag::phi);
    const auto w = assemble_weighted_mass(m1, x.values);
    // Node (1,0) lies only in the triangle (0,0),(1,0),(1,1), where
    // int x l^2 = (A/60)(6 x_self + 2 x_other + 2 x_other).
    const double area = 0.5;
    CHECK(w.at(1, 1) == doctest::Approx(area / 60.0 * (6 * 1.0 + 2 * 0.0 + 2 * 1.0)));
    // The pointwise variant with c(r) = r agrees with the nodal interpolant version.
    const auto c = random_vector(m.node_count(), 3);
    const auto pw = assemble_weighted_mass_pointwise(m, c, [](double r) { return r; });
    CHECK(max_entry_diff(pw, assemble_weighted_mass(m, c)) <= 1e-12);
  }

  TEST_CASE("cubic term") {
    const auto m = build_uniform_mesh(3);
    const std::size_t n = m.node_count();
    const auto zero = assemble_nonlinear_cubic(m, std::vector<double>(n, 0.0));
    CHECK(norm_inf(zero.load) == 0.0);
    const double c = -0.7;
    const auto cst = assemble_nonlinear_cubic(m, std::vector<double>(n, c));
    const auto m1 = multiply(assemble_mass(m), std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cst.load[i] - c * c * c * m1[i]) <= 1e-14);
    // Jacobian is the derivative of the load (finite differences)
    const auto phi = random_vector(n, 9);
    const auto dir = random_vector(n, 10);
    const auto t = assemble_nonlinear_cubic(m, phi);
    const double h = 1e-6;
    std::vector<double> pp(n), pm(n);
    for (std::size_t i = 0; i < n; ++i) {
      pp[i] = phi[i] + h * dir[i];
      pm[i] = phi[i] - h * dir[i];
    }
    const auto lp = assemble_cubic_load(m, pp), lm = assemble_cubic_load(m, pm);
    const auto jd = multiply(t.jacobian, dir);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs((lp[i] - lm[i]) / (2 * h) - jd[i]) <= 1e-8);
  }

  TEST_CASE("pattern reuse matches fresh assembly") {
    const FemOperators ops(build_uniform_mesh(7));
    const auto phi = random_vector(ops.mesh.node_count(), 4);
    const auto a = assemble_nonlinear_cubic(ops.mesh, phi);
    const auto b = assemble_nonlinear_cubic(ops.pattern, ops.mesh, phi);
    CHECK(max_entry_diff(a.jacobian, b.jacobian) == 0.0);
    CHECK(max_entry_diff(assemble_weighted_mass(ops.mesh, phi),
                         assemble_weighted_mass(ops.pattern, ops.mesh, phi)) == 0.0);
  }

  TEST_CASE("serial and parallel assembly agree bitwise") {
    const auto m = build_uniform_mesh(40);
    CHECK(max_entry_diff(assemble_mass(m, Exec::serial), assemble_mass(m, Exec::parallel)) == 0.0);
    CHECK(max_entry_diff(assemble_stiffness(m, Exec::serial), assemble_stiffness(m, Exec::parallel)) == 0.0);
  }

  TEST_CASE("interpolate") {
    const auto m = build_uniform_mesh(120);
    const auto one = interpolate([](double, double) { return 1.0; }, m, FieldTag::sigma);
    for (double v : one.values) CHECK(v == 1.0);
    const auto x = interpolate([](double xx, double) { return xx; }, m, FieldTag::phi);
    for (std::size_t k = 0; k < m.node_count(); ++k) CHECK(x.values[k] == m.nodes[k].x);
    const auto disk = interpolate(
        [](double xx, double yy) {
          return (xx - 0.5) * (xx - 0.5) + (yy - 0.5) * (yy - 0.5) <= 0.01 ? 1.0 : -1.0;
        },
        m, FieldTag::phi);
    CHECK(disk.values[m.node_index(60, 60)] == 1.0);
    CHECK(disk.values[m.node_index(0, 0)] == -1.0);
    CHECK(disk.values[m.node_index(72, 60)] == 1.0);   // r = 0.1 exactly
    CHECK(disk.values[m.node_index(73, 60)] == -1.0);
  }
}
