#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace phenopf::oracle {

LineRule gauss_legendre(std::size_t n) {
  LineRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::vector<RefPoint> collapsed_rule(std::size_t n) {
  const auto g = gauss_legendre(n);
  std::vector<RefPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.5 * (g.x[i] + 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = 0.5 * (g.x[j] + 1.0);
      pts.push_back({u, v * (1.0 - u), 0.25 * g.w[i] * g.w[j] * (1.0 - u)});
    }
  }
  return pts;
}

double integrate_triangle(const std::array<Point2, 3>& v,
                          const std::function<double(double, double, const double*)>& g,
                          std::size_t n) {
  const double ax = v[1].x - v[0].x, ay = v[1].y - v[0].y;
  const double bx = v[2].x - v[0].x, by = v[2].y - v[0].y;
  const double jac = std::abs(ax * by - ay * bx);
  double total = 0.0;
  for (const auto& p : collapsed_rule(n)) {
    const double l[3] = {1.0 - p.xi - p.eta, p.xi, p.eta};
    total += p.w * g(v[0].x + p.xi * ax + p.eta * bx, v[0].y + p.xi * ay + p.eta * by, l);
  }
  return total * jac;
}

std::array<Point2, 3> barycentric_gradients(const std::array<Point2, 3>& v) {
  // Columns of J are the edge vectors; grad l1, grad l2 are the rows of J^{-1}.
  const double ax = v[1].x - v[0].x, ay = v[1].y - v[0].y;
  const double bx = v[2].x - v[0].x, by = v[2].y - v[0].y;
  const double det = ax * by - ay * bx;
  const Point2 g1{by / det, -bx / det};
  const Point2 g2{-ay / det, ax / det};
  return {Point2{-g1.x - g2.x, -g1.y - g2.y}, g1, g2};
}

namespace {

std::array<Point2, 3> corners(const Mesh& mesh, std::size_t e) {
  const auto& t = mesh.triangles[e];
  return {mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
}

double interp(std::span<const double> f, const std::array<std::size_t, 3>& t, const double* l) {
  return f[t[0]] * l[0] + f[t[1]] * l[1] + f[t[2]] * l[2];
}

Dense zeros(std::size_t n) { return Dense(n, std::vector<double>(n, 0.0)); }

template <class Local>
Dense assemble(const Mesh& mesh, Local local) {
  auto a = zeros(mesh.node_count());
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[t[i]][t[j]] += local(e, i, j);
    }
  }
  return a;
}

}  // namespace

Dense mass(const Mesh& mesh) {
  return assemble(mesh, [&](std::size_t e, int i, int j) {
    return integrate_triangle(corners(mesh, e),
                              [i, j](double, double, const double* l) { return l[i] * l[j]; });
  });
}

Dense stiffness(const Mesh& mesh) {
  return assemble(mesh, [&](std::size_t e, int i, int j) {
    const auto g = barycentric_gradients(corners(mesh, e));
    const double gg = g[i].x * g[j].x + g[i].y * g[j].y;
    return integrate_triangle(corners(mesh, e), [gg](double, double, const double*) { return gg; });
  });
}

Dense weighted_mass(const Mesh& mesh, std::span<const double> c) {
  return assemble(mesh, [&](std::size_t e, int i, int j) {
    const auto& t = mesh.triangles[e];
    return integrate_triangle(corners(mesh, e), [&, i, j](double, double, const double* l) {
      return interp(c, t, l) * l[i] * l[j];
    });
  });
}

std::vector<double> cubic_load(const Mesh& mesh, std::span<const double> phi) {
  std::vector<double> n(mesh.node_count(), 0.0);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i) {
      n[t[i]] += integrate_triangle(corners(mesh, e), [&, i](double, double, const double* l) {
        const double p = interp(phi, t, l);
        return p * p * p * l[i];
      });
    }
  }
  return n;
}

Dense cubic_jacobian(const Mesh& mesh, std::span<const double> phi) {
  return assemble(mesh, [&](std::size_t e, int i, int j) {
    const auto& t = mesh.triangles[e];
    return integrate_triangle(corners(mesh, e), [&, i, j](double, double, const double* l) {
      const double p = interp(phi, t, l);
      return 3.0 * p * p * l[i] * l[j];
    });
  });
}

double ch_energy(const Mesh& mesh, std::span<const double> phi, double eps) {
  double grad = 0.0, bulk = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto v = corners(mesh, e);
    const auto g = barycentric_gradients(v);
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
      gx += phi[t[k]] * g[k].x;
      gy += phi[t[k]] * g[k].y;
    }
    const double gg = gx * gx + gy * gy;
    grad += integrate_triangle(v, [gg](double, double, const double*) { return gg; });
    bulk += integrate_triangle(v, [&](double, double, const double* l) {
      const double p = interp(phi, t, l);
      return 0.25 * (p * p - 1.0) * (p * p - 1.0);
    });
  }
  return 0.5 * eps * grad + bulk / eps;
}

double l2_error(const Mesh& mesh, std::span<const double> u_h,
                const std::function<double(double, double)>& u) {
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    total += integrate_triangle(corners(mesh, e), [&](double x, double y, const double* l) {
      const double d = interp(u_h, t, l) - u(x, y);
      return d * d;
    });
  }
  return std::sqrt(total);
}

std::vector<double> solve_dense(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (a[piv][k] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

RadialProfile radial_sigma(double d, double b, double s_b, double k, double r_in, double r_out,
                           std::size_t n) {
  // Cell-centred finite volumes in r: flux form (1/r)(r s')' keeps the
  // centre and the outer no-flux boundary exact.
  const double dr = r_out / static_cast<double>(n);
  Dense a = zeros(n);
  std::vector<double> rhs(n, b * s_b);
  RadialProfile p;
  p.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    p.r[i] = r;
    const double rw = static_cast<double>(i) * dr;
    const double re = static_cast<double>(i + 1) * dr;
    const double cw = i == 0 ? 0.0 : d * rw / (r * dr * dr);
    const double ce = i + 1 == n ? 0.0 : d * re / (r * dr * dr);
    a[i][i] = cw + ce + b + (r < r_in ? k : 0.0);
    if (i > 0) a[i][i - 1] = -cw;
    if (i + 1 < n) a[i][i + 1] = -ce;
  }
  p.s = solve_dense(std::move(a), std::move(rhs));
  return p;
}

double weighted_sum(std::span<const double> y, std::span<const double> w,
                    std::span<const double> f, const std::function<double(double)>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * g(y[i]) * f[i];
  return s;
}

}  // namespace phenopf::oracle
