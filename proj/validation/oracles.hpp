#pragma once

// Reference computations used only by the validation suites. Nothing here
// calls into the assembly or solver code it is meant to check.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phenopf/mesh.hpp"

namespace phenopf::oracle {

using Dense = std::vector<std::vector<double>>;

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct LineRule {
  std::vector<double> x;
  std::vector<double> w;
};
LineRule gauss_legendre(std::size_t n);

/// Collapsed (Duffy) tensor rule on the reference triangle, exact for
/// polynomials of total degree <= 2n - 2. Weights sum to 1/2.
struct RefPoint {
  double xi;
  double eta;
  double w;
};
std::vector<RefPoint> collapsed_rule(std::size_t n);

/// Integral of g(x, y, l0, l1, l2) over one triangle, l the barycentric
/// coordinates, with the default 8x8 collapsed rule (degree 14).
double integrate_triangle(const std::array<Point2, 3>& v,
                          const std::function<double(double, double, const double*)>& g,
                          std::size_t n = 8);

/// Barycentric gradients of a triangle from its vertex coordinates.
std::array<Point2, 3> barycentric_gradients(const std::array<Point2, 3>& v);

Dense mass(const Mesh& mesh);
Dense stiffness(const Mesh& mesh);
/// int c_h l_i l_j with c_h the P1 interpolant of nodal c.
Dense weighted_mass(const Mesh& mesh, std::span<const double> c);
/// int phi_h^3 l_i
std::vector<double> cubic_load(const Mesh& mesh, std::span<const double> phi);
/// int 3 phi_h^2 l_i l_j
Dense cubic_jacobian(const Mesh& mesh, std::span<const double> phi);
/// (eps/2) int |grad phi_h|^2 + (1/eps) int (phi_h^2 - 1)^2 / 4
double ch_energy(const Mesh& mesh, std::span<const double> phi, double eps);
/// || u_h - u ||_L2 with u_h the P1 field and u a given function.
double l2_error(const Mesh& mesh, std::span<const double> u_h,
                const std::function<double(double, double)>& u);

/// Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(Dense a, std::vector<double> b);

/// Steady nutrient profile of the radially symmetric two-region problem
///   D (s'' + s'/r) - b s - c(r) s = -b s_B on [0, r_out], s'(0) = s'(r_out) = 0,
/// c = k inside r < r_in and 0 outside; dense finite differences on n cells.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> s;
};
RadialProfile radial_sigma(double d, double b, double s_b, double k, double r_in, double r_out,
                           std::size_t n);

/// Plain weighted sums over a phenotype grid given as (y, w) pairs.
double weighted_sum(std::span<const double> y, std::span<const double> w,
                    std::span<const double> f, const std::function<double(double)>& g);

}  // namespace phenopf::oracle
