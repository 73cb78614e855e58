#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace phenopf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform triangulation of the unit square. Every lattice cell is split
/// along its lower-left to upper-right diagonal; nodes are numbered
/// row by row, node (i, j) -> j*(nx+1) + i.
struct Mesh {
  std::size_t nx = 0;
  std::vector<Point2> nodes;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<double> areas;
  /// Constant gradients of the three hat functions on each triangle.
  std::vector<std::array<Point2, 3>> grads;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  std::size_t node_index(std::size_t i, std::size_t j) const { return j * (nx + 1) + i; }
  /// Index of the node closest to p; throws std::out_of_range outside [0,1]^2.
  std::size_t nearest_node(Point2 p) const;
};

/// Throws std::invalid_argument for nx == 0.
Mesh build_uniform_mesh(std::size_t nx);

enum class FieldTag { phi, mu, sigma };

std::string_view field_name(FieldTag tag);

/// Nodal values of one unknown.
struct ScalarField {
  FieldTag tag = FieldTag::phi;
  std::vector<double> values;
};

ScalarField interpolate(const std::function<double(double, double)>& fn, const Mesh& mesh,
                        FieldTag tag = FieldTag::phi);

}  // namespace phenopf
