#include "phenopf/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace phenopf {

Mesh build_uniform_mesh(std::size_t nx) {
  if (nx == 0) throw std::invalid_argument("build_uniform_mesh: nx must be at least 1");
  Mesh m;
  m.nx = nx;
  const double h = 1.0 / static_cast<double>(nx);
  m.nodes.reserve((nx + 1) * (nx + 1));
  for (std::size_t j = 0; j <= nx; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      // Exact endpoints; i*h can round away from 1.
      const double x = i == nx ? 1.0 : static_cast<double>(i) * h;
      const double y = j == nx ? 1.0 : static_cast<double>(j) * h;
      m.nodes.push_back({x, y});
    }
  }

  m.triangles.reserve(2 * nx * nx);
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ll = m.node_index(i, j);
      const std::size_t lr = m.node_index(i + 1, j);
      const std::size_t ur = m.node_index(i + 1, j + 1);
      const std::size_t ul = m.node_index(i, j + 1);
      m.triangles.push_back({ll, lr, ur});
      m.triangles.push_back({ll, ur, ul});
    }
  }

  m.areas.reserve(m.triangles.size());
  m.grads.reserve(m.triangles.size());
  for (const auto& t : m.triangles) {
    const Point2 p0 = m.nodes[t[0]];
    const Point2 p1 = m.nodes[t[1]];
    const Point2 p2 = m.nodes[t[2]];
    const double twice_area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    m.areas.push_back(0.5 * twice_area);
    m.grads.push_back({Point2{(p1.y - p2.y) / twice_area, (p2.x - p1.x) / twice_area},
                       Point2{(p2.y - p0.y) / twice_area, (p0.x - p2.x) / twice_area},
                       Point2{(p0.y - p1.y) / twice_area, (p1.x - p0.x) / twice_area}});
  }
  return m;
}

std::size_t Mesh::nearest_node(Point2 p) const {
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw std::out_of_range("point outside the unit square");
  }
  const auto n = static_cast<double>(nx);
  const auto i = static_cast<std::size_t>(std::lround(p.x * n));
  const auto j = static_cast<std::size_t>(std::lround(p.y * n));
  return node_index(i, j);
}

std::string_view field_name(FieldTag tag) {
  switch (tag) {
    case FieldTag::phi:
      return "phi";
    case FieldTag::mu:
      return "mu";
    case FieldTag::sigma:
      return "sigma";
  }
  return "unknown";
}

ScalarField interpolate(const std::function<double(double, double)>& fn, const Mesh& mesh,
                        FieldTag tag) {
  ScalarField f{tag, {}};
  f.values.reserve(mesh.node_count());
  for (const auto& p : mesh.nodes) f.values.push_back(fn(p.x, p.y));
  return f;
}

}  // namespace phenopf
