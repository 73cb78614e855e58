#include "phenopf/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace phenopf {

const TriangleQuadrature& degree5_rule() {
  static const TriangleQuadrature rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0;
    const double b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0;
    const double b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    TriangleQuadrature q{};
    q.points = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                 {a1, a1, b1},
                 {a1, b1, a1},
                 {b1, a1, a1},
                 {a2, a2, b2},
                 {a2, b2, a2},
                 {b2, a2, a2}}};
    q.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
    return q;
  }();
  return rule;
}

FemPattern::FemPattern(const Mesh& mesh) : n_nodes_(mesh.node_count()) {
  std::vector<std::vector<std::size_t>> adj(n_nodes_);
  for (const auto& t : mesh.triangles) {
    for (std::size_t a : t) {
      for (std::size_t b : t) adj[a].push_back(b);
    }
  }
  row_offsets_.assign(n_nodes_ + 1, 0);
  for (std::size_t i = 0; i < n_nodes_; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    row_offsets_[i + 1] = row_offsets_[i] + row.size();
    col_indices_.insert(col_indices_.end(), row.begin(), row.end());
  }
  slots_.reserve(mesh.triangle_count());
  for (const auto& t : mesh.triangles) {
    std::array<std::size_t, 9> s{};
    for (std::size_t a = 0; a < 3; ++a) {
      const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[t[a]]);
      const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[t[a] + 1]);
      for (std::size_t b = 0; b < 3; ++b) {
        s[3 * a + b] = static_cast<std::size_t>(std::lower_bound(first, last, t[b]) -
                                                col_indices_.begin());
      }
    }
    slots_.push_back(s);
  }
}

std::vector<double> FemPattern::accumulate(std::span<const double> element_blocks) const {
  if (element_blocks.size() != 9 * slots_.size()) {
    throw std::invalid_argument("FemPattern: wrong number of element entries");
  }
  std::vector<double> values(col_indices_.size(), 0.0);
  for (std::size_t e = 0; e < slots_.size(); ++e) {
    for (std::size_t k = 0; k < 9; ++k) values[slots_[e][k]] += element_blocks[9 * e + k];
  }
  return values;
}

SparseMatrix FemPattern::with_values(std::vector<double> values) const {
  if (values.size() != col_indices_.size()) {
    throw std::invalid_argument("FemPattern: value count does not match the pattern");
  }
  SparseMatrix m;
  m.n_rows = m.n_cols = n_nodes_;
  m.row_offsets = row_offsets_;
  m.col_indices = col_indices_;
  m.values = std::move(values);
  return m;
}

std::vector<double> FemPattern::values_of(const SparseMatrix& a) const {
  if (a.n_rows != n_nodes_ || a.n_cols != n_nodes_) {
    throw std::invalid_argument("FemPattern::values_of: shape mismatch");
  }
  std::vector<double> values(col_indices_.size(), 0.0);
  for (std::size_t i = 0; i < n_nodes_; ++i) {
    std::size_t q = row_offsets_[i];
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      while (q < row_offsets_[i + 1] && col_indices_[q] < a.col_indices[p]) ++q;
      if (q == row_offsets_[i + 1] || col_indices_[q] != a.col_indices[p]) {
        throw std::invalid_argument("FemPattern::values_of: entry outside the pattern");
      }
      values[q] = a.values[p];
    }
  }
  return values;
}

SparseMatrix FemPattern::scatter(std::span<const double> element_blocks) const {
  return pruned(with_values(accumulate(element_blocks)));
}

namespace {

// Runs block(e, out) for every triangle, out pointing at its 9 entries.
template <typename Block>
std::vector<double> element_blocks(const Mesh& mesh, Exec exec, Block&& block) {
  const auto n = static_cast<std::int64_t>(mesh.triangle_count());
  std::vector<double> out(9 * mesh.triangle_count());
  if (exec == Exec::serial) {
    for (std::int64_t e = 0; e < n; ++e) block(static_cast<std::size_t>(e), out.data() + 9 * e);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < n; ++e) block(static_cast<std::size_t>(e), out.data() + 9 * e);
  }
  return out;
}

double interpolate_at(const std::array<double, 3>& lambda, const double v[3]) {
  return lambda[0] * v[0] + lambda[1] * v[1] + lambda[2] * v[2];
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh, Exec exec) {
  const FemPattern pattern(mesh);
  const auto blocks = element_blocks(mesh, exec, [&](std::size_t e, double* out) {
    const double a = mesh.areas[e] / 12.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) out[3 * i + j] = (i == j ? 2.0 : 1.0) * a;
    }
  });
  return pattern.scatter(blocks);
}

SparseMatrix assemble_stiffness(const Mesh& mesh, Exec exec) {
  const FemPattern pattern(mesh);
  const auto blocks = element_blocks(mesh, exec, [&](std::size_t e, double* out) {
    const auto& g = mesh.grads[e];
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        out[3 * i + j] = mesh.areas[e] * (g[i].x * g[j].x + g[i].y * g[j].y);
      }
    }
  });
  return pattern.scatter(blocks);
}

namespace {

std::vector<double> weighted_mass_blocks(const FemPattern& pattern, const Mesh& mesh,
                                         std::span<const double> phi,
                                         const std::function<double(double)>& c, Exec exec) {
  if (phi.size() != mesh.node_count() || pattern.n_nodes() != mesh.node_count()) {
    throw std::invalid_argument("weighted mass: field length does not match mesh");
  }
  const auto& rule = degree5_rule();
  return element_blocks(mesh, exec, [&](std::size_t e, double* out) {
    const auto& t = mesh.triangles[e];
    const double v[3] = {phi[t[0]], phi[t[1]], phi[t[2]]};
    std::fill(out, out + 9, 0.0);
    for (std::size_t q = 0; q < TriangleQuadrature::size; ++q) {
      const auto& l = rule.points[q];
      const double cw = rule.weights[q] * mesh.areas[e] * c(interpolate_at(l, v));
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) out[3 * i + j] += cw * l[i] * l[j];
      }
    }
  });
}

}  // namespace

SparseMatrix assemble_weighted_mass_pointwise(const FemPattern& pattern, const Mesh& mesh,
                                              std::span<const double> phi,
                                              const std::function<double(double)>& c,
                                              Exec exec) {
  return pattern.scatter(weighted_mass_blocks(pattern, mesh, phi, c, exec));
}

std::vector<double> weighted_mass_values(const FemPattern& pattern, const Mesh& mesh,
                                         std::span<const double> phi,
                                         const std::function<double(double)>& c, Exec exec) {
  return pattern.accumulate(weighted_mass_blocks(pattern, mesh, phi, c, exec));
}

SparseMatrix assemble_weighted_mass_pointwise(const Mesh& mesh, std::span<const double> phi,
                                              const std::function<double(double)>& c,
                                              Exec exec) {
  return assemble_weighted_mass_pointwise(FemPattern(mesh), mesh, phi, c, exec);
}

SparseMatrix assemble_weighted_mass(const FemPattern& pattern, const Mesh& mesh,
                                    std::span<const double> coeff, Exec exec) {
  return assemble_weighted_mass_pointwise(pattern, mesh, coeff, [](double c) { return c; }, exec);
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, std::span<const double> coeff, Exec exec) {
  return assemble_weighted_mass(FemPattern(mesh), mesh, coeff, exec);
}

std::vector<double> assemble_cubic_load(const Mesh& mesh, std::span<const double> phi) {
  if (phi.size() != mesh.node_count()) {
    throw std::invalid_argument("cubic load: field length does not match mesh");
  }
  const auto& rule = degree5_rule();
  std::vector<double> load(mesh.node_count(), 0.0);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const double v[3] = {phi[t[0]], phi[t[1]], phi[t[2]]};
    double local[3] = {0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < TriangleQuadrature::size; ++q) {
      const auto& l = rule.points[q];
      const double p = interpolate_at(l, v);
      const double cw = rule.weights[q] * p * p * p;
      for (std::size_t i = 0; i < 3; ++i) local[i] += cw * l[i];
    }
    for (std::size_t i = 0; i < 3; ++i) load[t[i]] += mesh.areas[e] * local[i];
  }
  return load;
}

CubicTerm assemble_nonlinear_cubic(const FemPattern& pattern, const Mesh& mesh,
                                   std::span<const double> phi, Exec exec) {
  return {assemble_cubic_load(mesh, phi),
          assemble_weighted_mass_pointwise(pattern, mesh, phi,
                                           [](double p) { return 3.0 * p * p; }, exec)};
}

CubicTerm assemble_nonlinear_cubic(const Mesh& mesh, std::span<const double> phi, Exec exec) {
  return assemble_nonlinear_cubic(FemPattern(mesh), mesh, phi, exec);
}

double integrate_pointwise(const Mesh& mesh, std::span<const double> phi,
                           const std::function<double(double)>& g) {
  if (phi.size() != mesh.node_count()) {
    throw std::invalid_argument("integrate_pointwise: field length does not match mesh");
  }
  const auto& rule = degree5_rule();
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const double v[3] = {phi[t[0]], phi[t[1]], phi[t[2]]};
    double s = 0.0;
    for (std::size_t q = 0; q < TriangleQuadrature::size; ++q) {
      s += rule.weights[q] * g(interpolate_at(rule.points[q], v));
    }
    total += mesh.areas[e] * s;
  }
  return total;
}

FemOperators::FemOperators(Mesh m)
    : mesh(std::move(m)),
      pattern(mesh),
      mass(assemble_mass(mesh)),
      stiffness(assemble_stiffness(mesh)),
      lumped_mass(mesh.node_count(), 0.0) {
  for (std::size_t i = 0; i < mass.n_rows; ++i) {
    for (std::size_t p = mass.row_offsets[i]; p < mass.row_offsets[i + 1]; ++p) {
      lumped_mass[i] += mass.values[p];
    }
  }
}

}  // namespace phenopf
