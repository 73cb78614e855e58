#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "phenopf/mesh.hpp"
#include "phenopf/sparse.hpp"

namespace phenopf {

/// Symmetric 7-point triangle rule, exact for polynomials of degree <= 5.
/// Points are barycentric coordinates; weights sum to 1 (multiply by area).
struct TriangleQuadrature {
  static constexpr std::size_t size = 7;
  std::array<std::array<double, 3>, size> points;
  std::array<double, size> weights;
};

const TriangleQuadrature& degree5_rule();

enum class Exec { serial, parallel };

/// Node-to-node sparsity of P1 on a mesh together with, for every
/// triangle, the CSR slot of each of its 9 local entries.
class FemPattern {
 public:
  explicit FemPattern(const Mesh& mesh);

  /// Builds a matrix by summing 3x3 element blocks (row-major, 9 values per
  /// triangle) in triangle order, then dropping exact zeros.
  SparseMatrix scatter(std::span<const double> element_blocks) const;
  /// Same sums as scatter, returned as values aligned with the full pattern.
  std::vector<double> accumulate(std::span<const double> element_blocks) const;
  /// Entries of `a` (whose pattern must be a subset) at the pattern slots.
  std::vector<double> values_of(const SparseMatrix& a) const;
  /// Matrix on the full pattern; may store explicit zeros.
  SparseMatrix with_values(std::vector<double> values) const;

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t nnz() const { return col_indices_.size(); }
  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }

 private:
  std::size_t n_nodes_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<std::array<std::size_t, 9>> slots_;
};

SparseMatrix assemble_mass(const Mesh& mesh, Exec exec = Exec::parallel);
SparseMatrix assemble_stiffness(const Mesh& mesh, Exec exec = Exec::parallel);

/// W_ij = int c_h chi_i chi_j with c_h the P1 interpolant of the nodal
/// coefficient, integrated exactly.
SparseMatrix assemble_weighted_mass(const Mesh& mesh, std::span<const double> coeff,
                                    Exec exec = Exec::parallel);

/// W_ij = int c(phi_h) chi_i chi_j with c applied pointwise at quadrature
/// points of the degree-5 rule, where phi_h is the P1 interpolant of `phi`.
SparseMatrix assemble_weighted_mass_pointwise(const Mesh& mesh, std::span<const double> phi,
                                              const std::function<double(double)>& c,
                                              Exec exec = Exec::parallel);

/// Load vector N_i = int (phi_h)^3 chi_i and its Jacobian int 3 phi_h^2 chi_i chi_j.
struct CubicTerm {
  std::vector<double> load;
  SparseMatrix jacobian;
};

CubicTerm assemble_nonlinear_cubic(const Mesh& mesh, std::span<const double> phi,
                                   Exec exec = Exec::parallel);

// Variants reusing a prebuilt pattern of the same mesh (time-loop hot path).
SparseMatrix assemble_weighted_mass(const FemPattern& pattern, const Mesh& mesh,
                                    std::span<const double> coeff, Exec exec = Exec::parallel);
SparseMatrix assemble_weighted_mass_pointwise(const FemPattern& pattern, const Mesh& mesh,
                                              std::span<const double> phi,
                                              const std::function<double(double)>& c,
                                              Exec exec = Exec::parallel);
CubicTerm assemble_nonlinear_cubic(const FemPattern& pattern, const Mesh& mesh,
                                   std::span<const double> phi, Exec exec = Exec::parallel);
std::vector<double> assemble_cubic_load(const Mesh& mesh, std::span<const double> phi);
/// Weighted-mass entries at the pattern slots, without dropping zeros.
std::vector<double> weighted_mass_values(const FemPattern& pattern, const Mesh& mesh,
                                         std::span<const double> phi,
                                         const std::function<double(double)>& c,
                                         Exec exec = Exec::parallel);

/// Sum over triangles of the exact (degree-5 rule) integral of g(phi_h).
double integrate_pointwise(const Mesh& mesh, std::span<const double> phi,
                           const std::function<double(double)>& g);

/// Shared operators for one mesh.
struct FemOperators {
  explicit FemOperators(Mesh m);

  Mesh mesh;
  FemPattern pattern;
  SparseMatrix mass;
  SparseMatrix stiffness;
  /// Row sums of the mass matrix (nodal lumped areas).
  std::vector<double> lumped_mass;
};

}  // namespace phenopf
