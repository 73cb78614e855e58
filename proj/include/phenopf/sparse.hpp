#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phenopf/kernels.hpp"

namespace phenopf {

/// Compressed-row sparse matrix. Column indices are strictly increasing
/// within each row and finalized matrices carry no explicit zeros.
struct SparseMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  kernels::CsrView view() const;
};

/// Accumulates (row, col, value) triplets; duplicates are summed in
/// insertion order so finalization is reproducible bit for bit.
class TripletBuilder {
 public:
  TripletBuilder(std::size_t n_rows, std::size_t n_cols);
  void reserve(std::size_t n) { entries_.reserve(n); }
  void add(std::size_t row, std::size_t col, double value);
  SparseMatrix finalize(bool drop_zeros = true) const;

 private:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<Entry> entries_;
};

SparseMatrix identity_matrix(std::size_t n);
SparseMatrix from_dense(const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> to_dense(const SparseMatrix& a);

/// alpha*a + beta*b (same shape), explicit zeros dropped.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                const SparseMatrix& b);
/// [[a11, a12], [a21, a22]] with square blocks of equal size.
SparseMatrix block_2x2(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                       const SparseMatrix& a22);
SparseMatrix transpose(const SparseMatrix& a);
/// Drops stored entries that are exactly zero.
SparseMatrix pruned(SparseMatrix a);

std::vector<double> multiply(const SparseMatrix& a, std::span<const double> x);
void multiply_into(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
double sum(std::span<const double> x);

}  // namespace phenopf
