#include "phenopf/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phenopf {

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_rows || j >= n_cols) throw std::out_of_range("SparseMatrix::at index out of range");
  const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
  const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(n_rows, n_cols), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

kernels::CsrView SparseMatrix::view() const {
  return {n_rows, row_offsets, col_indices, values};
}

TripletBuilder::TripletBuilder(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols) {}

void TripletBuilder::add(std::size_t row, std::size_t col, double value) {
  if (row >= n_rows_ || col >= n_cols_) throw std::out_of_range("triplet index out of range");
  entries_.push_back({row, col, value});
}

SparseMatrix TripletBuilder::finalize(bool drop_zeros) const {
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Entry& ea = entries_[a];
    const Entry& eb = entries_[b];
    return ea.row != eb.row ? ea.row < eb.row : ea.col < eb.col;
  });

  SparseMatrix m;
  m.n_rows = n_rows_;
  m.n_cols = n_cols_;
  m.row_offsets.assign(n_rows_ + 1, 0);
  m.col_indices.reserve(entries_.size());
  m.values.reserve(entries_.size());

  std::size_t k = 0;
  while (k < order.size()) {
    const Entry& first = entries_[order[k]];
    double v = 0.0;
    std::size_t l = k;
    while (l < order.size() && entries_[order[l]].row == first.row &&
           entries_[order[l]].col == first.col) {
      v += entries_[order[l]].value;
      ++l;
    }
    if (!(drop_zeros && v == 0.0)) {
      m.col_indices.push_back(first.col);
      m.values.push_back(v);
      ++m.row_offsets[first.row + 1];
    }
    k = l;
  }
  std::partial_sum(m.row_offsets.begin(), m.row_offsets.end(), m.row_offsets.begin());
  return m;
}

SparseMatrix identity_matrix(std::size_t n) {
  SparseMatrix m;
  m.n_rows = m.n_cols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) m.row_offsets[i] = i;
  std::iota(m.col_indices.begin(), m.col_indices.end(), std::size_t{0});
  return m;
}

SparseMatrix from_dense(const std::vector<std::vector<double>>& rows) {
  const std::size_t n_cols = rows.empty() ? 0 : rows.front().size();
  TripletBuilder b(rows.size(), n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n_cols) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (rows[i][j] != 0.0) b.add(i, j, rows[i][j]);
    }
  }
  return b.finalize();
}

std::vector<std::vector<double>> to_dense(const SparseMatrix& a) {
  std::vector<std::vector<double>> d(a.n_rows, std::vector<double>(a.n_cols, 0.0));
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      d[i][a.col_indices[p]] = a.values[p];
    }
  }
  return d;
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                const SparseMatrix& b) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) {
    throw std::invalid_argument("linear_combination: shape mismatch");
  }
  SparseMatrix m;
  m.n_rows = a.n_rows;
  m.n_cols = a.n_cols;
  m.row_offsets.assign(a.n_rows + 1, 0);
  m.col_indices.reserve(std::max(a.nnz(), b.nnz()));
  m.values.reserve(std::max(a.nnz(), b.nnz()));
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    std::size_t p = a.row_offsets[i];
    std::size_t q = b.row_offsets[i];
    const std::size_t pe = a.row_offsets[i + 1];
    const std::size_t qe = b.row_offsets[i + 1];
    while (p < pe || q < qe) {
      std::size_t col;
      double v;
      if (q >= qe || (p < pe && a.col_indices[p] < b.col_indices[q])) {
        col = a.col_indices[p];
        v = alpha * a.values[p++];
      } else if (p >= pe || b.col_indices[q] < a.col_indices[p]) {
        col = b.col_indices[q];
        v = beta * b.values[q++];
      } else {
        col = a.col_indices[p];
        v = alpha * a.values[p++] + beta * b.values[q++];
      }
      if (v != 0.0) {
        m.col_indices.push_back(col);
        m.values.push_back(v);
      }
    }
    m.row_offsets[i + 1] = m.values.size();
  }
  return m;
}

SparseMatrix block_2x2(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                       const SparseMatrix& a22) {
  const std::size_t n = a11.n_rows;
  for (const SparseMatrix* blk : {&a11, &a12, &a21, &a22}) {
    if (blk->n_rows != n || blk->n_cols != n) {
      throw std::invalid_argument("block_2x2: blocks must be square and of equal size");
    }
  }
  SparseMatrix m;
  m.n_rows = m.n_cols = 2 * n;
  m.row_offsets.assign(2 * n + 1, 0);
  m.col_indices.reserve(a11.nnz() + a12.nnz() + a21.nnz() + a22.nnz());
  m.values.reserve(m.col_indices.capacity());
  auto append_row = [&](const SparseMatrix& left, const SparseMatrix& right, std::size_t i) {
    for (std::size_t p = left.row_offsets[i]; p < left.row_offsets[i + 1]; ++p) {
      m.col_indices.push_back(left.col_indices[p]);
      m.values.push_back(left.values[p]);
    }
    for (std::size_t p = right.row_offsets[i]; p < right.row_offsets[i + 1]; ++p) {
      m.col_indices.push_back(n + right.col_indices[p]);
      m.values.push_back(right.values[p]);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    append_row(a11, a12, i);
    m.row_offsets[i + 1] = m.values.size();
  }
  for (std::size_t i = 0; i < n; ++i) {
    append_row(a21, a22, i);
    m.row_offsets[n + i + 1] = m.values.size();
  }
  return m;
}

SparseMatrix transpose(const SparseMatrix& a) {
  TripletBuilder b(a.n_cols, a.n_rows);
  b.reserve(a.nnz());
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      b.add(a.col_indices[p], i, a.values[p]);
    }
  }
  return b.finalize(false);
}

SparseMatrix pruned(SparseMatrix a) {
  std::size_t out = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    const std::size_t end = a.row_offsets[i + 1];
    for (std::size_t p = start; p < end; ++p) {
      if (a.values[p] != 0.0) {
        a.col_indices[out] = a.col_indices[p];
        a.values[out] = a.values[p];
        ++out;
      }
    }
    start = end;
    a.row_offsets[i + 1] = out;
  }
  a.col_indices.resize(out);
  a.values.resize(out);
  return a;
}

std::vector<double> multiply(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n_rows, 0.0);
  multiply_into(a, x, y);
  return y;
}

void multiply_into(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n_cols || y.size() != a.n_rows) {
    throw std::invalid_argument("multiply: dimension mismatch");
  }
  kernels::omp::spmv(a.view(), x, y);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  return kernels::omp::dot(x, y);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

}  // namespace phenopf
