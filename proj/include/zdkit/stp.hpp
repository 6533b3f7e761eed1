#pragma once

// Dense real matrices with the semi-tensor product and its relatives.
//
// Storage is row-major and 0-based. The 1-based surface (delta vectors,
// structure matrices) follows the usual delta_k^i notation.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace zdkit {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  // Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major entries; throws on count mismatch or non-finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix column(std::span<const double> values);
  static DenseMatrix row(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
  // Bounds-checked access.
  double at(std::size_t r, std::size_t c) const;

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row_view(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::vector<double> row_vector(std::size_t r) const;
  std::vector<double> col_vector(std::size_t c) const;

  DenseMatrix transpose() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(double s, const DenseMatrix& a);
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Largest absolute entrywise difference; throws on shape mismatch.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// delta_k^i as a k x 1 column (i is 1-based).
DenseMatrix delta(std::size_t k, std::size_t i);

// delta_n[i_1, ..., i_m]: the n x m logical matrix whose j-th column is delta_n^{i_j}.
DenseMatrix logical_matrix(std::size_t n, std::span<const std::size_t> indices);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Semi-tensor product: (A (x) I_{t/n}) (B (x) I_{t/p}) with t = lcm(n, p).
DenseMatrix stp(const DenseMatrix& a, const DenseMatrix& b);

// Column-wise Kronecker product of two matrices with equal column counts.
DenseMatrix khatri_rao(const DenseMatrix& a, const DenseMatrix& b);
// Left-associative fold over a non-empty list.
DenseMatrix khatri_rao(std::span<const DenseMatrix> factors);

// Structure matrix of f : {1..m} -> {1..n}; table[j-1] = f(j).
DenseMatrix structure_matrix(std::size_t n, std::span<const std::size_t> table);

bool is_column_stochastic(const DenseMatrix& a, double tol = 1e-9);
bool is_logical(const DenseMatrix& a);

}  // namespace zdkit
