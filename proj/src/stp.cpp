#include "zdkit/stp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "zdkit/error.hpp"

namespace zdkit {

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    fail(ErrorKind::capacity, "matrix dimension overflow (" + std::to_string(a) + " x " + std::to_string(b) + ")");
  }
  return a * b;
}

std::string shape(const DenseMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::dimension, std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::validation: return "validation";
    case ErrorKind::analysis: return "analysis";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(checked_mul(rows, cols), 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != checked_mul(rows, cols)) {
    fail(ErrorKind::dimension, "matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " needs " +
                                   std::to_string(rows * cols) + " entries, got " + std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) fail(ErrorKind::domain, "matrix entries must be finite");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) fail(ErrorKind::dimension, "ragged rows in matrix literal");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return DenseMatrix(rows.size(), cols, std::move(entries));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> tmp;
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
  return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

DenseMatrix DenseMatrix::row(std::span<const double> values) {
  return DenseMatrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

double DenseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    fail(ErrorKind::domain, "index (" + std::to_string(r) + "," + std::to_string(c) + ") outside " + shape(*this));
  }
  return (*this)(r, c);
}

std::vector<double> DenseMatrix::row_vector(std::size_t r) const {
  auto v = row_view(r);
  return {v.begin(), v.end()};
}

std::vector<double> DenseMatrix::col_vector(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::dimension, "product: " + shape(a) + " * " + shape(b));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "sum");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "difference");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.entries_) v *= s;
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

DenseMatrix delta(std::size_t k, std::size_t i) {
  if (k == 0 || i == 0 || i > k) {
    fail(ErrorKind::domain, "delta_" + std::to_string(k) + "^" + std::to_string(i) + " is undefined");
  }
  DenseMatrix d(k, 1);
  d(i - 1, 0) = 1.0;
  return d;
}

DenseMatrix logical_matrix(std::size_t n, std::span<const std::size_t> indices) {
  DenseMatrix m(n, indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] == 0 || indices[j] > n) {
      fail(ErrorKind::domain, "logical matrix index " + std::to_string(indices[j]) + " outside 1.." + std::to_string(n));
    }
    m(indices[j] - 1, j) = 1.0;
  }
  return m;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(checked_mul(a.rows(), b.rows()), checked_mul(a.cols(), b.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

DenseMatrix stp(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::domain, "stp of an empty matrix");
  const std::size_t n = a.cols();
  const std::size_t p = b.rows();
  if (n == p) return a * b;
  const std::size_t t = checked_mul(n / std::gcd(n, p), p);
  return kron(a, DenseMatrix::identity(t / n)) * kron(b, DenseMatrix::identity(t / p));
}

DenseMatrix khatri_rao(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) fail(ErrorKind::dimension, "khatri_rao: column counts differ (" + shape(a) + ", " + shape(b) + ")");
  DenseMatrix out(checked_mul(a.rows(), b.rows()), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < b.rows(); ++k) out(i * b.rows() + k, c) = a(i, c) * b(k, c);
  return out;
}

DenseMatrix khatri_rao(std::span<const DenseMatrix> factors) {
  if (factors.empty()) fail(ErrorKind::domain, "khatri_rao of an empty list");
  DenseMatrix acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = khatri_rao(acc, factors[i]);
  return acc;
}

DenseMatrix structure_matrix(std::size_t n, std::span<const std::size_t> table) {
  for (std::size_t j = 0; j < table.size(); ++j) {
    if (table[j] == 0 || table[j] > n) {
      fail(ErrorKind::domain, "structure_matrix: f(" + std::to_string(j + 1) + ") = " + std::to_string(table[j]) +
                                  " outside 1.." + std::to_string(n));
    }
  }
  return logical_matrix(n, table);
}

bool is_column_stochastic(const DenseMatrix& a, double tol) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (a(r, c) < -tol) return false;
      sum += a(r, c);
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool is_logical(const DenseMatrix& a) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    std::size_t ones = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const double v = a(r, c);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

}  // namespace zdkit
