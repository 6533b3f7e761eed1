#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "zdkit/error.hpp"
#include "zdkit/stp.hpp"

using zdkit::DenseMatrix;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

// Left semi-tensor product from entry formulas, without forming any Kronecker product.
DenseMatrix stp_by_index(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.cols(), p = b.rows();
  const std::size_t t = std::lcm(n, p);
  const std::size_t fa = t / n, fb = t / p;
  DenseMatrix out(a.rows() * fa, b.cols() * fb);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < t; ++k) {
        // (A (x) I_f)(i, k) = A(i/f, k/f) when i and k agree mod f, else 0.
        const double left = (i % fa == k % fa) ? a(i / fa, k / fa) : 0.0;
        const double right = (k % fb == j % fb) ? b(k / fb, j / fb) : 0.0;
        s += left * right;
      }
      out(i, j) = s;
    }
  return out;
}

}  // namespace

TEST_CASE("stp reduces to the ordinary product on matching dimensions") {
  std::mt19937_64 rng(1);
  const auto a = random_matrix(3, 4, rng);
  const auto b = random_matrix(4, 2, rng);
  CHECK(zdkit::stp(a, b) == a * b);
}

TEST_CASE("stp agrees with the index formula on mismatched dimensions") {
  std::mt19937_64 rng(2);
  for (auto [ar, ac, br, bc] : std::vector<std::array<std::size_t, 4>>{{2, 3, 2, 2}, {1, 2, 4, 3}, {3, 6, 4, 1}, {2, 4, 6, 2}}) {
    const auto a = random_matrix(ar, ac, rng);
    const auto b = random_matrix(br, bc, rng);
    const auto got = zdkit::stp(a, b);
    const auto want = stp_by_index(a, b);
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    CHECK(zdkit::max_abs_diff(got, want) < 1e-12);
  }
}

TEST_CASE("stp is associative") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_matrix(dim(rng), dim(rng), rng);
    const auto b = random_matrix(dim(rng), dim(rng), rng);
    const auto c = random_matrix(dim(rng), dim(rng), rng);
    const auto left = zdkit::stp(zdkit::stp(a, b), c);
    const auto right = zdkit::stp(a, zdkit::stp(b, c));
    REQUIRE(left.rows() == right.rows());
    REQUIRE(left.cols() == right.cols());
    CHECK(zdkit::max_abs_diff(left, right) < 1e-10);
  }
}

TEST_CASE("stp of delta vectors encodes profiles with the last factor fastest") {
  // delta_2^i |x delta_3^j = delta_6^{3(i-1)+j}
  for (std::size_t i = 1; i <= 2; ++i)
    for (std::size_t j = 1; j <= 3; ++j) CHECK(zdkit::stp(zdkit::delta(2, i), zdkit::delta(3, j)) == zdkit::delta(6, 3 * (i - 1) + j));
}

TEST_CASE("kron satisfies the mixed-product rule") {
  std::mt19937_64 rng(4);
  const auto a = random_matrix(2, 3, rng), c = random_matrix(3, 2, rng);
  const auto b = random_matrix(3, 2, rng), d = random_matrix(2, 4, rng);
  CHECK(zdkit::max_abs_diff(zdkit::kron(a, b) * zdkit::kron(c, d), zdkit::kron(a * c, b * d)) < 1e-12);
}

TEST_CASE("khatri-rao columns are Kronecker products of columns") {
  std::mt19937_64 rng(5);
  const auto a = random_matrix(2, 5, rng);
  const auto b = random_matrix(3, 5, rng);
  const auto kr = zdkit::khatri_rao(a, b);
  REQUIRE(kr.rows() == 6);
  REQUIRE(kr.cols() == 5);
  for (std::size_t c = 0; c < 5; ++c) {
    const auto col = zdkit::kron(DenseMatrix::column(a.col_vector(c)), DenseMatrix::column(b.col_vector(c)));
    for (std::size_t r = 0; r < 6; ++r) CHECK(kr(r, c) == col(r, 0));
  }
  CHECK_THROWS_AS(zdkit::khatri_rao(a, random_matrix(3, 4, rng)), zdkit::Error);
}

TEST_CASE("khatri-rao of column-stochastic factors is column-stochastic") {
  std::mt19937_64 rng(6);
  const std::vector<DenseMatrix> factors{oracle::random_rule(2, 12, rng), oracle::random_rule(3, 12, rng),
                                         oracle::random_rule(2, 12, rng)};
  const auto l = zdkit::khatri_rao(factors);
  CHECK(l.rows() == 12);
  CHECK(zdkit::is_column_stochastic(l, 1e-12));
}

TEST_CASE("structure matrices are logical and compose by stp") {
  const std::vector<std::size_t> f{2, 1, 2};  // {1,2,3} -> {1,2}
  const auto m = zdkit::structure_matrix(2, f);
  CHECK(zdkit::is_logical(m));
  for (std::size_t j = 1; j <= 3; ++j) CHECK(zdkit::stp(m, zdkit::delta(3, j)) == zdkit::delta(2, f[j - 1]));
  CHECK_THROWS_AS(zdkit::structure_matrix(2, std::vector<std::size_t>{3}), zdkit::Error);
}

TEST_CASE("matrix construction rejects bad input") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), zdkit::Error);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::nan("")}), zdkit::Error);
  CHECK_THROWS_AS(DenseMatrix::from_rows({{1.0, 2.0}, {3.0}}), zdkit::Error);
  CHECK_THROWS_AS(zdkit::delta(3, 0), zdkit::Error);
  CHECK_THROWS_AS(zdkit::delta(3, 4), zdkit::Error);
}
