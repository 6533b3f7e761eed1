#include "zdkit/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numeric>

#include "zdkit/error.hpp"

namespace zdkit {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  return Eigen::Map<const RowMajor>(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                                    static_cast<Eigen::Index>(m.cols()));
}

void require_square(const DenseMatrix& m, const char* op) {
  if (m.rows() != m.cols() || m.empty()) {
    fail(ErrorKind::dimension, std::string(op) + ": expected a non-empty square matrix, got " +
                                   std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

DenseMatrix minus_identity(const DenseMatrix& l) {
  DenseMatrix m = l;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1.0;
  return m;
}

// Boolean square matrix with bitset rows.
class Pattern {
 public:
  explicit Pattern(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
  bool get(std::size_t r, std::size_t c) const { return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U; }

  Pattern times(const Pattern& b) const {
    Pattern out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t* dst = &out.bits_[i * words_];
      for (std::size_t k = 0; k < n_; ++k) {
        if (!get(i, k)) continue;
        const std::uint64_t* src = &b.bits_[k * words_];
        for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
      }
    }
    return out;
  }

  bool full() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t c = 0; c < n_; ++c)
        if (!get(i, c)) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

bool strongly_connected(const Pattern& p, std::size_t n) {
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        const bool edge = forward ? p.get(w, v) : p.get(v, w);
        if (edge && !seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

// gcd of cycle lengths via BFS levels; the graph has an edge c -> r when L(r, c) > 0.
std::size_t period(const Pattern& p, std::size_t n) {
  std::vector<std::ptrdiff_t> level(n, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (std::size_t w = 0; w < n; ++w) {
      if (p.get(w, v) && level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::size_t g = 0;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (p.get(w, v)) g = std::gcd(g, static_cast<std::size_t>(std::abs(level[v] + 1 - level[w])));
  return g;
}

}  // namespace

StrategyRule::StrategyRule(int player, DenseMatrix probabilities, double tol)
    : player_(player), matrix_(std::move(probabilities)) {
  if (matrix_.empty()) fail(ErrorKind::dimension, "strategy rule is empty");
  for (std::size_t r = 0; r < matrix_.cols(); ++r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < matrix_.rows(); ++j) {
      const double p = matrix_(j, r);
      if (p < -tol || p > 1.0 + tol) {
        fail(ErrorKind::validation, "rule of player " + std::to_string(player) + ": probability " + std::to_string(p) +
                                        " for strategy " + std::to_string(j + 1) + " at profile " +
                                        std::to_string(r + 1) + " is outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      fail(ErrorKind::validation, "rule of player " + std::to_string(player) + ": column for profile " +
                                      std::to_string(r + 1) + " sums to " + std::to_string(sum));
    }
  }
}

std::vector<double> StrategyRule::row(int strategy) const {
  if (strategy < 1 || static_cast<std::size_t>(strategy) > matrix_.rows()) {
    fail(ErrorKind::domain, "strategy " + std::to_string(strategy) + " outside rule of player " + std::to_string(player_));
  }
  return matrix_.row_vector(static_cast<std::size_t>(strategy - 1));
}

StrategyRule build_rule(int player, const std::vector<std::vector<double>>& rows, double tol) {
  return StrategyRule(player, DenseMatrix::from_rows(rows), tol);
}

StrategyRule random_interior_rule(int player, std::size_t strategies, std::size_t profiles, std::mt19937_64& rng) {
  DenseMatrix m(strategies, profiles);
  for (std::size_t r = 0; r < profiles; ++r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < strategies; ++j) {
      m(j, r) = 0.01 + 0.99 * (1.0 - unit_uniform(rng));
      sum += m(j, r);
    }
    for (std::size_t j = 0; j < strategies; ++j) m(j, r) /= sum;
  }
  return StrategyRule(player, std::move(m));
}

TransitionMatrix::TransitionMatrix(DenseMatrix matrix, std::vector<int> players)
    : matrix_(std::move(matrix)), players_(std::move(players)) {
  require_square(matrix_, "transition matrix");
  if (!is_column_stochastic(matrix_, 1e-9)) fail(ErrorKind::validation, "transition matrix is not column-stochastic");
}

TransitionMatrix build_pee(std::span<const StrategyRule> rules) {
  if (rules.empty()) fail(ErrorKind::domain, "no strategy rules supplied");
  const std::size_t kappa = rules.front().profile_count();
  std::size_t product = 1;
  std::vector<DenseMatrix> factors;
  std::vector<int> players;
  for (const auto& rule : rules) {
    if (rule.profile_count() != kappa) {
      fail(ErrorKind::dimension, "rule of player " + std::to_string(rule.player()) + " has " +
                                     std::to_string(rule.profile_count()) + " profile columns, expected " +
                                     std::to_string(kappa));
    }
    product *= rule.strategy_count();
    factors.push_back(rule.matrix());
    players.push_back(rule.player());
  }
  if (product != kappa) {
    fail(ErrorKind::dimension, "strategy counts multiply to " + std::to_string(product) + " but rules have " +
                                   std::to_string(kappa) + " profile columns");
  }
  return TransitionMatrix(khatri_rao(factors), std::move(players));
}

Primitivity is_primitive(const DenseMatrix& l, double tol) {
  require_square(l, "is_primitive");
  const std::size_t n = l.rows();
  Pattern base(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (l(r, c) > tol) base.set(r, c);
  if (!strongly_connected(base, n) || period(base, n) != 1) return {};

  // Irreducible and aperiodic: some power within the Wielandt bound is full.
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  Pattern power = base;
  for (std::size_t s = 1; s <= bound; ++s) {
    if (power.full()) return {true, s};
    power = power.times(base);
  }
  fail(ErrorKind::internal, "aperiodic irreducible pattern not full within the Wielandt bound");
}

std::vector<double> stationary_nullspace(const DenseMatrix& l, double residual_tol) {
  require_square(l, "stationary_nullspace");
  const auto n = static_cast<Eigen::Index>(l.rows());
  Eigen::MatrixXd a = to_eigen(l) - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) fail(ErrorKind::analysis, "L - I does not have a one-dimensional null space");
  Eigen::VectorXd u = lu.solve(b);
  const Eigen::VectorXd r = to_eigen(l) * u - u;
  const double residual = r.cwiseAbs().maxCoeff();
  if (!(residual <= residual_tol)) {
    fail(ErrorKind::numeric, "stationary solve residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return {u.data(), u.data() + n};
}

std::vector<double> stationary_distribution(const DenseMatrix& l) {
  const auto verdict = is_primitive(l);
  if (!verdict.primitive) fail(ErrorKind::analysis, "transition matrix is not primitive; stationary distribution is not unique");
  return stationary_nullspace(l);
}

PowerIteration stationary_power_iteration(const DenseMatrix& l, double tol, std::size_t max_iterations) {
  require_square(l, "stationary_power_iteration");
  const auto n = static_cast<Eigen::Index>(l.rows());
  const Eigen::MatrixXd m = to_eigen(l);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd next = m * u;
    next /= next.sum();
    const double step = (next - u).cwiseAbs().maxCoeff();
    u = std::move(next);
    if (step < tol) return {{u.data(), u.data() + n}, it};
  }
  fail(ErrorKind::numeric, "power iteration did not converge after " + std::to_string(max_iterations) + " iterations");
}

std::size_t numerical_rank(const DenseMatrix& m) {
  if (m.empty()) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double threshold = static_cast<double>(std::max(m.rows(), m.cols())) *
                           std::numeric_limits<double>::epsilon() * sigma(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > threshold) ++rank;
  return rank;
}

std::size_t rank_defect(const DenseMatrix& l) {
  require_square(l, "rank_defect");
  return l.rows() - numerical_rank(minus_identity(l));
}

double determinant(const DenseMatrix& m) {
  require_square(m, "determinant");
  return Eigen::FullPivLU<Eigen::MatrixXd>(to_eigen(m)).determinant();
}

DenseMatrix adjugate(const DenseMatrix& m, std::size_t cap) {
  require_square(m, "adjugate");
  const std::size_t n = m.rows();
  if (n > cap) {
    fail(ErrorKind::capacity, "adjugate of a " + std::to_string(n) + "x" + std::to_string(n) +
                                  " matrix exceeds the cofactor cap " + std::to_string(cap) +
                                  "; use rank_defect / stationary_distribution instead");
  }
  if (n == 1) return DenseMatrix::identity(1);
  const Eigen::MatrixXd a = to_eigen(m);
  const auto k = static_cast<Eigen::Index>(n - 1);
  DenseMatrix adj(n, n);
  Eigen::MatrixXd minor(k, k);
  for (Eigen::Index i = 0; i <= k; ++i) {
    for (Eigen::Index j = 0; j <= k; ++j) {
      // minor without row i and column j
      for (Eigen::Index r = 0, mr = 0; r <= k; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, mc = 0; c <= k; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) =
          sign * Eigen::FullPivLU<Eigen::MatrixXd>(minor).determinant();
    }
  }
  return adj;
}

PowerLimit power_limit(const DenseMatrix& l, std::uint64_t max_t, double tol) {
  require_square(l, "power_limit");
  if (max_t < 1) fail(ErrorKind::domain, "power_limit needs max_t >= 1");
  PowerLimit out;
  DenseMatrix power = l;
  std::uint64_t exponent = 1;
  auto stable = [&](const DenseMatrix& p) { return max_abs_diff(p * l, p) < tol; };
  if (max_t < 2) {
    out.converged = stable(power);
  }
  while (exponent <= max_t / 2) {
    DenseMatrix next = power * power;
    exponent *= 2;
    const bool settled = max_abs_diff(next, power) < tol && stable(next);
    power = std::move(next);
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.exponent = exponent;
  if (out.converged) {
    out.identical_columns = true;
    for (std::size_t c = 1; c < power.cols() && out.identical_columns; ++c)
      for (std::size_t r = 0; r < power.rows(); ++r)
        if (std::abs(power(r, c) - power(r, 0)) > 1e-9) {
          out.identical_columns = false;
          break;
        }
  }
  out.limit = std::move(power);
  return out;
}

EffectivenessConditions effectiveness_conditions(const DenseMatrix& l, double tol) {
  const auto limit = power_limit(l, std::uint64_t{1} << 50, tol);
  return {limit.converged && limit.identical_columns, rank_defect(l) == 1};
}

MarkovReport analyze(const DenseMatrix& l, double tol) {
  MarkovReport report;
  const auto p = is_primitive(l, tol);
  report.primitive = p.primitive;
  report.witness = p.witness;
  report.rank_defect = rank_defect(l);
  if (report.rank_defect == 1) {
    try {
      report.stationary = stationary_nullspace(l);
    } catch (const Error&) {
      report.stationary.clear();
    }
  }
  const auto limit = power_limit(l);
  report.limit_converged = limit.converged;
  report.limit_identical_columns = limit.identical_columns;
  return report;
}

}  // namespace zdkit
