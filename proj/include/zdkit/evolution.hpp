#pragma once

// Strategy evolutionary equations, the profile transition matrix and the
// Markov-chain analysis needed to decide whether designed relations hold.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "zdkit/stp.hpp"

namespace zdkit {

// A player's memory-one mixed rule: k_i x kappa, entry (j, r) is the
// probability of playing j after profile r. Columns sum to one.
class StrategyRule {
 public:
  StrategyRule(int player, DenseMatrix probabilities, double tol = 1e-9);

  int player() const noexcept { return player_; }
  const DenseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t strategy_count() const noexcept { return matrix_.rows(); }
  std::size_t profile_count() const noexcept { return matrix_.cols(); }
  // Row j (1-based) as a kappa-length vector.
  std::vector<double> row(int strategy) const;

 private:
  int player_;
  DenseMatrix matrix_;
};

StrategyRule build_rule(int player, const std::vector<std::vector<double>>& rows, double tol = 1e-9);

// Rule whose entries are drawn from (0.01, 1] and normalized per column.
StrategyRule random_interior_rule(int player, std::size_t strategies, std::size_t profiles, std::mt19937_64& rng);

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class TransitionMatrix {
 public:
  TransitionMatrix(DenseMatrix matrix, std::vector<int> players);

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return matrix_.rows(); }
  const std::vector<int>& players() const noexcept { return players_; }

 private:
  DenseMatrix matrix_;
  std::vector<int> players_;
};

// L = L_1 * L_2 * ... * L_n (Khatri-Rao, left-associative).
TransitionMatrix build_pee(std::span<const StrategyRule> rules);

struct Primitivity {
  bool primitive = false;
  std::size_t witness = 0;  // smallest s with L^s > 0, when primitive
};

// Decided on the positivity pattern of L (entries > tol) up to the Wielandt
// bound (kappa-1)^2 + 1.
Primitivity is_primitive(const DenseMatrix& l, double tol = 1e-12);

// Solves (L - I) u = 0 with sum(u) = 1. Throws analysis error if L is not primitive.
std::vector<double> stationary_distribution(const DenseMatrix& l);
// Same solve without the primitivity precondition; requires a one-dimensional null space.
std::vector<double> stationary_nullspace(const DenseMatrix& l, double residual_tol = 1e-10);

struct PowerIteration {
  std::vector<double> vector;
  std::size_t iterations = 0;
};

// u <- L u from the uniform start until the max-norm step is below tol.
// Throws numeric error carrying the iteration count when it does not converge.
PowerIteration stationary_power_iteration(const DenseMatrix& l, double tol = 1e-14, std::size_t max_iterations = 1'000'000);

// kappa minus the numerical rank of L - I (threshold kappa * eps * sigma_max).
std::size_t rank_defect(const DenseMatrix& l);
std::size_t numerical_rank(const DenseMatrix& m);

inline constexpr std::size_t kDefaultAdjugateCap = 64;
// Transpose of the cofactor matrix. Throws capacity error above cap.
DenseMatrix adjugate(const DenseMatrix& m, std::size_t cap = kDefaultAdjugateCap);
double determinant(const DenseMatrix& m);

struct PowerLimit {
  bool converged = false;
  bool identical_columns = false;
  std::uint64_t exponent = 0;  // power reached (a power of two)
  DenseMatrix limit;           // last power computed
};

// Repeated squaring P <- P^2 until both |P_k - P_{k-1}| and |P_k L - P_k| drop below tol,
// while the exponent stays <= max_t.
PowerLimit power_limit(const DenseMatrix& l, std::uint64_t max_t = std::uint64_t{1} << 50, double tol = 1e-12);

struct EffectivenessConditions {
  bool limit = false;  // lim L^t exists and equals u 1^T
  bool rank = false;   // rank(L - I) = kappa - 1
  bool both() const noexcept { return limit && rank; }
};

EffectivenessConditions effectiveness_conditions(const DenseMatrix& l, double tol = 1e-10);

struct MarkovReport {
  bool primitive = false;
  std::size_t witness = 0;
  std::size_t rank_defect = 0;
  std::vector<double> stationary;  // empty unless a unique stationary vector exists
  bool limit_converged = false;
  bool limit_identical_columns = false;
};

MarkovReport analyze(const DenseMatrix& l, double tol = 1e-12);

}  // namespace zdkit
