#include "zdkit/simulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "zdkit/error.hpp"
#include "zdkit/evolution.hpp"

namespace zdkit {

namespace {

struct Sampler {
  std::size_t n = 0;
  std::vector<double> cdf;             // column-major cumulative sums
  std::vector<std::size_t> last_live;  // last state with positive probability per column

  explicit Sampler(const DenseMatrix& l) : n(l.rows()), cdf(n * n), last_live(n, 0) {
    if (l.rows() != l.cols() || l.empty()) fail(ErrorKind::dimension, "simulation needs a square transition matrix");
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double p = l(r, c);
        if (p < -1e-9) fail(ErrorKind::validation, "column " + std::to_string(c + 1) + " has a negative probability");
        acc += std::max(p, 0.0);
        cdf[c * n + r] = acc;
        if (p > 0.0) last_live[c] = r;
      }
      if (std::abs(acc - 1.0) > 1e-9) {
        fail(ErrorKind::validation, "column " + std::to_string(c + 1) + " sums to " + std::to_string(acc));
      }
      for (std::size_t r = 0; r < n; ++r) cdf[c * n + r] /= acc;
    }
  }

  std::size_t next(std::size_t current, std::mt19937_64& rng) const {
    const double u = unit_uniform(rng);
    const auto first = cdf.begin() + static_cast<std::ptrdiff_t>(current * n);
    const auto it = std::upper_bound(first, first + static_cast<std::ptrdiff_t>(n), u);
    const auto r = static_cast<std::size_t>(it - first);
    return std::min(r, last_live[current]);
  }
};

void finish(Trajectory& t, const std::vector<std::size_t>& counts, std::size_t counted,
            std::span<const std::vector<double>> payoff_vectors) {
  t.empirical.assign(counts.size(), 0.0);
  for (std::size_t s = 0; s < counts.size(); ++s)
    t.empirical[s] = static_cast<double>(counts[s]) / static_cast<double>(counted);
  t.payoffs.clear();
  for (const auto& v : payoff_vectors) {
    if (v.size() != counts.size()) fail(ErrorKind::dimension, "payoff vector length does not match the chain");
    double e = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) e += v[s] * t.empirical[s];
    t.payoffs.push_back(e);
  }
}

}  // namespace

Trajectory simulate(const DenseMatrix& l, std::size_t start, std::size_t steps, std::uint64_t seed,
                    std::span<const std::vector<double>> payoff_vectors) {
  const Sampler sampler(l);
  if (steps < 1) fail(ErrorKind::domain, "simulation needs T >= 1");
  if (start < 1 || start > sampler.n) {
    fail(ErrorKind::domain, "start profile " + std::to_string(start) + " outside 1.." + std::to_string(sampler.n));
  }
  Trajectory t;
  t.seed = seed;
  t.length = steps;
  t.burn_in = steps / 10;
  t.visited.reserve(steps);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> counts(sampler.n, 0);
  std::size_t state = start - 1;
  for (std::size_t step = 0; step < steps; ++step) {
    state = sampler.next(state, rng);
    t.visited.push_back(state + 1);
    if (step >= t.burn_in) ++counts[state];
  }
  finish(t, counts, steps - t.burn_in, payoff_vectors);
  return t;
}

Trajectory simulate_parallel(const DenseMatrix& l, std::size_t start, std::size_t steps, std::uint64_t seed,
                             std::size_t chains, std::span<const std::vector<double>> payoff_vectors) {
  if (chains < 1) fail(ErrorKind::domain, "need at least one chain");
  std::vector<Trajectory> parts(chains);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        parts[c] = simulate(l, start, steps, seed + c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Trajectory merged;
  merged.seed = seed;
  merged.length = steps * chains;
  merged.burn_in = parts.front().burn_in * chains;
  std::vector<std::size_t> counts(l.rows(), 0);
  const std::size_t counted = steps - parts.front().burn_in;
  for (auto& p : parts) {
    for (std::size_t i = p.burn_in; i < p.visited.size(); ++i) ++counts[p.visited[i] - 1];
    merged.visited.insert(merged.visited.end(), p.visited.begin(), p.visited.end());
  }
  finish(merged, counts, counted * chains, payoff_vectors);
  return merged;
}

std::vector<double> frequency_variances(const DenseMatrix& l, std::span<const double> stationary) {
  const auto n = static_cast<Eigen::Index>(l.rows());
  if (l.rows() != l.cols() || stationary.size() != l.rows()) fail(ErrorKind::dimension, "variance inputs disagree in size");
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      a(r, c) = (r == c ? 1.0 : 0.0) - l(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) +
                stationary[static_cast<std::size_t>(r)];
  const Eigen::MatrixXd fundamental = a.fullPivLu().inverse();
  std::vector<double> out(stationary.size());
  for (Eigen::Index s = 0; s < n; ++s) {
    const double u = stationary[static_cast<std::size_t>(s)];
    out[static_cast<std::size_t>(s)] = std::max(0.0, u * (1.0 - u) + 2.0 * u * (fundamental(s, s) - 1.0));
  }
  return out;
}

ComparisonReport compare_empirical_vs_exact(const Trajectory& trajectory, std::span<const double> exact,
                                            std::span<const std::vector<double>> payoff_vectors, double z_threshold,
                                            const DenseMatrix* transition) {
  if (exact.size() != trajectory.empirical.size()) fail(ErrorKind::dimension, "exact distribution has the wrong length");
  const double samples = static_cast<double>(trajectory.length - trajectory.burn_in);
  std::vector<double> variances;
  if (transition != nullptr) {
    variances = frequency_variances(*transition, exact);
  } else {
    for (double u : exact) variances.push_back(u * (1.0 - u));
  }

  ComparisonReport report;
  report.pass = true;
  for (std::size_t s = 0; s < exact.size(); ++s) {
    const double dev = trajectory.empirical[s] - exact[s];
    const double sigma = std::sqrt(variances[s] / samples);
    double z = 0.0;
    if (sigma > 0.0) {
      z = std::abs(dev) / sigma;
    } else if (dev != 0.0) {
      z = std::numeric_limits<double>::infinity();
    }
    report.deviations.push_back(dev);
    report.sigmas.push_back(sigma);
    report.z_scores.push_back(z);
    report.max_z = std::max(report.max_z, z);
    if (z > z_threshold) report.pass = false;
  }
  for (const auto& v : payoff_vectors) {
    if (v.size() != exact.size()) fail(ErrorKind::dimension, "payoff vector length does not match the chain");
    double gap = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) gap += v[s] * (trajectory.empirical[s] - exact[s]);
    report.payoff_gaps.push_back(gap);
  }
  return report;
}

}  // namespace zdkit
