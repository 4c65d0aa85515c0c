#include "mopo/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mopo {
namespace {

double subset_hv(const std::vector<Vec>& values, const std::vector<int>& subset,
                 const HypervolumeMethod& method) {
  FrontPoints pts;
  pts.points.reserve(subset.size());
  for (int idx : subset) pts.points.push_back(values[idx]);
  return hypervolume(pts, method);
}

std::uint64_t n_choose_k(int n, int k) {
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

}  // namespace

double DiscreteInstance::width_of(const std::vector<int>& subset) const {
  double total = 0.0;
  for (int idx : subset) {
    for (double ci : widths[idx]) total += ci;
  }
  return total;
}

DiscreteInstance random_instance(int pool_size, int K, int m, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DiscreteInstance inst;
  inst.K = K;
  inst.true_values.resize(pool_size, Vec(m));
  inst.est_values.resize(pool_size, Vec(m));
  inst.widths.resize(pool_size, Vec(m));
  for (int p = 0; p < pool_size; ++p) {
    for (int i = 0; i < m; ++i) {
      inst.true_values[p][i] = unif(rng);
      inst.widths[p][i] = 0.3 * unif(rng);
      const double noise = (2.0 * unif(rng) - 1.0) * inst.widths[p][i];
      inst.est_values[p][i] = std::clamp(inst.true_values[p][i] + noise, 0.0, 1.0);
    }
  }
  return inst;
}

std::pair<std::vector<int>, double> brute_force_best_subset(const std::vector<Vec>& values,
                                                            int K,
                                                            const HypervolumeMethod& method) {
  const int pool = static_cast<int>(values.size());
  if (K < 1 || K > pool) throw std::invalid_argument("brute force: invalid K");
  if (n_choose_k(pool, K) > 1000000ull) {
    throw std::invalid_argument("brute force: instance too large");
  }
  std::vector<int> subset(K);
  for (int i = 0; i < K; ++i) subset[i] = i;
  std::vector<int> best = subset;
  double best_vol = -std::numeric_limits<double>::infinity();
  while (true) {
    const double vol = subset_hv(values, subset, method);
    if (vol > best_vol) {
      best_vol = vol;
      best = subset;
    }
    // next lexicographic combination
    int pos = K - 1;
    while (pos >= 0 && subset[pos] == pool - K + pos) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (int i = pos + 1; i < K; ++i) subset[i] = subset[i - 1] + 1;
  }
  return {best, best_vol};
}

bool check_mean_bound(const DiscreteInstance& inst, double slack) {
  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  const auto [s_star, opt_vol] = brute_force_best_subset(inst.true_values, inst.K, method);
  const auto [s_hat, _] = brute_force_best_subset(inst.est_values, inst.K, method);
  const double achieved = subset_hv(inst.true_values, s_hat, method);
  return achieved >= opt_vol - inst.width_of(s_star) - inst.width_of(s_hat) - slack;
}

bool check_pessimism_bound(const DiscreteInstance& inst, double slack) {
  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  std::vector<Vec> lcb = inst.est_values;
  for (std::size_t p = 0; p < lcb.size(); ++p) {
    for (std::size_t i = 0; i < lcb[p].size(); ++i) {
      lcb[p][i] = std::clamp(inst.est_values[p][i] - inst.widths[p][i], 0.0, 1.0);
    }
  }
  const auto [s_star, opt_vol] = brute_force_best_subset(inst.true_values, inst.K, method);
  const auto [s_hat, _] = brute_force_best_subset(lcb, inst.K, method);
  const double achieved = subset_hv(inst.true_values, s_hat, method);
  return achieved >= opt_vol - 2.0 * inst.width_of(s_star) - slack;
}

bool check_hv_error_bound(const std::vector<Vec>& true_values,
                          const std::vector<Vec>& est_values, const std::vector<Vec>& widths,
                          double slack) {
  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  FrontPoints pts_true{true_values, {}};
  FrontPoints pts_est{est_values, {}};
  double budget = 0.0;
  for (const Vec& w : widths) {
    for (double ci : w) budget += ci;
  }
  return std::abs(hypervolume(pts_true, method) - hypervolume(pts_est, method)) <=
         budget + slack;
}

std::vector<Vec> coverage_simulation(const BenchmarkProblem& problem,
                                     const LoggingPolicy& logging, const PolicySet& policies,
                                     double beta, double sigma, int n, int trials,
                                     std::uint64_t seed) {
  const int m = problem.num_objectives();
  const int num_actions = problem.num_actions();
  const int num_policies = static_cast<int>(policies.size());
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Fixed contexts: true values and widths are deterministic per policy.
  std::vector<Vec> contexts(n, Vec(problem.context_dim()));
  for (Vec& x : contexts) {
    for (double& xi : x) xi = unif(rng);
  }
  std::vector<Vec> pi0(n), pi0_cdf(n);
  std::vector<std::vector<Vec>> rewards(n, std::vector<Vec>(num_actions));
  for (int t = 0; t < n; ++t) {
    pi0[t] = logging_probabilities(logging, contexts[t]);
    pi0_cdf[t].resize(num_actions);
    double acc = 0.0;
    for (int a = 0; a < num_actions; ++a) {
      acc += pi0[t][a];
      pi0_cdf[t][a] = acc;
    }
    for (int a = 0; a < num_actions; ++a) rewards[t][a] = problem.mean_reward(contexts[t], a);
  }

  std::vector<std::vector<Vec>> ratios(num_policies, std::vector<Vec>(n, Vec(num_actions)));
  Vec width(num_policies, 0.0);
  for (int p = 0; p < num_policies; ++p) {
    double sum_max_sq = 0.0;
    for (int t = 0; t < n; ++t) {
      const Vec probs = action_probabilities(policies[p], contexts[t], problem.actions);
      double max_ratio = 0.0;
      for (int a = 0; a < num_actions; ++a) {
        ratios[p][t][a] = probs[a] / pi0[t][a];
        max_ratio = std::max(max_ratio, ratios[p][t][a]);
      }
      sum_max_sq += max_ratio * max_ratio;
    }
    width[p] = beta * sigma * std::sqrt(sum_max_sq) / n;
  }

  std::vector<std::vector<int>> failures(num_policies, std::vector<int>(m, 0));
  std::vector<int> drawn_action(n);
  std::vector<Vec> drawn_reward(n, Vec(m));
  for (int trial = 0; trial < trials; ++trial) {
    for (int t = 0; t < n; ++t) {
      const double u = unif(rng);
      int a = static_cast<int>(std::lower_bound(pi0_cdf[t].begin(), pi0_cdf[t].end(), u) -
                               pi0_cdf[t].begin());
      a = std::min(a, num_actions - 1);
      drawn_action[t] = a;
      for (int i = 0; i < m; ++i) drawn_reward[t][i] = rewards[t][a][i] + sigma * gauss(rng);
    }
    for (int p = 0; p < num_policies; ++p) {
      // The concentration statement fixes the logged actions: only the reward
      // noise is random, so the estimate is compared against its conditional
      // mean sum_t w_t r_i(x_t, a_t) / n under the realized actions.
      Vec est(m, 0.0), cond(m, 0.0);
      for (int t = 0; t < n; ++t) {
        const double w = ratios[p][t][drawn_action[t]];
        for (int i = 0; i < m; ++i) {
          est[i] += w * drawn_reward[t][i];
          cond[i] += w * rewards[t][drawn_action[t]][i];
        }
      }
      for (int i = 0; i < m; ++i) {
        if (std::abs(est[i] - cond[i]) / n > width[p]) failures[p][i] += 1;
      }
    }
  }

  std::vector<Vec> rate(num_policies, Vec(m));
  for (int p = 0; p < num_policies; ++p) {
    for (int i = 0; i < m; ++i) {
      rate[p][i] = static_cast<double>(failures[p][i]) / trials;
    }
  }
  return rate;
}

}  // namespace mopo
