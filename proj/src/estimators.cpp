#include "mopo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mopo {
namespace {

void check_propensities(const LoggedDataset& ds) {
  for (const LoggedRecord& rec : ds.records) {
    if (rec.propensity <= 0.0) throw std::runtime_error("zero propensity in logged data");
  }
}

Vec clamp01(Vec v) {
  for (double& vi : v) vi = std::clamp(vi, 0.0, 1.0);
  return v;
}

}  // namespace

Vec true_value(const BenchmarkProblem& problem, const SoftmaxPolicy& policy,
               const std::vector<Vec>& contexts) {
  if (contexts.empty()) throw std::invalid_argument("true_value: empty context list");
  const int m = problem.num_objectives();
  Vec value(m, 0.0);
  for (const Vec& x : contexts) {
    const Vec probs = action_probabilities(policy, x, problem.actions);
    for (int a = 0; a < problem.num_actions(); ++a) {
      const Vec r = problem.mean_reward(x, a);
      for (int i = 0; i < m; ++i) value[i] += probs[a] * r[i];
    }
  }
  for (double& vi : value) vi /= static_cast<double>(contexts.size());
  return value;
}

Vec ips_unclamped(const LoggedDataset& ds, const std::vector<Vec>& actions,
                  const SoftmaxPolicy& policy, double clip_m) {
  check_propensities(ds);
  Vec value(ds.m, 0.0);
  for (const LoggedRecord& rec : ds.records) {
    const Vec probs = action_probabilities(policy, rec.x, actions);
    const double w = std::min(probs[rec.a_index] / rec.propensity, clip_m);
    for (int i = 0; i < ds.m; ++i) value[i] += w * rec.y[i];
  }
  for (double& vi : value) vi /= static_cast<double>(ds.n());
  return value;
}

Vec ips(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
        double clip_m) {
  return clamp01(ips_unclamped(ds, actions, policy, clip_m));
}

std::vector<Vec> logging_distributions(const LoggedDataset& ds, const LoggingPolicy& logging) {
  std::vector<Vec> probs;
  probs.reserve(ds.records.size());
  for (const LoggedRecord& rec : ds.records) {
    probs.push_back(logging_probabilities(logging, rec.x));
  }
  return probs;
}

Vec confidence_width(const LoggedDataset& ds, const std::vector<Vec>& actions,
                     const std::vector<Vec>& logging_probs, const SoftmaxPolicy& policy,
                     const ConfidenceConfig& cfg) {
  double sum_sq = 0.0;
  for (int t = 0; t < ds.n(); ++t) {
    const Vec probs = action_probabilities(policy, ds.records[t].x, actions);
    double max_ratio = 0.0;
    for (std::size_t a = 0; a < actions.size(); ++a) {
      max_ratio = std::max(max_ratio, probs[a] / logging_probs[t][a]);
    }
    sum_sq += max_ratio * max_ratio;
  }
  const double c = cfg.beta * cfg.sigma * std::sqrt(sum_sq) / static_cast<double>(ds.n());
  return Vec(ds.m, c);
}

Vec pessimistic(const LoggedDataset& ds, const std::vector<Vec>& actions,
                const std::vector<Vec>& logging_probs, const SoftmaxPolicy& policy,
                const ConfidenceConfig& cfg) {
  const Vec raw = ips_unclamped(ds, actions, policy,
                                std::numeric_limits<double>::infinity());
  const Vec width = confidence_width(ds, actions, logging_probs, policy, cfg);
  Vec out(ds.m);
  for (int i = 0; i < ds.m; ++i) out[i] = std::clamp(raw[i] - width[i], 0.0, 1.0);
  return out;
}

RewardModel empirical_reward_model(const LoggedDataset& ds, int num_actions) {
  std::vector<Vec> sums(num_actions, Vec(ds.m, 0.0));
  std::vector<int> counts(num_actions, 0);
  Vec global(ds.m, 0.0);
  for (const LoggedRecord& rec : ds.records) {
    for (int i = 0; i < ds.m; ++i) {
      sums[rec.a_index][i] += rec.y[i];
      global[i] += rec.y[i];
    }
    counts[rec.a_index] += 1;
  }
  for (double& gi : global) gi /= static_cast<double>(ds.n());
  std::vector<Vec> means(num_actions);
  for (int a = 0; a < num_actions; ++a) {
    if (counts[a] > 0) {
      means[a] = sums[a];
      for (double& mi : means[a]) mi /= counts[a];
    } else {
      means[a] = global;
    }
  }
  return [means](const Vec&, int a_index) { return means.at(a_index); };
}

Vec dm(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
       const RewardModel& model) {
  Vec value(ds.m, 0.0);
  for (const LoggedRecord& rec : ds.records) {
    const Vec probs = action_probabilities(policy, rec.x, actions);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      const Vec rhat = model(rec.x, static_cast<int>(a));
      for (int i = 0; i < ds.m; ++i) value[i] += probs[a] * rhat[i];
    }
  }
  for (double& vi : value) vi /= static_cast<double>(ds.n());
  return clamp01(std::move(value));
}

Vec dr(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
       const RewardModel& model) {
  check_propensities(ds);
  Vec value(ds.m, 0.0);
  for (const LoggedRecord& rec : ds.records) {
    const Vec probs = action_probabilities(policy, rec.x, actions);
    const double w = probs[rec.a_index] / rec.propensity;
    const Vec rhat_logged = model(rec.x, rec.a_index);
    for (int i = 0; i < ds.m; ++i) value[i] += w * (rec.y[i] - rhat_logged[i]);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      const Vec rhat = model(rec.x, static_cast<int>(a));
      for (int i = 0; i < ds.m; ++i) value[i] += probs[a] * rhat[i];
    }
  }
  for (double& vi : value) vi /= static_cast<double>(ds.n());
  return clamp01(std::move(value));
}

Vec snips(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy) {
  check_propensities(ds);
  Vec value(ds.m, 0.0);
  double weight_sum = 0.0;
  for (const LoggedRecord& rec : ds.records) {
    const Vec probs = action_probabilities(policy, rec.x, actions);
    const double w = probs[rec.a_index] / rec.propensity;
    weight_sum += w;
    for (int i = 0; i < ds.m; ++i) value[i] += w * rec.y[i];
  }
  if (weight_sum <= 0.0) throw std::runtime_error("snips: all importance weights are zero");
  for (double& vi : value) vi /= weight_sum;
  return value;
}

}  // namespace mopo
