#ifndef MOPO_OPTIMIZE_HPP
#define MOPO_OPTIMIZE_HPP

#include <cstdint>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/estimators.hpp"
#include "mopo/hypervolume.hpp"
#include "mopo/logged_data.hpp"
#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct GradientConfig {
  int iterations = 500;
  double learning_rate = 0.05;
  AdamConfig adam;
  int restarts = 3;
  std::uint64_t seed = 0;
  double init_scale = 0.01;  // keeps initial policies near the logging policy
};

enum class ObjectiveKind { true_value, mean_ips, pessimistic_ips, ehvi };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::mean_ips;
  ConfidenceConfig conf;
  int ehvi_resamples = 32;
  bool ehvi_identity = false;  // degenerate bootstrap: every resample is the dataset itself
  HypervolumeMethod hv;
  std::uint64_t seed = 0;  // bootstrap resamples and scalarization directions
};

/// Hypervolume of K policies under one of the value estimates, with an
/// analytic gradient over the concatenated policy parameters. Tables
/// (features, logging distributions, bootstrap indices, scalarization
/// directions) are frozen at construction so the objective is a fixed
/// deterministic function during ascent.
class HvObjective {
 public:
  /// True-value objective on an explicit context sample.
  HvObjective(const BenchmarkProblem& problem, std::vector<Vec> contexts, ObjectiveSpec spec);

  /// Data-driven objective (mean IPS, pessimistic IPS or bootstrap EHVI).
  /// The logging distribution for widths is rebuilt from ds.epsilon.
  HvObjective(const BenchmarkProblem& problem, const LoggedDataset& ds, ObjectiveSpec spec);

  int feature_dim() const { return feature_dim_; }
  int num_objectives() const { return m_; }

  /// Per-objective value vector of one policy under the configured
  /// estimator (the point fed to the hypervolume).
  Vec policy_value(const SoftmaxPolicy& policy) const;

  double value(const PolicySet& policies) const;
  double value_and_gradient(const PolicySet& policies, Vec& grad) const;

  /// Smallest distance to a non-differentiable point of the objective:
  /// clamp boundaries, tied front coordinates, tied width argmax ratios.
  /// Finite-difference checks use this to skip kink neighborhoods.
  double kink_margin(const PolicySet& policies) const;

 private:
  struct PolicyEval;  // defined in the .cpp
  PolicyEval evaluate_policy(const SoftmaxPolicy& policy, bool with_gradient) const;
  double front_value_and_gradients(const std::vector<PolicyEval>& evals, bool with_gradient,
                                   std::vector<Vec>* dvol_dvalue,
                                   std::vector<std::vector<Vec>>* resample_dvol) const;

  ObjectiveSpec spec_;
  int m_ = 0;
  int num_actions_ = 0;
  int feature_dim_ = 0;
  int n_ = 0;
  std::vector<std::vector<Vec>> phi_;       // [t][a] feature vectors
  std::vector<std::vector<Vec>> rewards_;   // [t][a] mean rewards (true_value only)
  std::vector<Vec> logging_probs_;          // [t] full pi_0 (pessimistic only)
  std::vector<int> logged_action_;          // [t]
  Vec logged_propensity_;                   // [t]
  std::vector<Vec> logged_reward_;          // [t] noisy reward vectors
  std::vector<std::vector<int>> resamples_; // [j][t] bootstrap index lists (ehvi)
  std::vector<Vec> directions_;             // fixed scalarization directions
};

/// Greedy submodular maximization over a discrete pool: K iterations, each
/// adding the candidate with the largest marginal hypervolume gain
/// (tie-break: lowest index). Returns indices into the pool.
std::vector<int> greedy_select_indices(const std::vector<Vec>& pool_values, int K,
                                       const HypervolumeMethod& method);

PolicySet greedy_select(const PolicySet& pool, int K, const ValueFn& value_fn,
                        const HypervolumeMethod& method);

/// Adam ascent on the concatenated parameters of K policies; returns the
/// iterate with the highest objective value seen across all restarts.
/// Restart 0 starts from `init`, later restarts from small random draws.
PolicySet policy_gradient_ascent(const PolicySet& init, const HvObjective& objective,
                                 const GradientConfig& config);

/// K i.i.d. uniform unit-ball parameter vectors.
PolicySet random_policy_baseline(int K, int dim, Rng& rng);

}  // namespace mopo

#endif  // MOPO_OPTIMIZE_HPP
