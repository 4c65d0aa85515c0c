#ifndef MOPO_ESTIMATORS_HPP
#define MOPO_ESTIMATORS_HPP

#include <functional>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/logged_data.hpp"
#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

struct ConfidenceConfig {
  double beta = 0.2;
  double sigma = 0.0;
};

/// V_i(π) = (1/n) Σ_t Σ_a π(a|x_t) r_i(x_t, a) from the problem's exact
/// mean rewards.
Vec true_value(const BenchmarkProblem& problem, const SoftmaxPolicy& policy,
               const std::vector<Vec>& contexts);

/// Clipped IPS: (1/n) Σ_t min{π(A_t|x_t)/π₀(A_t|x_t), M} Y_{t,i}, clamped to
/// [0,1] per objective. M may be infinity.
Vec ips(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
        double clip_m);

/// Same sum without the final [0,1] clamp; the pessimistic estimator
/// subtracts its width from this raw value before clamping.
Vec ips_unclamped(const LoggedDataset& ds, const std::vector<Vec>& actions,
                  const SoftmaxPolicy& policy, double clip_m);

/// Full logging distribution π₀(·|x_t) for every record, recomputed from the
/// logging policy. Needed by the width: the stored per-record propensity only
/// covers the logged action.
std::vector<Vec> logging_distributions(const LoggedDataset& ds, const LoggingPolicy& logging);

/// c_i(π) = β σ M_π / n with M_π² = Σ_t max_a (π(a|x_t)/π₀(a|x_t))², the
/// max over the full action set. Identical across objectives.
Vec confidence_width(const LoggedDataset& ds, const std::vector<Vec>& actions,
                     const std::vector<Vec>& logging_probs, const SoftmaxPolicy& policy,
                     const ConfidenceConfig& cfg);

/// L_i(π) = clamp(V̂_i(π,∞) − c_i(π), 0, 1), with the unclamped IPS sum.
Vec pessimistic(const LoggedDataset& ds, const std::vector<Vec>& actions,
                const std::vector<Vec>& logging_probs, const SoftmaxPolicy& policy,
                const ConfidenceConfig& cfg);

/// r̂(x, a_index) -> m-vector of predicted mean rewards.
using RewardModel = std::function<Vec(const Vec& x, int a_index)>;

/// Context-free model: empirical mean of logged rewards per (action,
/// objective); actions never logged fall back to the global mean.
RewardModel empirical_reward_model(const LoggedDataset& ds, int num_actions);

Vec dm(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
       const RewardModel& model);
Vec dr(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy,
       const RewardModel& model);
Vec snips(const LoggedDataset& ds, const std::vector<Vec>& actions, const SoftmaxPolicy& policy);

}  // namespace mopo

#endif  // MOPO_ESTIMATORS_HPP
