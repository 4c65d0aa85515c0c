#ifndef MOPO_POLICY_HPP
#define MOPO_POLICY_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/types.hpp"

namespace mopo {

/// Softmax policy over a discrete action set: π(a|x;θ) ∝ exp(φ(x,a)ᵀθ).
struct SoftmaxPolicy {
  Vec theta;
};

using PolicySet = std::vector<SoftmaxPolicy>;

/// Softmax of φ(x,a)ᵀθ over the action list, max-subtracted before
/// exponentiation. Throws std::runtime_error on non-finite logits.
Vec action_probabilities(const SoftmaxPolicy& p, const Vec& x, const std::vector<Vec>& actions);

/// Softmax over precomputed logits; shared fast path for callers that cache
/// feature dot products.
Vec softmax(const Vec& logits);

/// ∂ log π(a|x;θ) / ∂θ = φ(x,a) − Σ_b π(b|x) φ(x,b).
Vec log_prob_gradient(const SoftmaxPolicy& p, const Vec& x, const std::vector<Vec>& actions,
                      int a_index);

/// flags[j] is true iff rewards[j] is not dominated by any other vector
/// (weak dominance: exactly equal vectors are all front members).
std::vector<bool> pareto_flags(const std::vector<Vec>& rewards);

/// ε-mixture of uniform and uniform-over-Pareto-front actions. Requires a
/// live problem reference to compute the per-context front.
struct LoggingPolicy {
  double epsilon = 0.1;
  const BenchmarkProblem* problem = nullptr;
};

/// π₀(a|x) = ε/|A| + (1−ε)·F_{x,a}/Σ_b F_{x,b}, renormalized as a guard.
Vec logging_probabilities(const LoggingPolicy& lp, const Vec& x);

/// θ uniform on the unit ball of the given dimension.
SoftmaxPolicy random_unit_ball_policy(int dim, Rng& rng);

/// One policy per line, comma-separated θ, header "# softmax dim=<n>".
void save_policies(const PolicySet& set, const std::filesystem::path& path);
PolicySet load_policies(const std::filesystem::path& path);

}  // namespace mopo

#endif  // MOPO_POLICY_HPP
