#ifndef MOPO_VERIFICATION_HPP
#define MOPO_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/estimators.hpp"
#include "mopo/hypervolume.hpp"
#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

/// Finite policy pool with known true values, estimated values and widths,
/// built so that |V_i - Ṽ_i| <= c_i holds by construction.
struct DiscreteInstance {
  std::vector<Vec> true_values;
  std::vector<Vec> est_values;
  std::vector<Vec> widths;
  int K = 1;

  double width_of(const std::vector<int>& subset) const;
};

/// Values uniform in [0,1]^m, widths uniform in [0, 0.3], estimates
/// clamp(V + uniform(-c, c)).
DiscreteInstance random_instance(int pool_size, int K, int m, Rng& rng);

/// Exact maximizer of the hypervolume over all K-subsets by enumeration;
/// ties resolved by lexicographic index order. Guarded at C(pool, K) <= 1e6.
std::pair<std::vector<int>, double> brute_force_best_subset(const std::vector<Vec>& values,
                                                            int K,
                                                            const HypervolumeMethod& method);

/// With Ŝ the exact maximizer of HV under the estimates (α = 1), checks
/// vol(Ŝ, V) >= vol(S*, V) − c(S*) − c(Ŝ) up to `slack`.
bool check_mean_bound(const DiscreteInstance& instance, double slack = 1e-12);

/// Same with Ŝ maximizing HV under clamp(Ṽ − c, 0, 1):
/// vol(Ŝ, V) >= vol(S*, V) − 2 c(S*).
bool check_pessimism_bound(const DiscreteInstance& instance, double slack = 1e-12);

/// |vol(S, V) − vol(S, Ṽ)| <= Σ_{π∈S} Σ_i c_i(π), via inclusion-exclusion.
bool check_hv_error_bound(const std::vector<Vec>& true_values,
                          const std::vector<Vec>& est_values, const std::vector<Vec>& widths,
                          double slack = 1e-12);

/// Regenerates `trials` datasets and counts |V̂_i − V_i| > c_i events.
/// Contexts are held fixed across trials so the target V is fixed too.
/// Returns the failure rate per (policy, objective).
std::vector<Vec> coverage_simulation(const BenchmarkProblem& problem,
                                     const LoggingPolicy& logging, const PolicySet& policies,
                                     double beta, double sigma, int n, int trials,
                                     std::uint64_t seed);

}  // namespace mopo

#endif  // MOPO_VERIFICATION_HPP
