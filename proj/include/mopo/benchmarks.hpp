#ifndef MOPO_BENCHMARKS_HPP
#define MOPO_BENCHMARKS_HPP

#include <functional>
#include <string>
#include <vector>

#include "mopo/types.hpp"

namespace mopo {

/// A multi-objective test function on the unit box [0,1]^d, minimization
/// convention. Inputs outside the box are the caller's bug.
struct TestFunction {
  std::string name;
  int d = 0;
  int m = 0;
  std::function<Vec(const Vec&)> eval;
};

/// Creates one of the shipped test functions: ZDT1-4, ZDT6 (m = 2) or
/// DTLZ1-7 (m >= 2, k = d - m + 1 distance variables). Throws
/// std::invalid_argument on an unknown name or incompatible (d, m).
TestFunction make_test_function(const std::string& name, int d, int m);

/// Per-objective affine bounds used to map minimization objectives into
/// rewards in [0,1]. lo_i < hi_i for all i.
struct NormalizationBounds {
  Vec lo;
  Vec hi;
};

/// Estimates per-objective (min, max) of fn over `samples` uniform points.
NormalizationBounds estimate_bounds(const TestFunction& fn, int samples, Rng& rng);

/// A test function turned into a contextual bandit: the first d/2 inputs are
/// the context, the last d/2 the action, and objective values are mapped to
/// rewards in [0,1]^m through the frozen normalization bounds.
struct BenchmarkProblem {
  TestFunction fn;
  std::vector<Vec> actions;
  NormalizationBounds bounds;

  int context_dim() const { return fn.d / 2; }
  int action_dim() const { return fn.d / 2; }
  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_objectives() const { return fn.m; }

  /// r_i(x, a) = clamp((hi_i - f_i(x ⊕ a)) / (hi_i - lo_i), 0, 1).
  Vec mean_reward(const Vec& x, const Vec& a) const;
  Vec mean_reward(const Vec& x, int a_index) const;
};

/// `count` i.i.d. uniform action vectors in [0,1]^action_dim.
std::vector<Vec> discretize_actions(int count, int action_dim, Rng& rng);

/// φ(x, a) = x ⊕ a ⊕ vec(x aᵀ) ⊕ (1), vec row-major.
Vec features(const Vec& x, const Vec& a);

int feature_dimension(int context_dim, int action_dim);

/// Convenience constructor: builds the test function, discretizes actions
/// and estimates normalization bounds, all from one seed.
BenchmarkProblem make_problem(const std::string& name, int d, int m, int num_actions,
                              std::uint64_t seed);

}  // namespace mopo

#endif  // MOPO_BENCHMARKS_HPP
