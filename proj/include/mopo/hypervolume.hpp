#ifndef MOPO_HYPERVOLUME_HPP
#define MOPO_HYPERVOLUME_HPP

#include <functional>
#include <string>
#include <vector>

#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

/// K value vectors in [0,1]^m plus a reference point (origin by default).
struct FrontPoints {
  std::vector<Vec> points;
  Vec reference;  // empty means all zeros

  int m() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  double ref(int i) const { return reference.empty() ? 0.0 : reference[i]; }
};

/// O(K log K) sweep along the first objective. Requires m = 2.
double hv_exact_2d(const FrontPoints& pts);

/// Signed sum over nonempty subsets of the coordinate-wise minima box
/// volumes. Exact for any m; cost 2^K, guarded at K <= 20.
double hv_inclusion_exclusion(const FrontPoints& pts);

/// Random scalarization estimate: directions uniform on the positive
/// orthant of the unit sphere, s_λ(y) = min_i max{0, y_i/λ_i}^m. The
/// proportionality constant is resolved by normalizing with the same
/// direction set evaluated on the unit singleton, so {(1,...,1)} maps to 1
/// exactly for any sample count.
double hv_scalarized(const FrontPoints& pts, int samples, Rng& rng);

/// Fraction of uniform points in [0,1]^m dominated by at least one point.
/// Test oracle; slow but assumption-free.
double hv_monte_carlo(const FrontPoints& pts, int samples, Rng& rng);

struct HypervolumeMethod {
  enum class Kind { exact2d, inclusion_exclusion, scalarized, monte_carlo };
  Kind kind = Kind::exact2d;
  int samples = 100000;
  std::uint64_t seed = 0;
};

/// Parses "exact2d", "incl-excl", "scalarized:<samples>", "mc:<samples>".
HypervolumeMethod parse_hv_method(const std::string& text);

double hypervolume(const FrontPoints& pts, const HypervolumeMethod& method);

using ValueFn = std::function<Vec(const SoftmaxPolicy&)>;

/// Evaluates value_fn on each policy and dispatches to the chosen method.
double hv_of_policies(const PolicySet& policies, const ValueFn& value_fn,
                      const HypervolumeMethod& method);

/// d vol / d point coordinate for m = 2, from the sweep formula. Dominated
/// points get zero; ties take the subgradient of the active piece.
std::vector<Vec> hv_gradient_2d(const FrontPoints& pts);

/// Same for the scalarized estimate under a fixed direction set (each
/// direction contributes through its argmax point and argmin coordinate).
std::vector<Vec> hv_gradient_scalarized(const FrontPoints& pts,
                                        const std::vector<Vec>& directions);

/// Scalarized estimate itself for a caller-fixed direction set.
double hv_scalarized_fixed(const FrontPoints& pts, const std::vector<Vec>& directions);

/// Uniform directions on the positive orthant of the unit sphere in R^m.
std::vector<Vec> sample_directions(int m, int count, Rng& rng);

}  // namespace mopo

#endif  // MOPO_HYPERVOLUME_HPP
