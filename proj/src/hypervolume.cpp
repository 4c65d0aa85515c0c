#include "mopo/hypervolume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mopo {
namespace {

// Indices of the maximal (non-dominated, deduplicated) points, sorted
// ascending by the first coordinate. Exact duplicates keep the lowest index.
std::vector<int> staircase_2d(const std::vector<Vec>& pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    if (pts[a][1] != pts[b][1]) return pts[a][1] > pts[b][1];
    return a > b;
  });
  // Scan from the right: keep points whose second coordinate strictly
  // exceeds everything with a larger first coordinate. Equal first
  // coordinates collapse to the highest second coordinate.
  std::vector<int> keep;
  double best2 = -std::numeric_limits<double>::infinity();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vec& p = pts[*it];
    if (p[1] > best2) {
      if (!keep.empty() && pts[keep.back()][0] == p[0]) {
        keep.back() = *it;
      } else {
        keep.push_back(*it);
      }
      best2 = p[1];
    }
  }
  std::reverse(keep.begin(), keep.end());
  return keep;
}

double scalarization(const Vec& y, const Vec& lambda, int m) {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    s = std::min(s, std::pow(std::max(0.0, y[i] / lambda[i]), static_cast<double>(m)));
  }
  return s;
}

}  // namespace

double hv_exact_2d(const FrontPoints& pts) {
  if (pts.points.empty()) return 0.0;
  if (pts.m() != 2) throw std::invalid_argument("hv_exact_2d requires m = 2");
  const double a1 = pts.ref(0);
  const double a2 = pts.ref(1);
  const std::vector<int> stairs = staircase_2d(pts.points);
  double vol = 0.0;
  double prev1 = a1;
  for (int idx : stairs) {
    vol += (pts.points[idx][0] - prev1) * (pts.points[idx][1] - a2);
    prev1 = pts.points[idx][0];
  }
  return vol;
}

std::vector<Vec> hv_gradient_2d(const FrontPoints& pts) {
  if (pts.m() != 2) throw std::invalid_argument("hv_gradient_2d requires m = 2");
  std::vector<Vec> grad(pts.points.size(), Vec(2, 0.0));
  const std::vector<int> stairs = staircase_2d(pts.points);
  const double a1 = pts.ref(0);
  const double a2 = pts.ref(1);
  for (std::size_t k = 0; k < stairs.size(); ++k) {
    const int idx = stairs[k];
    const double next2 = (k + 1 < stairs.size()) ? pts.points[stairs[k + 1]][1] : a2;
    const double prev1 = (k > 0) ? pts.points[stairs[k - 1]][0] : a1;
    grad[idx][0] = pts.points[idx][1] - next2;
    grad[idx][1] = pts.points[idx][0] - prev1;
  }
  return grad;
}

double hv_inclusion_exclusion(const FrontPoints& pts) {
  const int k = static_cast<int>(pts.points.size());
  if (k == 0) return 0.0;
  if (k > 20) throw std::invalid_argument("hv_inclusion_exclusion: K > 20");
  const int m = pts.m();
  double vol = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const double sign = (std::popcount(mask) % 2 == 1) ? 1.0 : -1.0;
    double box = 1.0;
    for (int i = 0; i < m; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        if (mask & (1u << j)) lo = std::min(lo, pts.points[j][i]);
      }
      box *= lo - pts.ref(i);
    }
    vol += sign * box;
  }
  return vol;
}

std::vector<Vec> sample_directions(int m, int count, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> dirs(count, Vec(m));
  for (Vec& lambda : dirs) {
    double norm2 = 0.0;
    for (double& li : lambda) {
      li = std::abs(gauss(rng));
      norm2 += li * li;
    }
    const double norm = std::sqrt(norm2);
    for (double& li : lambda) li /= norm;
  }
  return dirs;
}

double hv_scalarized_fixed(const FrontPoints& pts, const std::vector<Vec>& directions) {
  if (pts.points.empty()) return 0.0;
  const int m = pts.m();
  const Vec unit(m, 1.0);
  double num = 0.0;
  double den = 0.0;
  Vec shifted(m);
  for (const Vec& lambda : directions) {
    double best = 0.0;
    for (const Vec& p : pts.points) {
      for (int i = 0; i < m; ++i) shifted[i] = p[i] - pts.ref(i);
      best = std::max(best, scalarization(shifted, lambda, m));
    }
    num += best;
    den += scalarization(unit, lambda, m);
  }
  return num / den;
}

double hv_scalarized(const FrontPoints& pts, int samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("hv_scalarized: samples >= 1 required");
  if (pts.points.empty()) return 0.0;
  return hv_scalarized_fixed(pts, sample_directions(pts.m(), samples, rng));
}

std::vector<Vec> hv_gradient_scalarized(const FrontPoints& pts,
                                        const std::vector<Vec>& directions) {
  const int m = pts.m();
  std::vector<Vec> grad(pts.points.size(), Vec(m, 0.0));
  if (pts.points.empty() || directions.empty()) return grad;
  const Vec unit(m, 1.0);
  double den = 0.0;
  for (const Vec& lambda : directions) den += scalarization(unit, lambda, m);

  Vec shifted(m);
  for (const Vec& lambda : directions) {
    // argmax point, then argmin coordinate of the active scalarization
    int best_p = -1;
    double best_val = 0.0;
    for (std::size_t p = 0; p < pts.points.size(); ++p) {
      for (int i = 0; i < m; ++i) shifted[i] = pts.points[p][i] - pts.ref(i);
      const double v = scalarization(shifted, lambda, m);
      if (v > best_val) {
        best_val = v;
        best_p = static_cast<int>(p);
      }
    }
    if (best_p < 0) continue;
    int best_i = 0;
    double min_term = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double u = std::max(0.0, (pts.points[best_p][i] - pts.ref(i)) / lambda[i]);
      const double term = std::pow(u, static_cast<double>(m));
      if (term < min_term) {
        min_term = term;
        best_i = i;
      }
    }
    const double u = (pts.points[best_p][best_i] - pts.ref(best_i)) / lambda[best_i];
    if (u > 0.0) {
      grad[best_p][best_i] +=
          m * std::pow(u, static_cast<double>(m - 1)) / lambda[best_i] / den;
    }
  }
  return grad;
}

double hv_monte_carlo(const FrontPoints& pts, int samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("hv_monte_carlo: samples >= 1 required");
  if (pts.points.empty()) return 0.0;
  const int m = pts.m();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec y(m);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    for (double& yi : y) yi = unif(rng);
    for (const Vec& p : pts.points) {
      bool dominated = true;
      for (int i = 0; i < m; ++i) {
        if (y[i] > p[i]) {
          dominated = false;
          break;
        }
      }
      if (dominated) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / samples;
}

HypervolumeMethod parse_hv_method(const std::string& text) {
  HypervolumeMethod method;
  if (text == "exact2d") {
    method.kind = HypervolumeMethod::Kind::exact2d;
  } else if (text == "incl-excl") {
    method.kind = HypervolumeMethod::Kind::inclusion_exclusion;
  } else if (text.rfind("scalarized", 0) == 0) {
    method.kind = HypervolumeMethod::Kind::scalarized;
    if (const auto sep = text.find(':'); sep != std::string::npos) {
      method.samples = std::stoi(text.substr(sep + 1));
    }
  } else if (text.rfind("mc", 0) == 0) {
    method.kind = HypervolumeMethod::Kind::monte_carlo;
    if (const auto sep = text.find(':'); sep != std::string::npos) {
      method.samples = std::stoi(text.substr(sep + 1));
    }
  } else {
    throw std::invalid_argument("unknown hypervolume method: " + text);
  }
  return method;
}

double hypervolume(const FrontPoints& pts, const HypervolumeMethod& method) {
  Rng rng(method.seed);
  switch (method.kind) {
    case HypervolumeMethod::Kind::exact2d:
      return hv_exact_2d(pts);
    case HypervolumeMethod::Kind::inclusion_exclusion:
      return hv_inclusion_exclusion(pts);
    case HypervolumeMethod::Kind::scalarized:
      return hv_scalarized(pts, method.samples, rng);
    case HypervolumeMethod::Kind::monte_carlo:
      return hv_monte_carlo(pts, method.samples, rng);
  }
  throw std::logic_error("unreachable");
}

double hv_of_policies(const PolicySet& policies, const ValueFn& value_fn,
                      const HypervolumeMethod& method) {
  FrontPoints pts;
  pts.points.reserve(policies.size());
  for (const SoftmaxPolicy& p : policies) pts.points.push_back(value_fn(p));
  return hypervolume(pts, method);
}

}  // namespace mopo
