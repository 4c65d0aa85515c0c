#include "mopo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mopo {
namespace {

constexpr double kPi = std::numbers::pi;

double zdt_tail_sum(const Vec& z) {
  double s = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) s += z[i];
  return s;
}

Vec zdt1(const Vec& z) {
  const double f1 = z[0];
  const double g = 1.0 + 9.0 * zdt_tail_sum(z) / (static_cast<double>(z.size()) - 1.0);
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

Vec zdt2(const Vec& z) {
  const double f1 = z[0];
  const double g = 1.0 + 9.0 * zdt_tail_sum(z) / (static_cast<double>(z.size()) - 1.0);
  const double q = f1 / g;
  return {f1, g * (1.0 - q * q)};
}

Vec zdt3(const Vec& z) {
  const double f1 = z[0];
  const double g = 1.0 + 9.0 * zdt_tail_sum(z) / (static_cast<double>(z.size()) - 1.0);
  const double q = f1 / g;
  return {f1, g * (1.0 - std::sqrt(q) - q * std::sin(10.0 * kPi * f1))};
}

// Tail variables live on [-5,5] in the original formulation; the unit box
// input is rescaled accordingly.
Vec zdt4(const Vec& z) {
  const double f1 = z[0];
  double g = 1.0 + 10.0 * (static_cast<double>(z.size()) - 1.0);
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double v = -5.0 + 10.0 * z[i];
    g += v * v - 10.0 * std::cos(4.0 * kPi * v);
  }
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

Vec zdt6(const Vec& z) {
  const double s = std::sin(6.0 * kPi * z[0]);
  const double f1 = 1.0 - std::exp(-4.0 * z[0]) * s * s * s * s * s * s;
  const double g =
      1.0 + 9.0 * std::pow(zdt_tail_sum(z) / (static_cast<double>(z.size()) - 1.0), 0.25);
  const double q = f1 / g;
  return {f1, g * (1.0 - q * q)};
}

double dtlz_g1(const Vec& z, int m) {
  const int d = static_cast<int>(z.size());
  const int k = d - m + 1;
  double g = 0.0;
  for (int i = d - k; i < d; ++i) {
    g += (z[i] - 0.5) * (z[i] - 0.5) - std::cos(20.0 * kPi * (z[i] - 0.5));
  }
  return 100.0 * (k + g);
}

double dtlz_g2(const Vec& z, int m) {
  const int d = static_cast<int>(z.size());
  const int k = d - m + 1;
  double g = 0.0;
  for (int i = d - k; i < d; ++i) g += (z[i] - 0.5) * (z[i] - 0.5);
  return g;
}

Vec dtlz1(const Vec& z, int m) {
  const double g = dtlz_g1(z, m);
  Vec f(m);
  for (int i = 0; i < m; ++i) {
    double v = 0.5 * (1.0 + g);
    for (int j = 0; j < m - i - 1; ++j) v *= z[j];
    if (i != 0) v *= 1.0 - z[m - i - 1];
    f[i] = v;
  }
  return f;
}

// Shared spherical construction of DTLZ2-6; theta holds the m-1 angles.
Vec dtlz_sphere(const Vec& theta, double g, int m) {
  Vec f(m);
  for (int i = 0; i < m; ++i) {
    double v = 1.0 + g;
    for (int j = 0; j < m - i - 1; ++j) v *= std::cos(theta[j]);
    if (i != 0) v *= std::sin(theta[m - i - 1]);
    f[i] = v;
  }
  return f;
}

Vec dtlz2(const Vec& z, int m) {
  Vec theta(m - 1);
  for (int j = 0; j < m - 1; ++j) theta[j] = 0.5 * kPi * z[j];
  return dtlz_sphere(theta, dtlz_g2(z, m), m);
}

Vec dtlz3(const Vec& z, int m) {
  Vec theta(m - 1);
  for (int j = 0; j < m - 1; ++j) theta[j] = 0.5 * kPi * z[j];
  return dtlz_sphere(theta, dtlz_g1(z, m), m);
}

Vec dtlz4(const Vec& z, int m) {
  constexpr double alpha = 100.0;
  Vec theta(m - 1);
  for (int j = 0; j < m - 1; ++j) theta[j] = 0.5 * kPi * std::pow(z[j], alpha);
  return dtlz_sphere(theta, dtlz_g2(z, m), m);
}

Vec dtlz_degenerate(const Vec& z, double g, int m) {
  Vec theta(m - 1);
  theta[0] = 0.5 * kPi * z[0];
  const double t = kPi / (4.0 * (1.0 + g));
  for (int j = 1; j < m - 1; ++j) theta[j] = t * (1.0 + 2.0 * g * z[j]);
  return dtlz_sphere(theta, g, m);
}

Vec dtlz5(const Vec& z, int m) { return dtlz_degenerate(z, dtlz_g2(z, m), m); }

Vec dtlz6(const Vec& z, int m) {
  const int d = static_cast<int>(z.size());
  const int k = d - m + 1;
  double g = 0.0;
  for (int i = d - k; i < d; ++i) g += std::pow(z[i], 0.1);
  return dtlz_degenerate(z, g, m);
}

Vec dtlz7(const Vec& z, int m) {
  const int d = static_cast<int>(z.size());
  const int k = d - m + 1;
  double g = 0.0;
  for (int i = d - k; i < d; ++i) g += z[i];
  g = 1.0 + 9.0 * g / k;
  Vec f(m);
  double h = m;
  for (int j = 0; j < m - 1; ++j) {
    f[j] = z[j];
    h -= z[j] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * z[j]));
  }
  f[m - 1] = (1.0 + g) * h;
  return f;
}

}  // namespace

TestFunction make_test_function(const std::string& name, int d, int m) {
  if (d < 2 || d % 2 != 0) {
    throw std::invalid_argument("test function requires even d >= 2, got d=" +
                                std::to_string(d));
  }
  TestFunction fn;
  fn.name = name;
  fn.d = d;
  fn.m = m;
  const bool is_zdt = name.rfind("ZDT", 0) == 0;
  if (is_zdt && m != 2) {
    throw std::invalid_argument("ZDT problems are bi-objective, got m=" + std::to_string(m));
  }
  if (!is_zdt && m < 2) {
    throw std::invalid_argument("DTLZ requires m >= 2, got m=" + std::to_string(m));
  }
  if (!is_zdt && d - m + 1 < 1) {
    throw std::invalid_argument("DTLZ requires d - m + 1 >= 1 distance variables");
  }

  if (name == "ZDT1") {
    fn.eval = zdt1;
  } else if (name == "ZDT2") {
    fn.eval = zdt2;
  } else if (name == "ZDT3") {
    fn.eval = zdt3;
  } else if (name == "ZDT4") {
    fn.eval = zdt4;
  } else if (name == "ZDT6") {
    fn.eval = zdt6;
  } else if (name == "DTLZ1") {
    fn.eval = [m](const Vec& z) { return dtlz1(z, m); };
  } else if (name == "DTLZ2") {
    fn.eval = [m](const Vec& z) { return dtlz2(z, m); };
  } else if (name == "DTLZ3") {
    fn.eval = [m](const Vec& z) { return dtlz3(z, m); };
  } else if (name == "DTLZ4") {
    fn.eval = [m](const Vec& z) { return dtlz4(z, m); };
  } else if (name == "DTLZ5") {
    fn.eval = [m](const Vec& z) { return dtlz5(z, m); };
  } else if (name == "DTLZ6") {
    fn.eval = [m](const Vec& z) { return dtlz6(z, m); };
  } else if (name == "DTLZ7") {
    fn.eval = [m](const Vec& z) { return dtlz7(z, m); };
  } else {
    throw std::invalid_argument("unknown test function: " + name);
  }
  return fn;
}

NormalizationBounds estimate_bounds(const TestFunction& fn, int samples, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  NormalizationBounds b;
  b.lo.assign(fn.m, std::numeric_limits<double>::infinity());
  b.hi.assign(fn.m, -std::numeric_limits<double>::infinity());
  Vec z(fn.d);
  for (int s = 0; s < samples; ++s) {
    for (double& zi : z) zi = unif(rng);
    const Vec f = fn.eval(z);
    for (int i = 0; i < fn.m; ++i) {
      b.lo[i] = std::min(b.lo[i], f[i]);
      b.hi[i] = std::max(b.hi[i], f[i]);
    }
  }
  return b;
}

Vec BenchmarkProblem::mean_reward(const Vec& x, const Vec& a) const {
  Vec z;
  z.reserve(fn.d);
  z.insert(z.end(), x.begin(), x.end());
  z.insert(z.end(), a.begin(), a.end());
  const Vec f = fn.eval(z);
  Vec r(fn.m);
  for (int i = 0; i < fn.m; ++i) {
    r[i] = std::clamp((bounds.hi[i] - f[i]) / (bounds.hi[i] - bounds.lo[i]), 0.0, 1.0);
  }
  return r;
}

Vec BenchmarkProblem::mean_reward(const Vec& x, int a_index) const {
  return mean_reward(x, actions.at(a_index));
}

std::vector<Vec> discretize_actions(int count, int action_dim, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out(count, Vec(action_dim));
  for (Vec& a : out) {
    for (double& ai : a) ai = unif(rng);
  }
  return out;
}

int feature_dimension(int context_dim, int action_dim) {
  return context_dim + action_dim + context_dim * action_dim + 1;
}

Vec features(const Vec& x, const Vec& a) {
  Vec phi;
  phi.reserve(feature_dimension(static_cast<int>(x.size()), static_cast<int>(a.size())));
  phi.insert(phi.end(), x.begin(), x.end());
  phi.insert(phi.end(), a.begin(), a.end());
  for (double xi : x) {
    for (double aj : a) phi.push_back(xi * aj);
  }
  phi.push_back(1.0);
  return phi;
}

BenchmarkProblem make_problem(const std::string& name, int d, int m, int num_actions,
                              std::uint64_t seed) {
  BenchmarkProblem p;
  p.fn = make_test_function(name, d, m);
  Rng rng(seed);
  p.actions = discretize_actions(num_actions, d / 2, rng);
  p.bounds = estimate_bounds(p.fn, 100000, rng);
  return p;
}

}  // namespace mopo
