#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "mopo/benchmarks.hpp"

using namespace mopo;

TEST_CASE("zdt1 frozen points") {
  TestFunction fn = make_test_function("ZDT1", 6, 2);
  Vec z0(6, 0.0);
  Vec f = fn.eval(z0);
  CHECK(f[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-15));

  Vec z1 = {1, 0, 0, 0, 0, 0};
  f = fn.eval(z1);
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(0.0).epsilon(1e-12));

  Vec ones(6, 1.0);
  f = fn.eval(ones);
  // g = 1 + 9*(5/5) = 10, f2 = 10*(1 - sqrt(1/10))
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(10.0 * (1.0 - std::sqrt(0.1))).epsilon(1e-12));
}

TEST_CASE("dtlz2 frozen point") {
  TestFunction fn = make_test_function("DTLZ2", 6, 2);
  Vec z = {0, 0.5, 0.5, 0.5, 0.5, 0.5};
  Vec f = fn.eval(z);
  CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("test function construction errors") {
  CHECK_THROWS_AS(make_test_function("ZDT9", 6, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_test_function("ZDT1", 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_test_function("ZDT1", 6, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_test_function("DTLZ2", 2, 4), std::invalid_argument);
}

TEST_CASE("all shipped functions finite on random inputs") {
  Rng rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const char* name : {"ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6", "DTLZ1", "DTLZ2", "DTLZ3",
                           "DTLZ4", "DTLZ5", "DTLZ6", "DTLZ7"}) {
    const int m = 2;
    TestFunction fn = make_test_function(name, 6, m);
    for (int trial = 0; trial < 200; ++trial) {
      Vec z(6);
      for (double& v : z) v = unif(rng);
      Vec f = fn.eval(z);
      REQUIRE(static_cast<int>(f.size()) == m);
      for (double v : f) REQUIRE(std::isfinite(v));
    }
  }
}

TEST_CASE("mean reward transform") {
  BenchmarkProblem p;
  p.fn = make_test_function("ZDT1", 6, 2);
  Rng rng(1);
  p.actions = discretize_actions(4, 3, rng);
  p.bounds.lo = {0.0, 0.0};
  p.bounds.hi = {1.0, 10.0};

  Vec x(3, 0.0);
  Vec a(3, 0.0);
  // f(0) = (0, 1) -> r = ((1-0)/1, (10-1)/10) = (1, 0.9)
  Vec r = p.mean_reward(x, a);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.9));

  // endpoints: f_i = hi_i -> 0, f_i = lo_i -> 1
  Vec x1 = {1, 0, 0};
  r = p.mean_reward(x1, a);  // f = (1, 0)
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(1.0));

  // f below lo clamps to 1
  p.bounds.lo = {0.5, 0.5};
  p.bounds.hi = {1.0, 10.0};
  r = p.mean_reward(x, a);  // f1 = 0 < lo1
  CHECK(r[0] == 1.0);
}

TEST_CASE("rewards stay in the unit box on random probes") {
  BenchmarkProblem p = make_problem("ZDT3", 6, 2, 8, 42);
  Rng rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, p.num_actions() - 1);
  for (int t = 0; t < 10000; ++t) {
    Vec x(p.context_dim());
    for (double& v : x) v = unif(rng);
    Vec r = p.mean_reward(x, pick(rng));
    for (double v : r) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("feature map") {
  Vec x = {1, 0};
  Vec a = {0, 1};
  Vec phi = features(x, a);
  Vec expected = {1, 0, 0, 1, 0, 1, 0, 0, 1};
  CHECK(phi == expected);

  phi = features(Vec{0, 0}, Vec{0, 0});
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) CHECK(phi[i] == 0.0);
  CHECK(phi.back() == 1.0);

  CHECK(feature_dimension(3, 3) == 16);
  CHECK(static_cast<int>(features(Vec{0.1, 0.2, 0.3}, Vec{0.4, 0.5, 0.6}).size()) == 16);
}

TEST_CASE("action discretization") {
  Rng rng(5);
  std::vector<Vec> acts = discretize_actions(20, 3, rng);
  REQUIRE(static_cast<int>(acts.size()) == 20);
  for (const Vec& a : acts) {
    REQUIRE(static_cast<int>(a.size()) == 3);
    for (double v : a) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
  Rng rng2(5);
  CHECK(discretize_actions(20, 3, rng2) == acts);

  Rng rng3(9);
  std::vector<Vec> two = discretize_actions(2, 1, rng3);
  REQUIRE(two.size() == 2);
  CHECK(two[0].size() == 1);
}

TEST_CASE("estimated bounds bracket sampled objective values") {
  TestFunction fn = make_test_function("ZDT2", 6, 2);
  Rng rng(3);
  NormalizationBounds b = estimate_bounds(fn, 2000, rng);
  REQUIRE(b.lo.size() == 2);
  for (int i = 0; i < 2; ++i) CHECK(b.lo[i] < b.hi[i]);
  Rng rng2(3);
  NormalizationBounds b2 = estimate_bounds(fn, 2000, rng2);
  CHECK(b2.lo == b.lo);
  CHECK(b2.hi == b.hi);
}

TEST_CASE("make_problem is deterministic per seed") {
  BenchmarkProblem p1 = make_problem("ZDT1", 6, 2, 5, 123);
  BenchmarkProblem p2 = make_problem("ZDT1", 6, 2, 5, 123);
  CHECK(p1.actions == p2.actions);
  CHECK(p1.bounds.lo == p2.bounds.lo);
  CHECK(p1.bounds.hi == p2.bounds.hi);
}
