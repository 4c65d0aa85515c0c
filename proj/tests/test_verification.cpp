#include <cmath>

#include <doctest.h>

#include "mopo/logged_data.hpp"
#include "mopo/optimize.hpp"
#include "mopo/verification.hpp"

using namespace mopo;

TEST_CASE("brute force subset search") {
  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  const std::vector<Vec> pool = {{0.9, 0.1}, {0.1, 0.9}, {0.6, 0.6}};

  auto [two, vol2] = brute_force_best_subset({{0.9, 0.1}, {0.1, 0.9}}, 2, method);
  CHECK(two == std::vector<int>{0, 1});

  auto [best, vol] = brute_force_best_subset(pool, 2, method);
  // pairs: {0,1} -> 0.17, {0,2} -> 0.39, {2,1} -> 0.39; first max wins
  CHECK(best == std::vector<int>{0, 2});
  CHECK(vol == doctest::Approx(0.39).epsilon(1e-12));

  auto [single, vol1] = brute_force_best_subset(pool, 1, method);
  CHECK(single == std::vector<int>{2});
  CHECK(vol1 == doctest::Approx(0.36).epsilon(1e-12));

  CHECK_THROWS(brute_force_best_subset(pool, 0, method));
  CHECK_THROWS(brute_force_best_subset(std::vector<Vec>(60, Vec{0.5, 0.5}), 15, method));
}

TEST_CASE("random instances satisfy the good event by construction") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteInstance inst = random_instance(6, 2, 2, rng);
    for (std::size_t p = 0; p < inst.true_values.size(); ++p) {
      for (int i = 0; i < 2; ++i) {
        REQUIRE(std::abs(inst.true_values[p][i] - inst.est_values[p][i]) <=
                inst.widths[p][i] + 1e-12);
      }
    }
  }
}

TEST_CASE("subset width accumulates per policy and objective") {
  DiscreteInstance inst;
  inst.widths = {{0.1, 0.2}, {0.3, 0.4}, {0.0, 0.05}};
  CHECK(inst.width_of({0}) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(inst.width_of({0, 2}) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(inst.width_of({0, 1, 2}) == doctest::Approx(1.05).epsilon(1e-12));
}

TEST_CASE("mean and pessimism bounds on exact estimates") {
  Rng rng(52);
  DiscreteInstance inst = random_instance(6, 2, 2, rng);
  inst.est_values = inst.true_values;
  for (Vec& w : inst.widths) w.assign(w.size(), 0.0);
  CHECK(check_mean_bound(inst));
  CHECK(check_pessimism_bound(inst));
}

TEST_CASE("mean and pessimism bounds on random instances") {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const int pool = 3 + trial % 6;
    const int K = 1 + trial % 3;
    DiscreteInstance inst = random_instance(pool, std::min(K, pool), 2, rng);
    REQUIRE(check_mean_bound(inst));
    REQUIRE(check_pessimism_bound(inst));
  }
}

TEST_CASE("overestimated garbage policy separates pessimism from the mean") {
  // One great policy with a tight estimate, one bad policy with a wild
  // overestimate inside its (huge) width.
  DiscreteInstance inst;
  inst.K = 1;
  inst.true_values = {{0.9, 0.9}, {0.05, 0.05}};
  inst.est_values = {{0.9, 0.9}, {0.95, 0.95}};
  inst.widths = {{0.0, 0.0}, {0.9, 0.9}};

  CHECK(check_mean_bound(inst));
  CHECK(check_pessimism_bound(inst));

  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  // the mean rule is fooled by the overestimate
  auto [mean_pick, mv] = brute_force_best_subset(inst.est_values, 1, method);
  CHECK(mean_pick == std::vector<int>{1});
  // the pessimistic rule is not: LCB of the bad policy collapses to near zero
  std::vector<Vec> lcb = inst.est_values;
  for (std::size_t p = 0; p < lcb.size(); ++p) {
    for (int i = 0; i < 2; ++i) lcb[p][i] = std::clamp(lcb[p][i] - inst.widths[p][i], 0.0, 1.0);
  }
  auto [pess_pick, pv] = brute_force_best_subset(lcb, 1, method);
  CHECK(pess_pick == std::vector<int>{0});
  // with c(S*) = 0 the pessimism bound forces exact optimality
  FrontPoints achieved{{inst.true_values[pess_pick[0]]}, {}};
  CHECK(hypervolume(achieved, method) == doctest::Approx(0.81).epsilon(1e-12));
}

TEST_CASE("hv error bound") {
  std::vector<Vec> v = {{0.7, 0.4}, {0.2, 0.9}};
  CHECK(check_hv_error_bound(v, v, {{0.0, 0.0}, {0.0, 0.0}}));

  // tightness: single point, second coordinate 1, first shifted by delta
  const double delta = 0.07;
  std::vector<Vec> a = {{0.5, 1.0}};
  std::vector<Vec> b = {{0.5 + delta, 1.0}};
  std::vector<Vec> c = {{delta, 0.0}};
  CHECK(check_hv_error_bound(a, b, c));
  const HypervolumeMethod method{HypervolumeMethod::Kind::inclusion_exclusion};
  const double gap = std::abs(hypervolume({a, {}}, method) - hypervolume({b, {}}, method));
  CHECK(gap == doctest::Approx(delta).epsilon(1e-12));

  Rng rng(54);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + trial % 2;
    const int k = 1 + trial % 4;
    std::vector<Vec> tv(k, Vec(m)), ev(k, Vec(m)), w(k, Vec(m));
    for (int p = 0; p < k; ++p) {
      for (int i = 0; i < m; ++i) {
        tv[p][i] = unif(rng);
        w[p][i] = 0.25 * unif(rng);
        ev[p][i] = std::clamp(tv[p][i] + w[p][i] * (2 * unif(rng) - 1), 0.0, 1.0);
      }
    }
    REQUIRE(check_hv_error_bound(tv, ev, w));
  }
}

TEST_CASE("greedy respects the submodular guarantee") {
  Rng rng(55);
  const HypervolumeMethod method;  // exact2d
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int pool = 4 + trial % 9;
    const int K = 1 + trial % 4;
    std::vector<Vec> values(pool, Vec(2));
    for (Vec& v : values) {
      v[0] = unif(rng);
      v[1] = unif(rng);
    }
    std::vector<int> greedy = greedy_select_indices(values, std::min(K, pool), method);
    FrontPoints pts;
    for (int idx : greedy) pts.points.push_back(values[idx]);
    const double greedy_vol = hv_exact_2d(pts);
    auto [best, opt] = brute_force_best_subset(values, std::min(K, pool), method);
    REQUIRE(greedy_vol >= (1.0 - std::exp(-1.0)) * opt - 1e-12);
  }
}

TEST_CASE("coverage simulation") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 5, 61);
  LoggingPolicy logging{0.3, &p};
  Rng rng(62);
  PolicySet policies;
  for (int k = 0; k < 2; ++k) policies.push_back(random_unit_ball_policy(16, rng));

  // noiseless rewards never leave the interval
  std::vector<Vec> rate = coverage_simulation(p, logging, policies, 3.0, 0.0, 50, 1000, 5);
  for (const Vec& r : rate) {
    for (double ri : r) CHECK(ri == 0.0);
  }

  // failure rate shrinks as beta grows
  Vec mean_rates;
  for (double beta : {1.0, 2.0, 3.0}) {
    rate = coverage_simulation(p, logging, policies, beta, 1.0, 50, 2000, 5);
    double mean = 0.0;
    for (const Vec& r : rate) {
      for (double ri : r) mean += ri;
    }
    mean_rates.push_back(mean / 4.0);
  }
  const double se = std::sqrt(0.25 / 2000.0);
  CHECK(mean_rates[1] <= mean_rates[0] + 3 * se);
  CHECK(mean_rates[2] <= mean_rates[1] + 3 * se);
  CHECK(mean_rates[2] <= 2.0 * std::exp(-4.5) + 3 * se);
}

TEST_CASE("width scaling in n, m and subset size") {
  // flat toy problem: logging and the zero policy are both uniform, so
  // every per-record ratio is exactly 1 and c = beta sigma / sqrt(n)
  BenchmarkProblem p;
  p.fn.name = "flat";
  p.fn.d = 2;
  p.fn.m = 2;
  p.fn.eval = [](const Vec&) { return Vec{0.5, 0.5}; };
  p.actions = {{0.0}, {1.0}};
  p.bounds.lo = {0.0, 0.0};
  p.bounds.hi = {1.0, 1.0};
  LoggingPolicy logging{0.5, &p};
  SoftmaxPolicy uniform{Vec(4, 0.0)};

  Vec c_by_n;
  for (int n : {100, 200, 400}) {
    LoggedDataset ds = generate(p, logging, n, 0.0, 3);
    const std::vector<Vec> lp = logging_distributions(ds, logging);
    Vec c = confidence_width(ds, p.actions, lp, uniform, {0.2, 1.0});
    c_by_n.push_back(c[0]);
    CHECK(c[0] == doctest::Approx(0.2 / std::sqrt(static_cast<double>(n))).epsilon(1e-12));
  }
  // proportional to 1/sqrt(n) within 10 percent
  CHECK(std::abs(c_by_n[0] / c_by_n[1] - std::sqrt(2.0)) <= 0.1 * std::sqrt(2.0));
  CHECK(std::abs(c_by_n[1] / c_by_n[2] - std::sqrt(2.0)) <= 0.1 * std::sqrt(2.0));

  // per-policy widths are identical across objectives, so c(S) is linear
  // in both m and the subset size
  DiscreteInstance inst;
  inst.widths = {{0.02, 0.02}, {0.02, 0.02}, {0.02, 0.02}};
  CHECK(inst.width_of({0, 1}) == doctest::Approx(2.0 * inst.width_of({0})).epsilon(1e-12));
  CHECK(inst.width_of({0, 1, 2}) == doctest::Approx(3.0 * inst.width_of({0})).epsilon(1e-12));
  DiscreteInstance inst3;
  inst3.widths = {{0.02, 0.02, 0.02}};
  CHECK(inst3.width_of({0}) == doctest::Approx(1.5 * inst.width_of({0})).epsilon(1e-12));
}
