#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "mopo/estimators.hpp"
#include "mopo/experiment.hpp"

using namespace mopo;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.problem = "ZDT1";
  cfg.d = 6;
  cfg.m = 2;
  cfg.num_actions = 4;
  cfg.n_values = {40};
  cfg.k_values = {2};
  cfg.epsilon_values = {0.5};
  cfg.sigma = 0.5;
  cfg.methods = {"random", "meanHVI"};
  cfg.runs = 2;
  cfg.seed = 3;
  cfg.reference_policies = 50;
  cfg.eval_contexts = 20;
  cfg.gradient.iterations = 20;
  cfg.gradient.restarts = 1;
  cfg.workers = 1;
  return cfg;
}

}  // namespace

TEST_CASE("config round trip and unknown keys") {
  ExperimentConfig cfg = tiny_config();
  cfg.hv = parse_hv_method("scalarized:5000");
  const auto path = std::filesystem::temp_directory_path() / "mopo_cfg.txt";
  write_config(cfg, path);
  ExperimentConfig loaded = load_config(path);
  CHECK(loaded.problem == cfg.problem);
  CHECK(loaded.d == cfg.d);
  CHECK(loaded.num_actions == cfg.num_actions);
  CHECK(loaded.n_values == cfg.n_values);
  CHECK(loaded.k_values == cfg.k_values);
  CHECK(loaded.epsilon_values == cfg.epsilon_values);
  CHECK(loaded.sigma == cfg.sigma);
  CHECK(loaded.methods == cfg.methods);
  CHECK(loaded.runs == cfg.runs);
  CHECK(loaded.seed == cfg.seed);
  CHECK(loaded.reference_policies == cfg.reference_policies);
  CHECK(loaded.gradient.iterations == cfg.gradient.iterations);
  CHECK(loaded.hv.kind == cfg.hv.kind);
  CHECK(loaded.hv.samples == cfg.hv.samples);

  std::ofstream(path, std::ios::app) << "frobnicate = 1\n";
  CHECK_THROWS(load_config(path));
  std::filesystem::remove(path);
}

TEST_CASE("reference hypervolume") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 4, 71);
  Rng ctx_rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> contexts(15, Vec(3));
  for (Vec& x : contexts) {
    for (double& v : x) v = unif(ctx_rng);
  }
  const HypervolumeMethod method;

  // a single-policy reference is that policy's rectangle
  const double one = reference_hypervolume(p, 1, contexts, 9, method);
  Rng pool_rng(9);
  SoftmaxPolicy first = random_unit_ball_policy(16, pool_rng);
  Vec v = true_value(p, first, contexts);
  CHECK(one == doctest::Approx(v[0] * v[1]).epsilon(1e-12));

  // monotone in the pool size (same seed: nested pools)
  const double small = reference_hypervolume(p, 10, contexts, 9, method);
  const double big = reference_hypervolume(p, 60, contexts, 9, method);
  CHECK(one <= small + 1e-15);
  CHECK(small <= big + 1e-15);
}

TEST_CASE("recovered hypervolume") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 4, 72);
  Rng ctx_rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> contexts(15, Vec(3));
  for (Vec& x : contexts) {
    for (double& v : x) v = unif(ctx_rng);
  }
  const HypervolumeMethod method;
  const double reference = reference_hypervolume(p, 30, contexts, 9, method);

  // the reference pool itself recovers exactly 1
  Rng pool_rng(9);
  PolicySet pool = random_policy_baseline(30, 16, pool_rng);
  CHECK(recovered_hypervolume(pool, p, contexts, reference, method) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(recovered_hypervolume(pool, p, contexts, 0.0, method));
}

TEST_CASE("sweep produces deterministic csv and reproducible cells") {
  ExperimentConfig cfg = tiny_config();
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv_a = dir / "mopo_sweep_a.csv";
  const auto csv_b = dir / "mopo_sweep_b.csv";

  std::vector<ResultRow> rows = run_sweep(cfg, csv_a);
  REQUIRE(rows.size() == 4);  // 2 methods x 2 runs
  for (const ResultRow& row : rows) {
    REQUIRE(row.status == "ok");
    REQUIRE(row.recovered_hv >= 0.0);
  }

  run_sweep(cfg, csv_b);
  const std::string a = slurp(csv_a);
  std::string b = slurp(csv_b);
  // wall times differ between runs; strip the seconds column before comparing
  auto strip_seconds = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
      const auto last = line.rfind(',');
      const auto prev = line.rfind(',', last - 1);
      out += line.substr(0, prev) + line.substr(last) + "\n";
    }
    return out;
  };
  CHECK(strip_seconds(a) == strip_seconds(b));

  // a cell rerun in isolation reproduces its recovered hypervolume
  BenchmarkProblem problem = make_problem(cfg.problem, cfg.d, cfg.m, cfg.num_actions, cfg.seed);
  Rng ctx_rng(cfg.seed + 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> contexts(cfg.eval_contexts, Vec(problem.context_dim()));
  for (Vec& x : contexts) {
    for (double& v : x) v = unif(ctx_rng);
  }
  const double reference = reference_hypervolume(problem, cfg.reference_policies, contexts,
                                                 cfg.seed + 2, cfg.hv);
  for (const ResultRow& row : rows) {
    ResultRow redo = run_cell(cfg, problem, reference, contexts, row.method, row.n, row.K,
                              row.epsilon, row.run);
    REQUIRE(redo.recovered_hv == doctest::Approx(row.recovered_hv).epsilon(1e-12));
  }

  // round trip through the csv reader
  std::vector<ResultRow> parsed = read_result_csv(csv_a);
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].method == rows[i].method);
    CHECK(parsed[i].n == rows[i].n);
    CHECK(parsed[i].run == rows[i].run);
    CHECK(parsed[i].status == rows[i].status);
  }
  std::filesystem::remove(csv_a);
  std::filesystem::remove(csv_b);
}

TEST_CASE("plot structure") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = dir / "mopo_plot.csv";
  {
    std::ofstream out(csv);
    out << "method,n,K,epsilon,run,recovered_hv,seconds,status\n";
    for (const char* method : {"meanHVI", "pessHVI"}) {
      for (int n : {100, 500, 2000}) {
        for (int run = 0; run < 2; ++run) {
          out << method << "," << n << ",10,0.1," << run << ","
              << (n / 4000.0 + (method[0] == 'p' ? 0.1 : 0.0) + 0.01 * run) << ",0.5,ok\n";
        }
      }
    }
  }
  const auto svg = dir / "mopo_plot.svg";
  emit_plot(csv, "n", svg);
  std::string text = slurp(svg);
  auto count = [&](const std::string& needle) {
    int c = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + 1)) {
      ++c;
    }
    return c;
  };
  CHECK(count("<polyline") == 2);
  CHECK(count("<circle") == 6);

  emit_plot(csv, "n", dir / "mopo_plot2.svg");
  CHECK(slurp(dir / "mopo_plot2.svg") == text);

  CHECK_THROWS(emit_plot(csv, "bogus", svg));

  // single x value per series: markers only, no polyline
  const auto csv1 = dir / "mopo_plot1.csv";
  {
    std::ofstream out(csv1);
    out << "method,n,K,epsilon,run,recovered_hv,seconds,status\n";
    out << "meanHVI,100,10,0.1,0,0.5,0.5,ok\n";
    out << "meanHVI,100,10,0.1,1,0.6,0.5,ok\n";
  }
  emit_plot(csv1, "n", svg);
  text = slurp(svg);
  CHECK(count("<polyline") == 0);
  CHECK(count("<circle") == 1);

  const auto empty_csv = dir / "mopo_plot_empty.csv";
  std::ofstream(empty_csv) << "method,n,K,epsilon,run,recovered_hv,seconds,status\n";
  CHECK_THROWS(emit_plot(empty_csv, "n", svg));

  for (const char* f : {"mopo_plot.csv", "mopo_plot.svg", "mopo_plot2.svg", "mopo_plot1.csv",
                        "mopo_plot_empty.csv"}) {
    std::filesystem::remove(dir / f);
  }
}
