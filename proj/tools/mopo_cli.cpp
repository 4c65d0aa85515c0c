// Command-line front end: dataset generation, off-policy value estimation,
// hypervolume optimization, the verification suite, experiment sweeps and
// plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "mopo/benchmarks.hpp"
#include "mopo/estimators.hpp"
#include "mopo/experiment.hpp"
#include "mopo/hypervolume.hpp"
#include "mopo/logged_data.hpp"
#include "mopo/optimize.hpp"
#include "mopo/policy.hpp"
#include "mopo/verification.hpp"

namespace {

struct ProblemFlags {
  std::string name = "ZDT1";
  int d = 6;
  int m = 2;
  int num_actions = 20;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--problem", name, "test function name (ZDT1-4, ZDT6, DTLZ1-7)");
    app->add_option("--d", d, "input dimension (even)");
    app->add_option("--m", m, "number of objectives");
    app->add_option("--num-actions", num_actions, "action discretization size");
    app->add_option("--problem-seed", seed, "seed for actions and normalization bounds");
  }

  mopo::BenchmarkProblem build() const { return mopo::make_problem(name, d, m, num_actions, seed); }
};

int cmd_verify(int trials_scale);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"off-policy multi-objective policy optimization"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a logged dataset");
  ProblemFlags gen_problem;
  gen_problem.attach(gen);
  int gen_n = 500;
  double gen_sigma = 1.0, gen_epsilon = 0.1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "data.csv";
  gen->add_option("--n", gen_n, "number of records");
  gen->add_option("--sigma", gen_sigma, "reward noise scale");
  gen->add_option("--epsilon", gen_epsilon, "logging policy mixing weight");
  gen->add_option("--seed", gen_seed, "dataset seed");
  gen->add_option("--out", gen_out, "output path");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate policy values from logged data");
  ProblemFlags est_problem;
  est_problem.attach(est);
  std::string estimator = "ips", est_policy_file, est_data;
  double est_beta = 0.2, est_clip = -1.0;
  est->add_option("--estimator", estimator, "ips | clipped | pess | dm | dr | snips");
  est->add_option("--beta", est_beta, "confidence width multiplier");
  est->add_option("--clip-M", est_clip, "clipping parameter for the clipped estimator");
  est->add_option("--policy-file", est_policy_file, "policies to evaluate")->required();
  est->add_option("--data", est_data, "logged dataset path")->required();

  // optimize
  auto* opt = app.add_subcommand("optimize", "maximize the hypervolume of K policies");
  ProblemFlags opt_problem;
  opt_problem.attach(opt);
  std::string opt_objective = "pess", opt_data, opt_out = "policies.csv", opt_hv = "exact2d";
  int opt_k = 10, opt_iters = 500, opt_restarts = 3, opt_contexts = 200;
  double opt_lr = 0.05, opt_beta = 0.2;
  std::uint64_t opt_seed = 1;
  opt->add_option("--objective", opt_objective, "true | mean | pess | ehvi:<N>");
  opt->add_option("--K", opt_k, "number of policies");
  opt->add_option("--iters", opt_iters, "gradient iterations");
  opt->add_option("--lr", opt_lr, "learning rate");
  opt->add_option("--restarts", opt_restarts, "random restarts");
  opt->add_option("--seed", opt_seed, "optimizer seed");
  opt->add_option("--beta", opt_beta, "pessimism width multiplier");
  opt->add_option("--data", opt_data, "logged dataset (mean/pess/ehvi objectives)");
  opt->add_option("--contexts", opt_contexts, "context sample size (true objective)");
  opt->add_option("--hv", opt_hv, "exact2d | incl-excl | scalarized:<samples> | mc:<samples>");
  opt->add_option("--out", opt_out, "output policy file");

  // verify
  auto* ver = app.add_subcommand("verify", "run the verification suite");
  int ver_scale = 1;
  ver->add_option("--scale", ver_scale, "divide trial counts by this factor");

  // sweep
  auto* swp = app.add_subcommand("sweep", "run the experiment sweep");
  std::string swp_config;
  swp->add_option("--config", swp_config, "key = value config file");

  // plot
  auto* plt = app.add_subcommand("plot", "render a result CSV as an SVG chart");
  std::string plt_csv, plt_x = "n", plt_out = "plot.svg";
  plt->add_option("--csv", plt_csv, "result CSV")->required();
  plt->add_option("--x", plt_x, "x axis: n | K | epsilon");
  plt->add_option("--out", plt_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const mopo::BenchmarkProblem problem = gen_problem.build();
      const mopo::LoggingPolicy logging{gen_epsilon, &problem};
      const mopo::LoggedDataset ds =
          mopo::generate(problem, logging, gen_n, gen_sigma, gen_seed);
      mopo::save(ds, gen_out);
      std::cout << "wrote " << ds.n() << " records to " << gen_out << "\n";
      return 0;
    }

    if (est->parsed()) {
      const mopo::BenchmarkProblem problem = est_problem.build();
      const mopo::LoggedDataset ds = mopo::load(est_data);
      const mopo::PolicySet policies = mopo::load_policies(est_policy_file);
      const mopo::ConfidenceConfig conf{est_beta, ds.sigma};
      const mopo::LoggingPolicy logging{ds.epsilon, &problem};
      std::cout << "policy,objective,value,width\n";
      for (std::size_t p = 0; p < policies.size(); ++p) {
        mopo::Vec value, width(ds.m, 0.0);
        if (estimator == "ips") {
          value = mopo::ips(ds, problem.actions, policies[p],
                            std::numeric_limits<double>::infinity());
        } else if (estimator == "clipped") {
          if (est_clip < 0) throw std::runtime_error("clipped estimator needs --clip-M");
          value = mopo::ips(ds, problem.actions, policies[p], est_clip);
        } else if (estimator == "pess") {
          const auto pi0 = mopo::logging_distributions(ds, logging);
          value = mopo::pessimistic(ds, problem.actions, pi0, policies[p], conf);
          width = mopo::confidence_width(ds, problem.actions, pi0, policies[p], conf);
        } else if (estimator == "dm") {
          const auto model = mopo::empirical_reward_model(ds, problem.num_actions());
          value = mopo::dm(ds, problem.actions, policies[p], model);
        } else if (estimator == "dr") {
          const auto model = mopo::empirical_reward_model(ds, problem.num_actions());
          value = mopo::dr(ds, problem.actions, policies[p], model);
        } else if (estimator == "snips") {
          value = mopo::snips(ds, problem.actions, policies[p]);
        } else {
          throw std::runtime_error("unknown estimator: " + estimator);
        }
        for (int i = 0; i < ds.m; ++i) {
          std::printf("%zu,%d,%.10g,%.10g\n", p, i, value[i], width[i]);
        }
      }
      return 0;
    }

    if (opt->parsed()) {
      const mopo::BenchmarkProblem problem = opt_problem.build();
      const int dim =
          mopo::feature_dimension(problem.context_dim(), problem.action_dim());
      mopo::ObjectiveSpec spec;
      spec.hv = mopo::parse_hv_method(opt_hv);
      spec.seed = opt_seed;
      if (opt_objective == "true") {
        spec.kind = mopo::ObjectiveKind::true_value;
      } else if (opt_objective == "mean") {
        spec.kind = mopo::ObjectiveKind::mean_ips;
      } else if (opt_objective == "pess") {
        spec.kind = mopo::ObjectiveKind::pessimistic_ips;
      } else if (opt_objective.rfind("ehvi", 0) == 0) {
        spec.kind = mopo::ObjectiveKind::ehvi;
        if (const auto sep = opt_objective.find(':'); sep != std::string::npos) {
          spec.ehvi_resamples = std::stoi(opt_objective.substr(sep + 1));
        }
      } else {
        throw std::runtime_error("unknown objective: " + opt_objective);
      }

      std::unique_ptr<mopo::HvObjective> objective;
      if (spec.kind == mopo::ObjectiveKind::true_value) {
        mopo::Rng rng(opt_seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<mopo::Vec> contexts(opt_contexts, mopo::Vec(problem.context_dim()));
        for (auto& x : contexts) {
          for (double& xi : x) xi = unif(rng);
        }
        objective = std::make_unique<mopo::HvObjective>(problem, std::move(contexts), spec);
      } else {
        if (opt_data.empty()) throw std::runtime_error("objective needs --data");
        const mopo::LoggedDataset ds = mopo::load(opt_data);
        spec.conf = mopo::ConfidenceConfig{opt_beta, ds.sigma};
        objective = std::make_unique<mopo::HvObjective>(problem, ds, spec);
      }

      mopo::GradientConfig gc;
      gc.iterations = opt_iters;
      gc.learning_rate = opt_lr;
      gc.restarts = opt_restarts;
      gc.seed = opt_seed;
      mopo::Rng init_rng(opt_seed ^ 0x5bf03635u);
      std::normal_distribution<double> gauss(0.0, 1.0);
      mopo::PolicySet init(opt_k);
      for (auto& p : init) {
        p.theta.resize(dim);
        for (double& t : p.theta) t = gc.init_scale * gauss(init_rng);
      }
      const mopo::PolicySet best = mopo::policy_gradient_ascent(init, *objective, gc);
      mopo::save_policies(best, opt_out);
      std::cout << "objective value " << objective->value(best) << ", wrote " << best.size()
                << " policies to " << opt_out << "\n";
      return 0;
    }

    if (ver->parsed()) return cmd_verify(ver_scale);

    if (swp->parsed()) {
      mopo::ExperimentConfig cfg =
          swp_config.empty() ? mopo::ExperimentConfig{} : mopo::load_config(swp_config);
      std::filesystem::create_directories(cfg.output_dir);
      mopo::write_config(cfg, std::filesystem::path(cfg.output_dir) / "effective_config.txt");
      const auto rows =
          mopo::run_sweep(cfg, std::filesystem::path(cfg.output_dir) / "results.csv");
      int failures = 0;
      for (const auto& row : rows) {
        if (row.status != "ok") {
          ++failures;
          std::cerr << "cell failed: " << row.method << " n=" << row.n << " K=" << row.K
                    << " run=" << row.run << ": " << row.status << "\n";
        }
      }
      std::cout << rows.size() << " cells, " << failures << " failures, results in "
                << cfg.output_dir << "/results.csv\n";
      return failures == 0 ? 0 : 1;
    }

    if (plt->parsed()) {
      mopo::emit_plot(plt_csv, plt_x, plt_out);
      std::cout << "wrote " << plt_out << "\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

namespace {

int cmd_verify(int scale) {
  using namespace mopo;
  int failed = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failed;
  };

  {
    Rng rng(11);
    std::uniform_int_distribution<int> pool_dist(2, 8);
    std::uniform_int_distribution<int> k_dist(1, 3);
    bool mean_ok = true, pess_ok = true;
    const int trials = std::max(1, 500 / scale);
    for (int t = 0; t < trials; ++t) {
      const int pool = pool_dist(rng);
      const int k = std::min(k_dist(rng), pool);
      const DiscreteInstance inst = random_instance(pool, k, 2, rng);
      mean_ok = mean_ok && check_mean_bound(inst);
      pess_ok = pess_ok && check_pessimism_bound(inst);
    }
    report("mean-estimate maximization bound (random instances)", mean_ok);
    report("pessimistic maximization bound (random instances)", pess_ok);
  }

  {
    Rng rng(12);
    std::uniform_int_distribution<int> size_dist(1, 6);
    std::uniform_int_distribution<int> m_dist(2, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool ok = true;
    const int trials = std::max(1, 1000 / scale);
    for (int t = 0; t < trials; ++t) {
      const int size = size_dist(rng);
      const int m = m_dist(rng);
      std::vector<Vec> truth(size, Vec(m)), est(size, Vec(m)), widths(size, Vec(m));
      for (int p = 0; p < size; ++p) {
        for (int i = 0; i < m; ++i) {
          truth[p][i] = unif(rng);
          widths[p][i] = 0.3 * unif(rng);
          est[p][i] = std::clamp(truth[p][i] + (2.0 * unif(rng) - 1.0) * widths[p][i], 0.0, 1.0);
        }
      }
      ok = ok && check_hv_error_bound(truth, est, widths);
    }
    report("hypervolume perturbation bound", ok);
  }

  {
    Rng rng(13);
    std::uniform_int_distribution<int> pool_dist(4, 12);
    std::uniform_int_distribution<int> k_dist(1, 4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const HypervolumeMethod method{HypervolumeMethod::Kind::exact2d};
    bool ok = true;
    const int trials = std::max(1, 200 / scale);
    for (int t = 0; t < trials; ++t) {
      const int pool = pool_dist(rng);
      const int k = std::min(k_dist(rng), pool);
      std::vector<Vec> values(pool, Vec(2));
      for (auto& v : values) {
        v[0] = unif(rng);
        v[1] = unif(rng);
      }
      const auto greedy = greedy_select_indices(values, k, method);
      FrontPoints pts;
      for (int idx : greedy) pts.points.push_back(values[idx]);
      const double greedy_vol = hv_exact_2d(pts);
      const auto [_, best_vol] = brute_force_best_subset(values, k, method);
      ok = ok && greedy_vol >= (1.0 - 1.0 / std::numbers::e) * best_vol - 1e-12;
    }
    report("greedy (1-1/e) guarantee vs brute force", ok);
  }

  {
    const BenchmarkProblem problem = make_problem("ZDT1", 6, 2, 10, 3);
    const LoggingPolicy logging{0.2, &problem};
    const int dim = feature_dimension(problem.context_dim(), problem.action_dim());
    Rng rng(14);
    PolicySet policies = random_policy_baseline(3, dim, rng);
    const int trials = std::max(1000, 3000 / scale);
    const auto rates = coverage_simulation(problem, logging, policies, 3.0, 1.0, 100,
                                           trials, 15);
    const double bound = 2.0 * std::exp(-4.5);
    bool ok = true;
    for (const auto& per_policy : rates) {
      for (double rate : per_policy) {
        const double se = std::sqrt(bound * (1.0 - bound) / trials);
        ok = ok && rate <= bound + 3.0 * se;
      }
    }
    report("confidence interval coverage", ok);
  }

  std::cout << (failed == 0 ? "all checks passed" : "FAILURES PRESENT") << "\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace
