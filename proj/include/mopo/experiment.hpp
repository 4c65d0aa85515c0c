#ifndef MOPO_EXPERIMENT_HPP
#define MOPO_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/hypervolume.hpp"
#include "mopo/optimize.hpp"
#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

/// One sweep cell result. CSV schema:
/// method,n,K,epsilon,run,recovered_hv,seconds,status
struct ResultRow {
  std::string method;
  int n = 0;
  int K = 0;
  double epsilon = 0.0;
  int run = 0;
  double recovered_hv = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
};

struct ExperimentConfig {
  std::string problem = "ZDT1";
  int d = 6;
  int m = 2;
  int num_actions = 20;
  std::string normalization = "auto";  // or "lo1,hi1;lo2,hi2;..."
  std::vector<int> n_values = {100, 500, 2000};
  std::vector<int> k_values = {2, 5, 10};
  std::vector<double> epsilon_values = {0.1};
  double sigma = 1.0;
  double beta = 0.2;
  std::vector<std::string> methods = {"random", "meanHVI", "pessHVI", "ehvi"};
  int runs = 10;
  std::uint64_t seed = 1;
  int reference_policies = 2000;  // scaled-down reference pool
  int eval_contexts = 200;        // contexts used for true-value evaluation
  int ehvi_resamples = 16;
  GradientConfig gradient;
  HypervolumeMethod hv;
  std::string output_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
};

/// Plain-text key = value config file; unknown keys are an error.
ExperimentConfig load_config(const std::filesystem::path& path);
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

/// Hypervolume of a random-policy pool under the true value function.
double reference_hypervolume(const BenchmarkProblem& problem, int num_random_policies,
                             const std::vector<Vec>& contexts, std::uint64_t seed,
                             const HypervolumeMethod& method);

/// vol(solution, V_true) / reference. May exceed 1: the reference is only
/// an estimate of the achievable maximum.
double recovered_hypervolume(const PolicySet& solution, const BenchmarkProblem& problem,
                             const std::vector<Vec>& contexts, double reference,
                             const HypervolumeMethod& method);

/// Full factorial over (method, n, K, epsilon, run); per-cell failures are
/// recorded with an error status and the sweep continues. Rows are also
/// appended to csv_path as they complete.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                 const std::filesystem::path& csv_path);

/// Runs one sweep cell in isolation (used for reproducibility checks).
ResultRow run_cell(const ExperimentConfig& cfg, const BenchmarkProblem& problem,
                   double reference, const std::vector<Vec>& eval_contexts,
                   const std::string& method, int n, int K, double epsilon, int run);

/// Fig. 2/3-style SVG line chart: one series per method, mean ± stderr
/// whiskers. x_axis is one of "n", "K", "epsilon".
void emit_plot(const std::filesystem::path& csv_path, const std::string& x_axis,
               const std::filesystem::path& out_svg);

std::vector<ResultRow> read_result_csv(const std::filesystem::path& csv_path);

}  // namespace mopo

#endif  // MOPO_EXPERIMENT_HPP
