#include "mopo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mopo/estimators.hpp"
#include "mopo/logged_data.hpp"

namespace mopo {
namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t cell_seed(const ExperimentConfig& cfg, const std::string& method, int n, int K,
                        double epsilon, int run) {
  std::uint64_t h = cfg.seed;
  h = mix(h, std::hash<std::string>{}(method));
  h = mix(h, static_cast<std::uint64_t>(n));
  h = mix(h, static_cast<std::uint64_t>(K));
  h = mix(h, static_cast<std::uint64_t>(std::llround(epsilon * 1e6)));
  h = mix(h, static_cast<std::uint64_t>(run));
  return h;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string row_to_csv(const ResultRow& row) {
  std::ostringstream out;
  out << row.method << "," << row.n << "," << row.K << "," << format_double(row.epsilon) << ","
      << row.run << "," << format_double(row.recovered_hv) << ","
      << format_double(row.seconds) << "," << row.status;
  return out.str();
}

std::vector<Vec> uniform_contexts(int count, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> contexts(count, Vec(dim));
  for (Vec& x : contexts) {
    for (double& xi : x) xi = unif(rng);
  }
  return contexts;
}

}  // namespace

double reference_hypervolume(const BenchmarkProblem& problem, int num_random_policies,
                             const std::vector<Vec>& contexts, std::uint64_t seed,
                             const HypervolumeMethod& method) {
  const int dim = feature_dimension(problem.context_dim(), problem.action_dim());
  Rng rng(seed);
  FrontPoints pts;
  pts.points.reserve(num_random_policies);
  for (int p = 0; p < num_random_policies; ++p) {
    const SoftmaxPolicy policy = random_unit_ball_policy(dim, rng);
    pts.points.push_back(true_value(problem, policy, contexts));
  }
  return hypervolume(pts, method);
}

double recovered_hypervolume(const PolicySet& solution, const BenchmarkProblem& problem,
                             const std::vector<Vec>& contexts, double reference,
                             const HypervolumeMethod& method) {
  if (reference <= 0.0) throw std::runtime_error("degenerate problem: zero reference volume");
  FrontPoints pts;
  pts.points.reserve(solution.size());
  for (const SoftmaxPolicy& p : solution) {
    pts.points.push_back(true_value(problem, p, contexts));
  }
  return hypervolume(pts, method) / reference;
}

ResultRow run_cell(const ExperimentConfig& cfg, const BenchmarkProblem& problem,
                   double reference, const std::vector<Vec>& eval_contexts,
                   const std::string& method, int n, int K, double epsilon, int run) {
  ResultRow row;
  row.method = method;
  row.n = n;
  row.K = K;
  row.epsilon = epsilon;
  row.run = run;
  const auto start = std::chrono::steady_clock::now();
  try {
    const std::uint64_t seed = cell_seed(cfg, method, n, K, epsilon, run);
    const int dim = feature_dimension(problem.context_dim(), problem.action_dim());
    PolicySet solution;
    if (method == "random") {
      Rng rng(seed);
      solution = random_policy_baseline(K, dim, rng);
    } else {
      const LoggingPolicy logging{epsilon, &problem};
      const LoggedDataset ds = generate(problem, logging, n, cfg.sigma, seed);
      ObjectiveSpec spec;
      spec.conf = ConfidenceConfig{cfg.beta, cfg.sigma};
      spec.ehvi_resamples = cfg.ehvi_resamples;
      spec.hv = cfg.hv;
      spec.seed = seed;
      if (method == "meanHVI") {
        spec.kind = ObjectiveKind::mean_ips;
      } else if (method == "pessHVI") {
        spec.kind = ObjectiveKind::pessimistic_ips;
      } else if (method == "ehvi") {
        spec.kind = ObjectiveKind::ehvi;
      } else {
        throw std::invalid_argument("unknown method: " + method);
      }
      const HvObjective objective(problem, ds, spec);
      GradientConfig gc = cfg.gradient;
      gc.seed = seed;
      Rng init_rng(mix(seed, 17));
      std::normal_distribution<double> gauss(0.0, 1.0);
      PolicySet init(K);
      for (SoftmaxPolicy& p : init) {
        p.theta.resize(dim);
        for (double& t : p.theta) t = gc.init_scale * gauss(init_rng);
      }
      solution = policy_gradient_ascent(init, objective, gc);
    }
    row.recovered_hv =
        recovered_hypervolume(solution, problem, eval_contexts, reference, cfg.hv);
  } catch (const std::exception& err) {
    row.status = std::string("error: ") + err.what();
    row.recovered_hv = 0.0;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                 const std::filesystem::path& csv_path) {
  BenchmarkProblem problem = make_problem(cfg.problem, cfg.d, cfg.m, cfg.num_actions, cfg.seed);
  if (cfg.normalization != "auto") {
    // explicit bounds: "lo1,hi1;lo2,hi2;..."
    NormalizationBounds bounds;
    for (const std::string& pair : split(cfg.normalization, ';')) {
      const std::vector<std::string> parts = split(pair, ',');
      if (parts.size() != 2) throw std::runtime_error("bad normalization spec: " + pair);
      bounds.lo.push_back(std::stod(parts[0]));
      bounds.hi.push_back(std::stod(parts[1]));
    }
    if (static_cast<int>(bounds.lo.size()) != cfg.m) {
      throw std::runtime_error("normalization bounds must list one lo,hi pair per objective");
    }
    problem.bounds = std::move(bounds);
  }
  const std::vector<Vec> contexts =
      uniform_contexts(cfg.eval_contexts, problem.context_dim(), cfg.seed + 1);
  const double reference = reference_hypervolume(problem, cfg.reference_policies, contexts,
                                                 cfg.seed + 2, cfg.hv);

  struct Cell {
    std::string method;
    int n, K, run;
    double epsilon;
  };
  std::vector<Cell> cells;
  for (const std::string& method : cfg.methods) {
    for (int n : cfg.n_values) {
      for (int K : cfg.k_values) {
        for (double eps : cfg.epsilon_values) {
          for (int run = 0; run < cfg.runs; ++run) {
            cells.push_back({method, n, K, run, eps});
          }
        }
      }
    }
  }

  std::vector<ResultRow> rows(cells.size());
  std::vector<char> done(cells.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv;

  int workers = cfg.workers > 0 ? cfg.workers
                                : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) break;
        const Cell& c = cells[i];
        ResultRow row =
            run_cell(cfg, problem, reference, contexts, c.method, c.n, c.K, c.epsilon, c.run);
        {
          std::lock_guard<std::mutex> lock(mu);
          rows[i] = std::move(row);
          done[i] = 1;
        }
        cv.notify_all();
      }
    });
  }

  // Single writer emits rows in cell order as they complete.
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path.string());
  csv << "method,n,K,epsilon,run,recovered_hv,seconds,status\n";
  {
    std::unique_lock<std::mutex> lock(mu);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      cv.wait(lock, [&] { return done[i] == 1; });
      csv << row_to_csv(rows[i]) << "\n";
      csv.flush();
    }
  }
  for (std::thread& t : pool) t.join();
  return rows;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "problem") cfg.problem = val;
    else if (key == "d") cfg.d = std::stoi(val);
    else if (key == "m") cfg.m = std::stoi(val);
    else if (key == "num_actions") cfg.num_actions = std::stoi(val);
    else if (key == "normalization") cfg.normalization = val;
    else if (key == "n_values") {
      cfg.n_values.clear();
      for (const std::string& tok : split(val, ',')) cfg.n_values.push_back(std::stoi(tok));
    } else if (key == "k_values") {
      cfg.k_values.clear();
      for (const std::string& tok : split(val, ',')) cfg.k_values.push_back(std::stoi(tok));
    } else if (key == "epsilon_values") {
      cfg.epsilon_values.clear();
      for (const std::string& tok : split(val, ',')) cfg.epsilon_values.push_back(std::stod(tok));
    } else if (key == "sigma") cfg.sigma = std::stod(val);
    else if (key == "beta") cfg.beta = std::stod(val);
    else if (key == "methods") cfg.methods = split(val, ',');
    else if (key == "runs") cfg.runs = std::stoi(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "reference_policies") cfg.reference_policies = std::stoi(val);
    else if (key == "eval_contexts") cfg.eval_contexts = std::stoi(val);
    else if (key == "ehvi_resamples") cfg.ehvi_resamples = std::stoi(val);
    else if (key == "iterations") cfg.gradient.iterations = std::stoi(val);
    else if (key == "learning_rate") cfg.gradient.learning_rate = std::stod(val);
    else if (key == "restarts") cfg.gradient.restarts = std::stoi(val);
    else if (key == "init_scale") cfg.gradient.init_scale = std::stod(val);
    else if (key == "hv") cfg.hv = parse_hv_method(val);
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "workers") cfg.workers = std::stoi(val);
    else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key " + key);
  }
  return cfg;
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  auto join_i = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string eps;
  for (std::size_t i = 0; i < cfg.epsilon_values.size(); ++i) {
    eps += (i ? "," : "") + format_double(cfg.epsilon_values[i]);
  }
  std::string methods;
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) methods += (i ? "," : "") + cfg.methods[i];
  std::string hv_name;
  switch (cfg.hv.kind) {
    case HypervolumeMethod::Kind::exact2d: hv_name = "exact2d"; break;
    case HypervolumeMethod::Kind::inclusion_exclusion: hv_name = "incl-excl"; break;
    case HypervolumeMethod::Kind::scalarized:
      hv_name = "scalarized:" + std::to_string(cfg.hv.samples);
      break;
    case HypervolumeMethod::Kind::monte_carlo:
      hv_name = "mc:" + std::to_string(cfg.hv.samples);
      break;
  }
  out << "problem = " << cfg.problem << "\n"
      << "d = " << cfg.d << "\n"
      << "m = " << cfg.m << "\n"
      << "num_actions = " << cfg.num_actions << "\n"
      << "normalization = " << cfg.normalization << "\n"
      << "n_values = " << join_i(cfg.n_values) << "\n"
      << "k_values = " << join_i(cfg.k_values) << "\n"
      << "epsilon_values = " << eps << "\n"
      << "sigma = " << format_double(cfg.sigma) << "\n"
      << "beta = " << format_double(cfg.beta) << "\n"
      << "methods = " << methods << "\n"
      << "runs = " << cfg.runs << "\n"
      << "seed = " << cfg.seed << "\n"
      << "reference_policies = " << cfg.reference_policies << "\n"
      << "eval_contexts = " << cfg.eval_contexts << "\n"
      << "ehvi_resamples = " << cfg.ehvi_resamples << "\n"
      << "iterations = " << cfg.gradient.iterations << "\n"
      << "learning_rate = " << format_double(cfg.gradient.learning_rate) << "\n"
      << "restarts = " << cfg.gradient.restarts << "\n"
      << "init_scale = " << format_double(cfg.gradient.init_scale) << "\n"
      << "hv = " << hv_name << "\n"
      << "output_dir = " << cfg.output_dir << "\n"
      << "workers = " << cfg.workers << "\n";
}

std::vector<ResultRow> read_result_csv(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open: " + csv_path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, ',');
    if (cols.size() < 8) continue;
    ResultRow row;
    row.method = cols[0];
    row.n = std::stoi(cols[1]);
    row.K = std::stoi(cols[2]);
    row.epsilon = std::stod(cols[3]);
    row.run = std::stoi(cols[4]);
    row.recovered_hv = std::stod(cols[5]);
    row.seconds = std::stod(cols[6]);
    row.status = cols[7];
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_plot(const std::filesystem::path& csv_path, const std::string& x_axis,
               const std::filesystem::path& out_svg) {
  const std::vector<ResultRow> rows = read_result_csv(csv_path);
  if (rows.empty()) throw std::runtime_error("empty CSV: " + csv_path.string());

  auto x_of = [&](const ResultRow& r) -> double {
    if (x_axis == "n") return r.n;
    if (x_axis == "K") return r.K;
    if (x_axis == "epsilon") return r.epsilon;
    throw std::invalid_argument("x_axis must be n, K or epsilon");
  };

  // series: method -> x -> (mean, stderr)
  std::map<std::string, std::map<double, std::pair<double, double>>> series;
  {
    std::map<std::string, std::map<double, Vec>> samples;
    for (const ResultRow& r : rows) {
      if (r.status != "ok") continue;
      samples[r.method][x_of(r)].push_back(r.recovered_hv);
    }
    for (const auto& [method, per_x] : samples) {
      for (const auto& [x, vals] : per_x) {
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        const double se = vals.size() > 1
                              ? std::sqrt(var / (vals.size() - 1.0) / vals.size())
                              : 0.0;
        series[method][x] = {mean, se};
      }
    }
  }
  if (series.empty()) throw std::runtime_error("no ok rows in CSV: " + csv_path.string());

  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const auto& [method, per_x] : series) {
    for (const auto& [x, ms] : per_x) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, ms.first - ms.second);
      y_hi = std::max(y_hi, ms.first + ms.second);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double pad_y = 0.05 * (y_hi - y_lo);
  y_lo -= pad_y;
  y_hi += pad_y;

  const double width = 640, height = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b"};
  std::ofstream out(out_svg);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_svg.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << x_axis << "</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << (mt + height - mb) / 2 << ")\">recovered hypervolume</text>\n";

  int color_idx = 0;
  double legend_y = mt + 10;
  for (const auto& [method, per_x] : series) {
    const char* color = colors[color_idx % 6];
    ++color_idx;
    if (per_x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, ms] : per_x) {
        out << format_double(px(x)) << "," << format_double(py(ms.first)) << " ";
      }
      out << "\"/>\n";
    }
    for (const auto& [x, ms] : per_x) {
      out << "<circle cx=\"" << format_double(px(x)) << "\" cy=\"" << format_double(py(ms.first))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      out << "<line x1=\"" << format_double(px(x)) << "\" y1=\""
          << format_double(py(ms.first - ms.second)) << "\" x2=\"" << format_double(px(x))
          << "\" y2=\"" << format_double(py(ms.first + ms.second)) << "\" stroke=\"" << color
          << "\"/>\n";
    }
    out << "<text x=\"" << width - mr - 120 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << color << "\">" << method << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace mopo
