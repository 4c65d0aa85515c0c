#include "mopo/logged_data.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mopo {
namespace {

std::string hexfloat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(const std::string& tok, int line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                             ": bad number '" + tok + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

}  // namespace

LoggedDataset generate(const BenchmarkProblem& problem, const LoggingPolicy& logging, int n,
                       double sigma, std::uint64_t seed, const std::string& problem_id) {
  if (n < 1) throw std::invalid_argument("dataset size must be >= 1");
  LoggedDataset ds;
  ds.problem_id = problem_id.empty() ? problem.fn.name : problem_id;
  ds.context_dim = problem.context_dim();
  ds.m = problem.num_objectives();
  ds.sigma = sigma;
  ds.epsilon = logging.epsilon;
  ds.seed = seed;
  ds.records.reserve(n);

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < n; ++t) {
    LoggedRecord rec;
    rec.x.resize(problem.context_dim());
    for (double& xi : rec.x) xi = unif(rng);
    const Vec probs = logging_probabilities(logging, rec.x);
    std::discrete_distribution<int> pick(probs.begin(), probs.end());
    rec.a_index = pick(rng);
    rec.propensity = probs[rec.a_index];
    rec.y = problem.mean_reward(rec.x, rec.a_index);
    if (sigma > 0.0) {
      for (double& yi : rec.y) yi += sigma * gauss(rng);
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void save(const LoggedDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "# n=" << ds.n() << " m=" << ds.m << " d=" << ds.context_dim
      << " sigma=" << hexfloat(ds.sigma) << " epsilon=" << hexfloat(ds.epsilon)
      << " problem=" << ds.problem_id << " seed=" << ds.seed << "\n";
  for (const LoggedRecord& rec : ds.records) {
    for (double xi : rec.x) out << hexfloat(xi) << ",";
    out << rec.a_index << "," << hexfloat(rec.propensity);
    for (double yi : rec.y) out << "," << hexfloat(yi);
    out << "\n";
  }
}

LoggedDataset load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error("missing metadata header in " + path.string());
  }
  LoggedDataset ds;
  int declared_n = -1;
  for (const std::string& kv : split(line.substr(2), ' ')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "n") declared_n = std::stoi(val);
    else if (key == "m") ds.m = std::stoi(val);
    else if (key == "d") ds.context_dim = std::stoi(val);
    else if (key == "sigma") ds.sigma = parse_double(val, 1);
    else if (key == "epsilon") ds.epsilon = parse_double(val, 1);
    else if (key == "problem") ds.problem_id = val;
    else if (key == "seed") ds.seed = std::stoull(val);
  }
  if (ds.m < 1 || ds.context_dim < 1) {
    throw std::runtime_error("invalid metadata header in " + path.string());
  }

  const std::size_t expected_cols =
      static_cast<std::size_t>(ds.context_dim) + 2 + static_cast<std::size_t>(ds.m);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != expected_cols) {
      throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expected_cols) + " columns, got " +
                               std::to_string(cols.size()));
    }
    LoggedRecord rec;
    std::size_t c = 0;
    rec.x.resize(ds.context_dim);
    for (double& xi : rec.x) xi = parse_double(cols[c++], line_no);
    rec.a_index = std::stoi(cols[c++]);
    rec.propensity = parse_double(cols[c++], line_no);
    if (rec.propensity <= 0.0) {
      throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                               ": propensity must be > 0");
    }
    rec.y.resize(ds.m);
    for (double& yi : rec.y) yi = parse_double(cols[c++], line_no);
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw std::runtime_error("empty dataset in " + path.string());
  if (declared_n >= 0 && declared_n != ds.n()) {
    throw std::runtime_error("metadata n=" + std::to_string(declared_n) +
                             " does not match " + std::to_string(ds.n()) + " records");
  }
  return ds;
}

}  // namespace mopo
