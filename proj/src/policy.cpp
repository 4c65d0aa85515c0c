#include "mopo/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mopo {

Vec softmax(const Vec& logits) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double l : logits) {
    if (!std::isfinite(l)) throw std::runtime_error("non-finite logit in softmax");
    max_logit = std::max(max_logit, l);
  }
  Vec p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - max_logit);
    z += p[i];
  }
  for (double& pi : p) pi /= z;
  return p;
}

Vec action_probabilities(const SoftmaxPolicy& p, const Vec& x, const std::vector<Vec>& actions) {
  if (actions.empty()) throw std::invalid_argument("empty action list");
  Vec logits(actions.size());
  for (std::size_t j = 0; j < actions.size(); ++j) {
    const Vec phi = features(x, actions[j]);
    logits[j] = std::inner_product(phi.begin(), phi.end(), p.theta.begin(), 0.0);
  }
  return softmax(logits);
}

Vec log_prob_gradient(const SoftmaxPolicy& p, const Vec& x, const std::vector<Vec>& actions,
                      int a_index) {
  const Vec probs = action_probabilities(p, x, actions);
  Vec grad = features(x, actions.at(a_index));
  for (std::size_t j = 0; j < actions.size(); ++j) {
    const Vec phi = features(x, actions[j]);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= probs[j] * phi[i];
  }
  return grad;
}

namespace {

// True iff a dominates b: a >= b everywhere and a > b somewhere.
bool dominates(const Vec& a, const Vec& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

}  // namespace

std::vector<bool> pareto_flags(const std::vector<Vec>& rewards) {
  if (rewards.empty()) throw std::invalid_argument("pareto_flags: empty list");
  std::vector<bool> flags(rewards.size(), true);
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    for (std::size_t k = 0; k < rewards.size(); ++k) {
      if (k != j && dominates(rewards[k], rewards[j])) {
        flags[j] = false;
        break;
      }
    }
  }
  return flags;
}

Vec logging_probabilities(const LoggingPolicy& lp, const Vec& x) {
  const BenchmarkProblem& problem = *lp.problem;
  const int num_actions = problem.num_actions();
  std::vector<Vec> rewards(num_actions);
  for (int a = 0; a < num_actions; ++a) rewards[a] = problem.mean_reward(x, a);
  const std::vector<bool> flags = pareto_flags(rewards);
  const double front_size =
      static_cast<double>(std::count(flags.begin(), flags.end(), true));

  Vec probs(num_actions);
  double total = 0.0;
  for (int a = 0; a < num_actions; ++a) {
    probs[a] = lp.epsilon / num_actions +
               (flags[a] ? (1.0 - lp.epsilon) / front_size : 0.0);
    total += probs[a];
  }
  for (double& p : probs) p /= total;
  return probs;
}

SoftmaxPolicy random_unit_ball_policy(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec theta(dim);
  double norm2 = 0.0;
  for (double& t : theta) {
    t = gauss(rng);
    norm2 += t * t;
  }
  const double scale = std::pow(unif(rng), 1.0 / dim) / std::sqrt(norm2);
  for (double& t : theta) t *= scale;
  return SoftmaxPolicy{std::move(theta)};
}

void save_policies(const PolicySet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  const std::size_t dim = set.empty() ? 0 : set.front().theta.size();
  out << "# softmax dim=" << dim << "\n";
  char buf[64];
  for (const SoftmaxPolicy& p : set) {
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.theta[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

PolicySet load_policies(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# softmax dim=", 0) != 0) {
    throw std::runtime_error("bad policy file header in " + path.string());
  }
  const std::size_t dim = std::stoul(line.substr(14));
  PolicySet set;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SoftmaxPolicy p;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.theta.push_back(std::stod(tok));
    if (p.theta.size() != dim) {
      throw std::runtime_error("policy dimension mismatch in " + path.string());
    }
    set.push_back(std::move(p));
  }
  return set;
}

}  // namespace mopo
