#include "mopo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mopo {

namespace {

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

struct HvObjective::PolicyEval {
  Vec value;                                   // m entries, the HV point
  Vec raw;                                     // pre-clamp values (mean/pess)
  std::vector<Vec> resample_values;            // [N][m], ehvi only
  std::vector<Vec> resample_raw;               // [N][m] pre-clamp, ehvi only
  std::vector<Vec> jac;                        // [m][dim]
  std::vector<std::vector<Vec>> resample_jac;  // [N][m][dim], ehvi only
  double min_argmax_gap = std::numeric_limits<double>::infinity();  // pess only
};

HvObjective::HvObjective(const BenchmarkProblem& problem, std::vector<Vec> contexts,
                         ObjectiveSpec spec)
    : spec_(spec),
      m_(problem.num_objectives()),
      num_actions_(problem.num_actions()),
      feature_dim_(feature_dimension(problem.context_dim(), problem.action_dim())),
      n_(static_cast<int>(contexts.size())) {
  if (spec_.kind != ObjectiveKind::true_value) {
    throw std::invalid_argument("context-based objective must use the true value function");
  }
  if (contexts.empty()) throw std::invalid_argument("empty context list");
  phi_.resize(n_);
  rewards_.resize(n_);
  for (int t = 0; t < n_; ++t) {
    phi_[t].resize(num_actions_);
    rewards_[t].resize(num_actions_);
    for (int a = 0; a < num_actions_; ++a) {
      phi_[t][a] = features(contexts[t], problem.actions[a]);
      rewards_[t][a] = problem.mean_reward(contexts[t], a);
    }
  }
  if (spec_.hv.kind == HypervolumeMethod::Kind::scalarized) {
    Rng rng(spec_.seed + 1);
    directions_ = sample_directions(m_, spec_.hv.samples, rng);
  }
}

HvObjective::HvObjective(const BenchmarkProblem& problem, const LoggedDataset& ds,
                         ObjectiveSpec spec)
    : spec_(spec),
      m_(ds.m),
      num_actions_(problem.num_actions()),
      feature_dim_(feature_dimension(problem.context_dim(), problem.action_dim())),
      n_(ds.n()) {
  if (spec_.kind == ObjectiveKind::true_value) {
    throw std::invalid_argument("true-value objective needs contexts, not a dataset");
  }
  phi_.resize(n_);
  logged_action_.resize(n_);
  logged_propensity_.resize(n_);
  logged_reward_.resize(n_);
  for (int t = 0; t < n_; ++t) {
    const LoggedRecord& rec = ds.records[t];
    phi_[t].resize(num_actions_);
    for (int a = 0; a < num_actions_; ++a) phi_[t][a] = features(rec.x, problem.actions[a]);
    logged_action_[t] = rec.a_index;
    logged_propensity_[t] = rec.propensity;
    logged_reward_[t] = rec.y;
  }
  if (spec_.kind == ObjectiveKind::pessimistic_ips) {
    const LoggingPolicy logging{ds.epsilon, &problem};
    logging_probs_ = logging_distributions(ds, logging);
  }
  if (spec_.kind == ObjectiveKind::ehvi) {
    resamples_.resize(spec_.ehvi_resamples);
    if (spec_.ehvi_identity) {
      for (auto& indices : resamples_) {
        indices.resize(n_);
        std::iota(indices.begin(), indices.end(), 0);
      }
    } else {
      Rng rng(spec_.seed);
      std::uniform_int_distribution<int> pick(0, n_ - 1);
      for (auto& indices : resamples_) {
        indices.resize(n_);
        for (int& idx : indices) idx = pick(rng);
      }
    }
  }
  if (spec_.hv.kind == HypervolumeMethod::Kind::scalarized) {
    Rng rng(spec_.seed + 1);
    directions_ = sample_directions(m_, spec_.hv.samples, rng);
  }
}

HvObjective::PolicyEval HvObjective::evaluate_policy(const SoftmaxPolicy& policy,
                                                     bool with_gradient) const {
  PolicyEval eval;
  const int dim = feature_dim_;
  Vec probs(num_actions_);
  Vec s_t(dim);       // sum_a pi(a) phi(a)
  Vec g_t(dim);       // phi(A_t) - s_t

  Vec raw(m_, 0.0);
  std::vector<Vec> jac;
  if (with_gradient) jac.assign(m_, Vec(dim, 0.0));

  // Width accumulators (pessimistic only).
  double sum_max_sq = 0.0;
  Vec dwidth_sum(with_gradient ? dim : 0, 0.0);

  // Per-record contributions for bootstrap resamples (ehvi only): the
  // resampled sums reuse w_t, y_t and g_t, so those are cached per t.
  Vec w_cache(spec_.kind == ObjectiveKind::ehvi ? n_ : 0, 0.0);
  std::vector<Vec> g_cache;
  if (spec_.kind == ObjectiveKind::ehvi && with_gradient) g_cache.assign(n_, Vec(dim, 0.0));

  for (int t = 0; t < n_; ++t) {
    // softmax over cached feature dot products
    double max_logit = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < num_actions_; ++a) {
      probs[a] = dot(phi_[t][a], policy.theta);
      max_logit = std::max(max_logit, probs[a]);
    }
    if (!std::isfinite(max_logit)) throw std::runtime_error("non-finite policy logits");
    double z = 0.0;
    for (int a = 0; a < num_actions_; ++a) {
      probs[a] = std::exp(probs[a] - max_logit);
      z += probs[a];
    }
    for (int a = 0; a < num_actions_; ++a) probs[a] /= z;

    if (with_gradient) {
      std::fill(s_t.begin(), s_t.end(), 0.0);
      for (int a = 0; a < num_actions_; ++a) axpy(probs[a], phi_[t][a], s_t);
    }

    if (spec_.kind == ObjectiveKind::true_value) {
      for (int i = 0; i < m_; ++i) {
        double q = 0.0;
        for (int a = 0; a < num_actions_; ++a) q += probs[a] * rewards_[t][a][i];
        raw[i] += q;
        if (with_gradient) {
          for (int a = 0; a < num_actions_; ++a) {
            axpy(probs[a] * rewards_[t][a][i], phi_[t][a], jac[i]);
          }
          axpy(-q, s_t, jac[i]);
        }
      }
      continue;
    }

    const int at = logged_action_[t];
    const double w = probs[at] / logged_propensity_[t];
    if (with_gradient) {
      g_t = phi_[t][at];
      axpy(-1.0, s_t, g_t);
    }
    if (spec_.kind == ObjectiveKind::ehvi) {
      w_cache[t] = w;
      if (with_gradient) g_cache[t] = g_t;
      continue;  // ehvi sums are formed per resample below
    }

    for (int i = 0; i < m_; ++i) {
      raw[i] += w * logged_reward_[t][i];
      if (with_gradient) axpy(w * logged_reward_[t][i], g_t, jac[i]);
    }

    if (spec_.kind == ObjectiveKind::pessimistic_ips) {
      double max_ratio = 0.0;
      double second_ratio = 0.0;
      int arg_a = 0;
      for (int a = 0; a < num_actions_; ++a) {
        const double ratio = probs[a] / logging_probs_[t][a];
        if (ratio > max_ratio) {
          second_ratio = max_ratio;
          max_ratio = ratio;
          arg_a = a;
        } else if (ratio > second_ratio) {
          second_ratio = ratio;
        }
      }
      eval.min_argmax_gap = std::min(eval.min_argmax_gap, max_ratio - second_ratio);
      sum_max_sq += max_ratio * max_ratio;
      if (with_gradient) {
        // d(M_t^2)/2 = M_t dM_t with dM_t = M_t (phi(a*) - s_t)
        axpy(max_ratio * max_ratio, phi_[t][arg_a], dwidth_sum);
        axpy(-max_ratio * max_ratio, s_t, dwidth_sum);
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n_);

  if (spec_.kind == ObjectiveKind::ehvi) {
    const int num_resamples = static_cast<int>(resamples_.size());
    eval.resample_values.assign(num_resamples, Vec(m_, 0.0));
    if (with_gradient) {
      eval.resample_jac.assign(num_resamples, std::vector<Vec>(m_, Vec(feature_dim_, 0.0)));
    }
    eval.value.assign(m_, 0.0);  // full-data IPS point estimate
    for (int t = 0; t < n_; ++t) {
      for (int i = 0; i < m_; ++i) eval.value[i] += w_cache[t] * logged_reward_[t][i] * inv_n;
    }
    for (double& vi : eval.value) vi = std::clamp(vi, 0.0, 1.0);
    eval.resample_raw.assign(num_resamples, Vec(m_, 0.0));
    for (int j = 0; j < num_resamples; ++j) {
      Vec& vj = eval.resample_values[j];
      for (int t : resamples_[j]) {
        for (int i = 0; i < m_; ++i) vj[i] += w_cache[t] * logged_reward_[t][i] * inv_n;
      }
      eval.resample_raw[j] = vj;
      for (int i = 0; i < m_; ++i) {
        const bool interior = vj[i] > 0.0 && vj[i] < 1.0;
        if (with_gradient && interior) {
          Vec& jij = eval.resample_jac[j][i];
          for (int t : resamples_[j]) {
            axpy(w_cache[t] * logged_reward_[t][i] * inv_n, g_cache[t], jij);
          }
        }
        vj[i] = std::clamp(vj[i], 0.0, 1.0);
      }
    }
    return eval;
  }

  for (int i = 0; i < m_; ++i) raw[i] *= inv_n;
  if (with_gradient) {
    for (Vec& ji : jac) {
      for (double& v : ji) v *= inv_n;
    }
  }

  double width = 0.0;
  if (spec_.kind == ObjectiveKind::pessimistic_ips) {
    const double m_pi = std::sqrt(sum_max_sq);
    width = spec_.conf.beta * spec_.conf.sigma * m_pi * inv_n;
    if (with_gradient && m_pi > 0.0 && width > 0.0) {
      const double scale = spec_.conf.beta * spec_.conf.sigma * inv_n / m_pi;
      for (int i = 0; i < m_; ++i) axpy(-scale, dwidth_sum, jac[i]);
    }
  }

  eval.value.resize(m_);
  eval.raw.resize(m_);
  for (int i = 0; i < m_; ++i) {
    double v = raw[i];
    if (spec_.kind != ObjectiveKind::true_value) v -= width;
    eval.raw[i] = v;
    const bool interior = spec_.kind == ObjectiveKind::true_value || (v > 0.0 && v < 1.0);
    eval.value[i] = std::clamp(v, 0.0, 1.0);
    if (with_gradient && !interior) std::fill(jac[i].begin(), jac[i].end(), 0.0);
  }
  if (with_gradient) eval.jac = std::move(jac);
  return eval;
}

Vec HvObjective::policy_value(const SoftmaxPolicy& policy) const {
  return evaluate_policy(policy, false).value;
}

double HvObjective::kink_margin(const PolicySet& policies) const {
  double margin = std::numeric_limits<double>::infinity();
  std::vector<PolicyEval> evals;
  evals.reserve(policies.size());
  for (const SoftmaxPolicy& p : policies) evals.push_back(evaluate_policy(p, false));

  auto front_margin = [&](const std::vector<const Vec*>& pts) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      for (std::size_t l = k + 1; l < pts.size(); ++l) {
        for (int i = 0; i < m_; ++i) {
          margin = std::min(margin, std::abs((*pts[k])[i] - (*pts[l])[i]));
        }
      }
    }
  };

  if (spec_.kind == ObjectiveKind::ehvi) {
    for (std::size_t j = 0; j < resamples_.size(); ++j) {
      std::vector<const Vec*> pts;
      for (const PolicyEval& e : evals) {
        for (double v : e.resample_raw[j]) {
          margin = std::min(margin, std::min(std::abs(v), std::abs(v - 1.0)));
        }
        pts.push_back(&e.resample_values[j]);
      }
      front_margin(pts);
    }
    return margin;
  }

  std::vector<const Vec*> pts;
  for (const PolicyEval& e : evals) {
    if (spec_.kind != ObjectiveKind::true_value) {
      for (double v : e.raw) {
        margin = std::min(margin, std::min(std::abs(v), std::abs(v - 1.0)));
      }
    }
    if (spec_.kind == ObjectiveKind::pessimistic_ips) {
      margin = std::min(margin, e.min_argmax_gap);
    }
    pts.push_back(&e.value);
  }
  front_margin(pts);
  return margin;
}

namespace {

double front_hv(const FrontPoints& pts, const HypervolumeMethod& method,
                const std::vector<Vec>& directions) {
  switch (method.kind) {
    case HypervolumeMethod::Kind::exact2d:
      return hv_exact_2d(pts);
    case HypervolumeMethod::Kind::scalarized:
      return hv_scalarized_fixed(pts, directions);
    case HypervolumeMethod::Kind::inclusion_exclusion:
      return hv_inclusion_exclusion(pts);
    case HypervolumeMethod::Kind::monte_carlo: {
      Rng rng(method.seed);
      return hv_monte_carlo(pts, method.samples, rng);
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Vec> front_hv_gradient(const FrontPoints& pts, const HypervolumeMethod& method,
                                   const std::vector<Vec>& directions) {
  switch (method.kind) {
    case HypervolumeMethod::Kind::exact2d:
      return hv_gradient_2d(pts);
    case HypervolumeMethod::Kind::scalarized:
      return hv_gradient_scalarized(pts, directions);
    default:
      throw std::invalid_argument(
          "hypervolume gradients require the exact2d or scalarized method");
  }
}

}  // namespace

double HvObjective::value(const PolicySet& policies) const {
  std::vector<PolicyEval> evals;
  evals.reserve(policies.size());
  for (const SoftmaxPolicy& p : policies) evals.push_back(evaluate_policy(p, false));

  if (spec_.kind == ObjectiveKind::ehvi) {
    const int num_resamples = static_cast<int>(resamples_.size());
    double total = 0.0;
    for (int j = 0; j < num_resamples; ++j) {
      FrontPoints pts;
      pts.points.reserve(policies.size());
      for (const PolicyEval& e : evals) pts.points.push_back(e.resample_values[j]);
      total += front_hv(pts, spec_.hv, directions_);
    }
    return total / num_resamples;
  }

  FrontPoints pts;
  pts.points.reserve(policies.size());
  for (const PolicyEval& e : evals) pts.points.push_back(e.value);
  return front_hv(pts, spec_.hv, directions_);
}

double HvObjective::value_and_gradient(const PolicySet& policies, Vec& grad) const {
  const int K = static_cast<int>(policies.size());
  grad.assign(static_cast<std::size_t>(K) * feature_dim_, 0.0);
  std::vector<PolicyEval> evals;
  evals.reserve(K);
  for (const SoftmaxPolicy& p : policies) evals.push_back(evaluate_policy(p, true));

  if (spec_.kind == ObjectiveKind::ehvi) {
    const int num_resamples = static_cast<int>(resamples_.size());
    double total = 0.0;
    for (int j = 0; j < num_resamples; ++j) {
      FrontPoints pts;
      pts.points.reserve(K);
      for (const PolicyEval& e : evals) pts.points.push_back(e.resample_values[j]);
      total += front_hv(pts, spec_.hv, directions_);
      const std::vector<Vec> dvol = front_hv_gradient(pts, spec_.hv, directions_);
      for (int k = 0; k < K; ++k) {
        for (int i = 0; i < m_; ++i) {
          const double coef = dvol[k][i] / num_resamples;
          if (coef == 0.0) continue;
          const Vec& jki = evals[k].resample_jac[j][i];
          for (int dd = 0; dd < feature_dim_; ++dd) {
            grad[k * feature_dim_ + dd] += coef * jki[dd];
          }
        }
      }
    }
    return total / num_resamples;
  }

  FrontPoints pts;
  pts.points.reserve(K);
  for (const PolicyEval& e : evals) pts.points.push_back(e.value);
  const double vol = front_hv(pts, spec_.hv, directions_);
  const std::vector<Vec> dvol = front_hv_gradient(pts, spec_.hv, directions_);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < m_; ++i) {
      const double coef = dvol[k][i];
      if (coef == 0.0) continue;
      const Vec& jki = evals[k].jac[i];
      for (int dd = 0; dd < feature_dim_; ++dd) {
        grad[k * feature_dim_ + dd] += coef * jki[dd];
      }
    }
  }
  return vol;
}

std::vector<int> greedy_select_indices(const std::vector<Vec>& pool_values, int K,
                                       const HypervolumeMethod& method) {
  if (static_cast<int>(pool_values.size()) < K) {
    throw std::invalid_argument("greedy_select: pool smaller than K");
  }
  std::vector<int> selected;
  std::vector<bool> used(pool_values.size(), false);
  FrontPoints pts;
  for (int k = 0; k < K; ++k) {
    int best = -1;
    double best_vol = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < pool_values.size(); ++c) {
      if (used[c]) continue;
      pts.points.push_back(pool_values[c]);
      const double vol = hypervolume(pts, method);
      pts.points.pop_back();
      if (vol > best_vol) {
        best_vol = vol;
        best = static_cast<int>(c);
      }
    }
    used[best] = true;
    selected.push_back(best);
    pts.points.push_back(pool_values[best]);
  }
  return selected;
}

PolicySet greedy_select(const PolicySet& pool, int K, const ValueFn& value_fn,
                        const HypervolumeMethod& method) {
  std::vector<Vec> values;
  values.reserve(pool.size());
  for (const SoftmaxPolicy& p : pool) values.push_back(value_fn(p));
  PolicySet out;
  for (int idx : greedy_select_indices(values, K, method)) out.push_back(pool[idx]);
  return out;
}

PolicySet policy_gradient_ascent(const PolicySet& init, const HvObjective& objective,
                                 const GradientConfig& config) {
  if (init.empty()) throw std::invalid_argument("policy_gradient_ascent: empty init");
  const int K = static_cast<int>(init.size());
  const int dim = objective.feature_dim();
  const std::size_t total = static_cast<std::size_t>(K) * dim;

  PolicySet best_set = init;
  double best_val = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
    Vec theta(total);
    if (restart == 0) {
      for (int k = 0; k < K; ++k) {
        std::copy(init[k].theta.begin(), init[k].theta.end(), theta.begin() + k * dim);
      }
    } else {
      Rng rng(config.seed + static_cast<std::uint64_t>(restart));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (double& t : theta) t = config.init_scale * gauss(rng);
    }

    Vec m1(total, 0.0), m2(total, 0.0), grad(total);
    PolicySet current(K);
    auto unpack = [&] {
      for (int k = 0; k < K; ++k) {
        current[k].theta.assign(theta.begin() + k * dim, theta.begin() + (k + 1) * dim);
      }
    };

    for (int iter = 1; iter <= config.iterations; ++iter) {
      unpack();
      const double val = objective.value_and_gradient(current, grad);
      if (!std::isfinite(val)) {
        throw std::runtime_error("non-finite objective at iteration " + std::to_string(iter));
      }
      if (val > best_val) {
        best_val = val;
        best_set = current;
      }
      const double bc1 = 1.0 - std::pow(config.adam.beta1, iter);
      const double bc2 = 1.0 - std::pow(config.adam.beta2, iter);
      for (std::size_t i = 0; i < total; ++i) {
        if (!std::isfinite(grad[i])) {
          throw std::runtime_error("non-finite gradient at iteration " + std::to_string(iter));
        }
        m1[i] = config.adam.beta1 * m1[i] + (1.0 - config.adam.beta1) * grad[i];
        m2[i] = config.adam.beta2 * m2[i] + (1.0 - config.adam.beta2) * grad[i] * grad[i];
        theta[i] += config.learning_rate * (m1[i] / bc1) /
                    (std::sqrt(m2[i] / bc2) + config.adam.eps);
      }
    }
    unpack();
    const double final_val = objective.value(current);
    if (final_val > best_val) {
      best_val = final_val;
      best_set = current;
    }
  }
  return best_set;
}

PolicySet random_policy_baseline(int K, int dim, Rng& rng) {
  if (K < 1) throw std::invalid_argument("random_policy_baseline: K >= 1 required");
  PolicySet out;
  out.reserve(K);
  for (int k = 0; k < K; ++k) out.push_back(random_unit_ball_policy(dim, rng));
  return out;
}

}  // namespace mopo
