/*
 Copyright 2026 The eddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "eddp/entropy_ddp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "eddp/errors.hpp"

namespace eddp {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDdp:
      return "ddp";
    case Algorithm::kShannonUnimodal:
      return "me_shannon_uni";
    case Algorithm::kShannonMultimodal:
      return "me_shannon_multi";
    case Algorithm::kTsallis:
      return "me_tsallis";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const Algorithm algo :
       {Algorithm::kDdp, Algorithm::kShannonUnimodal,
        Algorithm::kShannonMultimodal, Algorithm::kTsallis}) {
    if (name == to_string(algo)) {
      return algo;
    }
  }
  return std::nullopt;
}

namespace {

void check_normalization_inputs(double alpha, EntropicIndex q, int n_u) {
  if (n_u < 1) {
    throw DomainError("control dimension must be positive");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be positive");
  }
  if (!(q.value() > 1.0) || !(q.value() < qgauss::max_q(n_u))) {
    throw DomainError("q = " + std::to_string(q.value()) +
                      " outside (1, 1 + 2/n_u) for n_u = " +
                      std::to_string(n_u));
  }
}

double log_normalization_lhs(double log_c, double v_tilde, double alpha,
                             double q_minus_one, int n_u) {
  const double c = std::exp(log_c);
  return log_c + 0.5 * n_u * q_minus_one *
                     std::log(v_tilde + alpha * c / q_minus_one);
}

double log_normalization_rhs(double alpha, EntropicIndex q, int n_u,
                             double quu_inv_det) {
  check_normalization_inputs(alpha, q, n_u);
  if (!(quu_inv_det > 0.0) || !std::isfinite(quu_inv_det)) {
    throw DomainError("|Q_uu^{-1}| must be positive and finite");
  }
  const double qv = q.value();
  const double s = 1.0 / (qv - 1.0);
  const double half_n = 0.5 * n_u;
  const double gamma_arg = s - half_n;
  if (!(gamma_arg > 0.0)) {
    throw PoleError("gamma pole: q too close to 1 + 2/n_u");
  }
  const double log_gamma_ratio =
      tsallis::log_gamma_fn(gamma_arg) - tsallis::log_gamma_fn(s);
  const double log_bracket = 0.5 * std::log(quu_inv_det) +
                             half_n * std::log(2.0 * std::numbers::pi) +
                             log_gamma_ratio;
  const double value =
      std::log((n_u + 2.0 - n_u * qv) / 2.0) + (1.0 - qv) * log_bracket;
  if (!std::isfinite(value)) {
    throw PoleError("normalization right-hand side is not finite");
  }
  return value;
}

Matrix lower_factor(const Matrix& spd) {
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw DomainError("policy covariance is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

double normalization_lhs(double c, double v_tilde, double alpha,
                         EntropicIndex q, int n_u) {
  const double q_minus_one = q.value() - 1.0;
  return std::pow(v_tilde + alpha * c / q_minus_one, 0.5 * n_u * q_minus_one) *
         c;
}

double normalization_rhs(double alpha, EntropicIndex q, int n_u,
                         double quu_inv_det) {
  return std::exp(log_normalization_rhs(alpha, q, n_u, quu_inv_det));
}

double solve_normalization_constant(double v_tilde, double alpha,
                                    EntropicIndex q, int n_u,
                                    double quu_inv_det) {
  if (!(v_tilde >= 0.0) || !std::isfinite(v_tilde)) {
    throw DomainError("value estimate must be nonnegative and finite");
  }
  const double target = log_normalization_rhs(alpha, q, n_u, quu_inv_det);
  const double q_minus_one = q.value() - 1.0;
  auto f = [&](double log_c) {
    return log_normalization_lhs(log_c, v_tilde, alpha, q_minus_one, n_u) -
           target;
  };

  constexpr int kMaxDoublings = 200;
  const double step = std::numbers::ln2;
  double lo = 0.0;
  double hi = 0.0;
  int doublings = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi += step;
    if (++doublings > kMaxDoublings) {
      throw BracketError("normalization constant: upper bracket not found");
    }
  }
  doublings = 0;
  while (f(lo) > 0.0) {
    hi = lo;
    lo -= step;
    if (++doublings > kMaxDoublings) {
      throw BracketError("normalization constant: lower bracket not found");
    }
  }
  // f is strictly increasing in log C; shrink [lo, hi] to machine precision.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi);
}

GaussianPolicy build_gaussian_policy(const BackwardResult& bwd, double alpha) {
  if (!(alpha > 0.0)) {
    throw DomainError("alpha must be positive");
  }
  GaussianPolicy policy;
  policy.k = bwd.k;
  policy.K = bwd.K;
  policy.covariance.reserve(bwd.horizon());
  policy.covariance_factor.reserve(bwd.horizon());
  for (const Matrix& quu_inv : bwd.Quu_inv) {
    policy.covariance.push_back(0.5 * alpha * (quu_inv + quu_inv.transpose()));
    policy.covariance_factor.push_back(lower_factor(policy.covariance.back()));
  }
  return policy;
}

QGaussianPolicy build_qgaussian_policy(const BackwardResult& bwd,
                                       double alpha, EntropicIndex q,
                                       std::optional<double> covariance_cap) {
  const int horizon = bwd.horizon();
  if (horizon == 0) {
    return QGaussianPolicy{};
  }
  const int n_u = static_cast<int>(bwd.k.front().size());
  check_normalization_inputs(alpha, q, n_u);
  const double qv = q.value();
  const double denom = n_u + 2.0 - n_u * qv;

  QGaussianPolicy policy;
  policy.k = bwd.k;
  policy.K = bwd.K;
  policy.q = q;
  policy.normalization.reserve(horizon);
  policy.scale.reserve(horizon);
  policy.sigma_q.reserve(horizon);
  policy.escort.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    const double v_tilde = bwd.value_estimate[t];
    if (v_tilde < 0.0) {
      throw DomainError("negative value estimate at timestep " +
                        std::to_string(t));
    }
    const double det = bwd.Quu_inv[t].determinant();
    const double c = solve_normalization_constant(v_tilde, alpha, q, n_u, det);
    double scale = 2.0 * ((qv - 1.0) * v_tilde + c * alpha) / denom;
    if (covariance_cap) {
      scale = std::min(scale, *covariance_cap);
    }
    policy.normalization.push_back(c);
    policy.scale.push_back(scale);
    policy.sigma_q.push_back(0.5 * scale * (bwd.Quu_inv[t] + bwd.Quu_inv[t].transpose()));
    policy.escort.push_back(qgauss::escort_transform(qgauss::QGaussianND(
        q, Vector::Zero(n_u), policy.sigma_q.back())));
  }
  return policy;
}

std::vector<double> softmax_weights(std::span<const double> costs,
                                    double alpha) {
  if (costs.empty()) {
    return {};
  }
  std::vector<double> logits(costs.size());
  std::transform(costs.begin(), costs.end(), logits.begin(),
                 [alpha](double j) { return -j / alpha; });
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    sum += l;
  }
  for (double& l : logits) {
    l /= sum;
  }
  return logits;
}

MixturePolicy fuse_multimodal(std::span<const BackwardResult> bwds,
                              std::span<const Trajectory> trajs,
                              double alpha) {
  if (bwds.empty() || bwds.size() != trajs.size()) {
    throw DomainError("mixture needs one backward result per trajectory");
  }
  MixturePolicy policy;
  std::vector<double> costs;
  for (std::size_t n = 0; n < bwds.size(); ++n) {
    policy.components.push_back(build_gaussian_policy(bwds[n], alpha));
    policy.nominals.push_back(trajs[n]);
    costs.push_back(trajs[n].cost);
  }
  policy.weights = softmax_weights(costs, alpha);
  return policy;
}

Trajectory closed_loop_rollout(const Trajectory& base,
                               std::span<const Vector> k,
                               std::span<const Matrix> K,
                               std::span<const Vector> noise,
                               const DynamicsModel& dyn,
                               const CostModel& cost) {
  const int horizon = base.horizon();
  Trajectory out;
  out.states.reserve(horizon + 1);
  out.controls.reserve(horizon);
  out.states.push_back(base.states[0]);
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const Vector& x = out.states.back();
    Vector u = base.controls[t] + k[t] + K[t] * (x - base.states[t]) + noise[t];
    total += cost.running(x, u, t);
    Vector next = dyn.step(x, u);
    if (!next.allFinite()) {
      throw RolloutDivergence(t + 1);
    }
    out.controls.push_back(std::move(u));
    out.states.push_back(std::move(next));
  }
  total += cost.terminal(out.states.back());
  if (!std::isfinite(total)) {
    throw RolloutDivergence(horizon);
  }
  out.cost = total;
  return out;
}

std::vector<Vector> draw_noise(const GaussianPolicy& policy,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> noise;
  noise.reserve(policy.covariance_factor.size());
  for (const Matrix& lower : policy.covariance_factor) {
    Vector z(lower.rows());
    for (int j = 0; j < z.size(); ++j) {
      z(j) = normal(rng);
    }
    noise.push_back(lower * z);
  }
  return noise;
}

std::vector<Vector> draw_noise(const QGaussianPolicy& policy,
                               std::mt19937_64& rng) {
  std::vector<Vector> noise;
  noise.reserve(policy.escort.size());
  for (const qgauss::QGaussianND& escort : policy.escort) {
    noise.push_back(qgauss::sample(escort, rng, 1).row(0).transpose());
  }
  return noise;
}

namespace {

constexpr int kSampleRetries = 5;

template <typename NoiseFn>
Trajectory resample(const Trajectory& base, std::span<const Vector> k,
                    std::span<const Matrix> K, const DynamicsModel& dyn,
                    const CostModel& cost, NoiseFn&& noise_fn) {
  for (int attempt = 0; attempt <= kSampleRetries; ++attempt) {
    const std::vector<Vector> noise = noise_fn();
    try {
      return closed_loop_rollout(base, k, K, noise, dyn, cost);
    } catch (const RolloutDivergence&) {
      continue;
    }
  }
  return base;
}

}  // namespace

Trajectory sample_control_sequence(const GaussianPolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost,
                                   std::mt19937_64& rng) {
  return resample(base, policy.k, policy.K, dyn, cost,
                  [&] { return draw_noise(policy, rng); });
}

Trajectory sample_control_sequence(const QGaussianPolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost,
                                   std::mt19937_64& rng) {
  return resample(base, policy.k, policy.K, dyn, cost,
                  [&] { return draw_noise(policy, rng); });
}

Trajectory sample_control_sequence(const MixturePolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost,
                                   std::mt19937_64& rng) {
  if (policy.components.empty()) {
    return base;
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double r = uniform(rng);
  std::size_t pick = policy.weights.size() - 1;
  double acc = 0.0;
  for (std::size_t n = 0; n < policy.weights.size(); ++n) {
    acc += policy.weights[n];
    if (r < acc) {
      pick = n;
      break;
    }
  }
  const GaussianPolicy& component = policy.components[pick];
  Trajectory nominal = policy.nominals[pick];
  nominal.states[0] = base.states[0];
  for (int attempt = 0; attempt <= kSampleRetries; ++attempt) {
    const std::vector<Vector> noise = draw_noise(component, rng);
    try {
      return closed_loop_rollout(nominal, component.k, component.K, noise, dyn,
                                 cost);
    } catch (const RolloutDivergence&) {
      continue;
    }
  }
  return base;
}

void SolverConfig::validate(int n_u) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha: must be positive, got " + std::to_string(alpha));
  }
  if (modes < 1) {
    throw DomainError("modes: must be at least 1");
  }
  if (sample_every < 1) {
    throw DomainError("sample_every: must be at least 1");
  }
  if (max_iter < 1) {
    throw DomainError("max_iter: must be at least 1");
  }
  if (covariance_cap && !(*covariance_cap > 0.0)) {
    throw DomainError("covariance_cap: must be positive");
  }
  if (algorithm == Algorithm::kTsallis &&
      (!(q.value() > 1.0) || !(q.value() < qgauss::max_q(n_u)))) {
    throw DomainError("q: " + std::to_string(q.value()) +
                      " outside (1, " + std::to_string(qgauss::max_q(n_u)) +
                      ") for n_u = " + std::to_string(n_u));
  }
}

namespace {

// Backward pass at the smallest regularization that makes every Q_uu
// positive definite; used for building exploration policies.
std::optional<BackwardResult> policy_backward(const Trajectory& traj,
                                              const DynamicsModel& dyn,
                                              const CostModel& cost) {
  Regularization reg;
  reg.value = reg.floor;
  while (!reg.exhausted()) {
    try {
      return backward_pass(traj, dyn, cost, reg.value);
    } catch (const RegularizationNeeded&) {
      reg.increase();
    }
  }
  return std::nullopt;
}

std::mt19937_64 mode_rng(std::uint64_t seed, int mode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(mode)};
  return std::mt19937_64(seq);
}

}  // namespace

RunResult run(const SolverConfig& config, const DynamicsModel& dyn,
              const CostModel& cost, const Vector& x0,
              std::span<const std::vector<Vector>> initial_controls) {
  config.validate(dyn.control_dim());
  if (initial_controls.empty()) {
    throw DomainError("initial_controls: at least one sequence required");
  }
  const bool sampling = config.algorithm != Algorithm::kDdp;
  const int modes = sampling ? config.modes : 1;

  std::vector<Trajectory> trajs;
  std::vector<Regularization> regs(modes);
  std::vector<std::mt19937_64> rngs;
  for (int n = 0; n < modes; ++n) {
    const auto& init = initial_controls[static_cast<std::size_t>(n) %
                                        initial_controls.size()];
    trajs.push_back(rollout(dyn, cost, x0, init));
    rngs.push_back(mode_rng(config.seed, n));
  }

  const std::vector<double> schedule = default_step_schedule();
  RunResult result;
  result.cost_history.reserve(config.max_iter);

  for (int iter = 0; iter < config.max_iter; ++iter) {
    if (sampling && modes > 1 && iter % config.sample_every == 0) {
      const auto best_it = std::min_element(
          trajs.begin(), trajs.end(),
          [](const Trajectory& a, const Trajectory& b) { return a.cost < b.cost; });
      const auto b = static_cast<std::size_t>(best_it - trajs.begin());
      std::swap(trajs[0], trajs[b]);
      std::swap(regs[0], regs[b]);

      auto replace = [&](auto&& sampler) {
        for (int n = 1; n < modes; ++n) {
          trajs[n] = sampler(trajs[0], rngs[n]);
          regs[n] = Regularization{};
        }
      };

      if (config.algorithm == Algorithm::kShannonMultimodal) {
        std::vector<BackwardResult> bwds;
        std::vector<Trajectory> nominals;
        for (const Trajectory& traj : trajs) {
          if (auto bwd = policy_backward(traj, dyn, cost)) {
            bwds.push_back(std::move(*bwd));
            nominals.push_back(traj);
          }
        }
        if (!bwds.empty()) {
          const MixturePolicy policy =
              fuse_multimodal(bwds, nominals, config.alpha);
          replace([&](const Trajectory& base, std::mt19937_64& rng) {
            return sample_control_sequence(policy, base, dyn, cost, rng);
          });
        }
      } else if (auto bwd = policy_backward(trajs[0], dyn, cost)) {
        if (config.algorithm == Algorithm::kTsallis) {
          const QGaussianPolicy policy = build_qgaussian_policy(
              *bwd, config.alpha, config.q, config.covariance_cap);
          replace([&](const Trajectory& base, std::mt19937_64& rng) {
            return sample_control_sequence(policy, base, dyn, cost, rng);
          });
        } else {
          const GaussianPolicy policy = build_gaussian_policy(*bwd, config.alpha);
          replace([&](const Trajectory& base, std::mt19937_64& rng) {
            return sample_control_sequence(policy, base, dyn, cost, rng);
          });
        }
      }
    }

    std::vector<double> costs(modes);
    for (int n = 0; n < modes; ++n) {
      SweepResult sweep = ddp_sweep(trajs[n], dyn, cost, regs[n], schedule);
      if (sweep.backward_failed) {
        ++result.backward_failures;
      }
      trajs[n] = std::move(sweep.search.trajectory);
      costs[n] = trajs[n].cost;
    }
    result.best_history.push_back(*std::min_element(costs.begin(), costs.end()));
    result.cost_history.push_back(std::move(costs));
  }

  const auto best_it = std::min_element(
      trajs.begin(), trajs.end(),
      [](const Trajectory& a, const Trajectory& b) { return a.cost < b.cost; });
  result.best = *best_it;
  for (const Trajectory& traj : trajs) {
    result.final_costs.push_back(traj.cost);
  }
  return result;
}

}  // namespace eddp
