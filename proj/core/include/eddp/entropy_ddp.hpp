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

// Maximum-entropy DDP solvers: Shannon (Gaussian and Gaussian-mixture
// exploration policies) and Tsallis (q-Gaussian policy whose covariance is
// scaled by the nominal value), plus the multi-mode driver.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eddp/qgauss.hpp"
#include "eddp/trajopt.hpp"
#include "eddp/tsallis_math.hpp"

namespace eddp {

enum class Algorithm { kDdp, kShannonUnimodal, kShannonMultimodal, kTsallis };

std::string_view to_string(Algorithm algo);
// Accepts ddp, me_shannon_uni, me_shannon_multi, me_tsallis.
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct GaussianPolicy {
  std::vector<Vector> k;
  std::vector<Matrix> K;
  std::vector<Matrix> covariance;  // alpha * Q_uu^{-1}
  std::vector<Matrix> covariance_factor;  // lower Cholesky factor
};

struct QGaussianPolicy {
  std::vector<Vector> k;
  std::vector<Matrix> K;
  EntropicIndex q{2.0};
  std::vector<double> normalization;  // C_t
  std::vector<double> scale;          // Sigma_q,t = scale_t * Q_uu,t^{-1}
  std::vector<Matrix> sigma_q;
  // Zero-mean escort distributions of N(0, Sigma_q,t) in q-Gaussian form.
  std::vector<qgauss::QGaussianND> escort;
};

struct MixturePolicy {
  std::vector<GaussianPolicy> components;
  std::vector<Trajectory> nominals;
  std::vector<double> weights;
};

/// Left side [V + alpha C/(q-1)]^{n_u (q-1)/2} C of the escort normalization
/// condition, increasing in C.
double normalization_lhs(double c, double v_tilde, double alpha,
                         EntropicIndex q, int n_u);
double normalization_rhs(double alpha, EntropicIndex q, int n_u,
                         double quu_inv_det);

/// Solves for the escort normalizer C = int pi^q du by bisection (in log C)
/// with bracket expansion. Requires 1 < q < 1 + 2/n_u and v_tilde >= 0.
double solve_normalization_constant(double v_tilde, double alpha,
                                    EntropicIndex q, int n_u,
                                    double quu_inv_det);

GaussianPolicy build_gaussian_policy(const BackwardResult& bwd, double alpha);

/// Sigma_q,t = 2[(q-1) V_t + C_t alpha] / (n_u + 2 - n_u q) * Q_uu,t^{-1},
/// with the scalar multiplier optionally clipped at covariance_cap.
QGaussianPolicy build_qgaussian_policy(
    const BackwardResult& bwd, double alpha, EntropicIndex q,
    std::optional<double> covariance_cap = std::nullopt);

/// Softmax(-J/alpha) weights over the modes, computed in log space.
std::vector<double> softmax_weights(std::span<const double> costs,
                                    double alpha);

MixturePolicy fuse_multimodal(std::span<const BackwardResult> bwds,
                              std::span<const Trajectory> trajs, double alpha);

/// u_t = ubar_t + k_t + K_t (x_t - xbar_t) + noise_t. Throws
/// RolloutDivergence.
Trajectory closed_loop_rollout(const Trajectory& base,
                               std::span<const Vector> k,
                               std::span<const Matrix> K,
                               std::span<const Vector> noise,
                               const DynamicsModel& dyn,
                               const CostModel& cost);

// Exploration-noise draws for every timestep of a policy.
std::vector<Vector> draw_noise(const GaussianPolicy& policy,
                               std::mt19937_64& rng);
std::vector<Vector> draw_noise(const QGaussianPolicy& policy,
                               std::mt19937_64& rng);

/// Closed-loop resampling around `base`. Divergent rollouts are retried up to
/// five times, after which `base` is returned unchanged.
Trajectory sample_control_sequence(const GaussianPolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost, std::mt19937_64& rng);
Trajectory sample_control_sequence(const QGaussianPolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost, std::mt19937_64& rng);
// Draws one component per sequence and rolls out around that component's
// own nominal; `base` supplies x0 and the fallback.
Trajectory sample_control_sequence(const MixturePolicy& policy,
                                   const Trajectory& base,
                                   const DynamicsModel& dyn,
                                   const CostModel& cost, std::mt19937_64& rng);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kTsallis;
  double alpha = 1.0;
  EntropicIndex q{1.8};
  int modes = 8;
  int sample_every = 5;
  int max_iter = 100;
  std::uint64_t seed = 0;
  std::optional<double> covariance_cap;

  /// Throws DomainError naming the offending field.
  void validate(int n_u) const;
};

struct RunResult {
  Trajectory best;
  // cost_history[i][n]: cost of mode n after iteration i.
  std::vector<std::vector<double>> cost_history;
  std::vector<double> best_history;
  std::vector<double> final_costs;
  int backward_failures = 0;
};

/// Multi-mode generalized ME-DDP. Every sample_every iterations the lowest
/// cost mode is kept and the other modes are resampled from the policy built
/// at it; every iteration each mode takes one DDP sweep. For kDdp a single
/// mode is optimized without sampling.
RunResult run(const SolverConfig& config, const DynamicsModel& dyn,
              const CostModel& cost, const Vector& x0,
              std::span<const std::vector<Vector>> initial_controls);

}  // namespace eddp
