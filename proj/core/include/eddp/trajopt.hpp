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

// Deterministic DDP machinery: model interfaces, rollout, Gauss-Newton
// backward pass and backtracking forward pass.

#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace eddp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Jacobians {
  Matrix fx;  // n_x x n_x
  Matrix fu;  // n_x x n_u
};

/// Discrete-time dynamics x_{t+1} = f(x_t, u_t).
class DynamicsModel {
public:
  virtual ~DynamicsModel() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual Vector step(const Vector& x, const Vector& u) const = 0;
  virtual Jacobians jacobians(const Vector& x, const Vector& u) const = 0;
};

struct RunningExpansion {
  Vector lx;
  Vector lu;
  Matrix lxx;
  Matrix luu;
  Matrix lux;  // n_u x n_x
};

struct TerminalExpansion {
  Vector phi_x;
  Matrix phi_xx;
};

/// Running cost l(x, u, t) and terminal cost Phi(x), both nonnegative.
class CostModel {
public:
  virtual ~CostModel() = default;

  virtual double running(const Vector& x, const Vector& u, int t) const = 0;
  virtual double terminal(const Vector& x) const = 0;
  virtual RunningExpansion running_expansion(const Vector& x, const Vector& u,
                                             int t) const = 0;
  virtual TerminalExpansion terminal_expansion(const Vector& x) const = 0;
};

struct Trajectory {
  std::vector<Vector> states;    // T + 1
  std::vector<Vector> controls;  // T
  double cost = 0.0;

  int horizon() const { return static_cast<int>(controls.size()); }
};

/// Simulates U from x0 and evaluates the total cost. Throws
/// RolloutDivergence on a non-finite state or cost.
Trajectory rollout(const DynamicsModel& dyn, const CostModel& cost,
                   const Vector& x0, std::span<const Vector> controls);

// Sum of running costs plus terminal cost along (X, U).
double trajectory_cost(const CostModel& cost, std::span<const Vector> states,
                       std::span<const Vector> controls);

struct BackwardResult {
  std::vector<Vector> k;        // feedforward, per t
  std::vector<Matrix> K;        // feedback, per t
  std::vector<Vector> Qu;       // per t
  std::vector<Matrix> Qux;      // per t
  std::vector<Matrix> Quu;      // regularized, per t
  std::vector<Matrix> Quu_inv;  // per t
  // Nominal cost-to-go from t, t = 0..T (last entry is the terminal cost).
  std::vector<double> value_estimate;
  Vector Vx0;
  Matrix Vxx0;
  // Predicted cost change for step size eps is
  // eps * expected_linear + eps^2 * expected_quadratic.
  double expected_linear = 0.0;
  double expected_quadratic = 0.0;
  double regularization = 0.0;

  int horizon() const { return static_cast<int>(k.size()); }
};

/// Gauss-Newton (iLQR) backward recursion; dynamics Hessians are omitted.
/// Throws RegularizationNeeded if some Q_uu + reg I is not positive definite.
BackwardResult backward_pass(const Trajectory& traj, const DynamicsModel& dyn,
                             const CostModel& cost, double reg);

/// 1, 1/2, ..., 2^-10.
std::vector<double> default_step_schedule();

struct LineSearchResult {
  Trajectory trajectory;
  bool improved = false;
  double step = 0.0;
};

/// Closed-loop rollout u_t = ubar_t + eps k_t + K_t (x_t - xbar_t). Accepts
/// the first step size giving a strictly lower cost; otherwise returns the
/// input trajectory with improved = false.
LineSearchResult forward_line_search(const Trajectory& traj,
                                     const BackwardResult& gains,
                                     const DynamicsModel& dyn,
                                     const CostModel& cost,
                                     std::span<const double> schedule);

// Levenberg-Marquardt schedule applied to Q_uu.
struct Regularization {
  double value = 1e-6;
  double floor = 1e-9;
  double ceiling = 1e10;
  double increase_factor = 10.0;
  double decrease_factor = 2.0;

  void increase() { value = std::max(value * increase_factor, floor); }
  void decrease() { value = std::max(value / decrease_factor, floor); }
  bool exhausted() const { return value > ceiling; }
};

struct SweepResult {
  LineSearchResult search;
  bool backward_failed = false;
};

/// One backward pass (retrying with larger regularization on failure)
/// followed by a line search. The regularization state is updated in place.
SweepResult ddp_sweep(const Trajectory& traj, const DynamicsModel& dyn,
                      const CostModel& cost, Regularization& reg,
                      std::span<const double> schedule);

}  // namespace eddp
