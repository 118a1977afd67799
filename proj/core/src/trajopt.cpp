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

#include "eddp/trajopt.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "eddp/errors.hpp"

namespace eddp {

double trajectory_cost(const CostModel& cost, std::span<const Vector> states,
                       std::span<const Vector> controls) {
  double total = 0.0;
  for (std::size_t t = 0; t < controls.size(); ++t) {
    total += cost.running(states[t], controls[t], static_cast<int>(t));
  }
  return total + cost.terminal(states[controls.size()]);
}

Trajectory rollout(const DynamicsModel& dyn, const CostModel& cost,
                   const Vector& x0, std::span<const Vector> controls) {
  if (x0.size() != dyn.state_dim()) {
    throw DomainError("initial state has wrong dimension");
  }
  Trajectory traj;
  traj.states.reserve(controls.size() + 1);
  traj.controls.assign(controls.begin(), controls.end());
  traj.states.push_back(x0);
  double total = 0.0;
  for (std::size_t t = 0; t < controls.size(); ++t) {
    if (controls[t].size() != dyn.control_dim()) {
      throw DomainError("control has wrong dimension at timestep " +
                        std::to_string(t));
    }
    total += cost.running(traj.states[t], controls[t], static_cast<int>(t));
    Vector next = dyn.step(traj.states[t], controls[t]);
    if (!next.allFinite()) {
      throw RolloutDivergence(static_cast<int>(t) + 1);
    }
    traj.states.push_back(std::move(next));
  }
  total += cost.terminal(traj.states.back());
  if (!std::isfinite(total)) {
    throw RolloutDivergence(static_cast<int>(controls.size()));
  }
  traj.cost = total;
  return traj;
}

BackwardResult backward_pass(const Trajectory& traj, const DynamicsModel& dyn,
                             const CostModel& cost, double reg) {
  const int horizon = traj.horizon();
  const int nu = dyn.control_dim();

  BackwardResult out;
  out.regularization = reg;
  out.k.resize(horizon);
  out.K.resize(horizon);
  out.Qu.resize(horizon);
  out.Qux.resize(horizon);
  out.Quu.resize(horizon);
  out.Quu_inv.resize(horizon);
  out.value_estimate.assign(horizon + 1, 0.0);

  out.value_estimate[horizon] = cost.terminal(traj.states[horizon]);
  for (int t = horizon - 1; t >= 0; --t) {
    out.value_estimate[t] =
        out.value_estimate[t + 1] +
        cost.running(traj.states[t], traj.controls[t], t);
  }

  const TerminalExpansion term = cost.terminal_expansion(traj.states[horizon]);
  Vector Vx = term.phi_x;
  Matrix Vxx = 0.5 * (term.phi_xx + term.phi_xx.transpose());
  const Matrix eye = Matrix::Identity(nu, nu);

  for (int t = horizon - 1; t >= 0; --t) {
    const Vector& x = traj.states[t];
    const Vector& u = traj.controls[t];
    const Jacobians jac = dyn.jacobians(x, u);
    const RunningExpansion l = cost.running_expansion(x, u, t);

    const Vector Qx = l.lx + jac.fx.transpose() * Vx;
    const Vector Qu = l.lu + jac.fu.transpose() * Vx;
    const Matrix VxxFx = Vxx * jac.fx;
    const Matrix Qxx = l.lxx + jac.fx.transpose() * VxxFx;
    const Matrix Qux = l.lux + jac.fu.transpose() * VxxFx;
    Matrix Quu = l.luu + jac.fu.transpose() * Vxx * jac.fu + reg * eye;
    Quu = 0.5 * (Quu + Quu.transpose()).eval();

    Eigen::LLT<Matrix> llt(Quu);
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(Quu, Eigen::EigenvaluesOnly);
      throw RegularizationNeeded(t, eig.eigenvalues().minCoeff());
    }
    Matrix Quu_inv = llt.solve(eye);
    Quu_inv = 0.5 * (Quu_inv + Quu_inv.transpose()).eval();

    Vector k = -llt.solve(Qu);
    Matrix K = -llt.solve(Qux);

    Vx = Qx + K.transpose() * Quu * k + K.transpose() * Qu +
         Qux.transpose() * k;
    Vxx = Qxx + K.transpose() * Quu * K + K.transpose() * Qux +
          Qux.transpose() * K;
    Vxx = 0.5 * (Vxx + Vxx.transpose()).eval();

    out.expected_linear += k.dot(Qu);
    out.expected_quadratic += 0.5 * k.dot(Quu * k);

    out.k[t] = std::move(k);
    out.K[t] = std::move(K);
    out.Qu[t] = Qu;
    out.Qux[t] = Qux;
    out.Quu[t] = std::move(Quu);
    out.Quu_inv[t] = std::move(Quu_inv);
  }
  out.Vx0 = std::move(Vx);
  out.Vxx0 = std::move(Vxx);
  return out;
}

std::vector<double> default_step_schedule() {
  std::vector<double> steps;
  double eps = 1.0;
  for (int i = 0; i <= 10; ++i) {
    steps.push_back(eps);
    eps *= 0.5;
  }
  return steps;
}

LineSearchResult forward_line_search(const Trajectory& traj,
                                     const BackwardResult& gains,
                                     const DynamicsModel& dyn,
                                     const CostModel& cost,
                                     std::span<const double> schedule) {
  const int horizon = traj.horizon();
  std::vector<Vector> controls(horizon);
  for (const double eps : schedule) {
    try {
      Vector x = traj.states[0];
      double total = 0.0;
      std::vector<Vector> states;
      states.reserve(horizon + 1);
      states.push_back(x);
      for (int t = 0; t < horizon; ++t) {
        controls[t] = traj.controls[t] + eps * gains.k[t] +
                      gains.K[t] * (x - traj.states[t]);
        total += cost.running(x, controls[t], t);
        x = dyn.step(x, controls[t]);
        if (!x.allFinite()) {
          throw RolloutDivergence(t + 1);
        }
        states.push_back(x);
      }
      total += cost.terminal(x);
      if (std::isfinite(total) && total < traj.cost) {
        return LineSearchResult{Trajectory{std::move(states), controls, total},
                                true, eps};
      }
    } catch (const RolloutDivergence&) {
      continue;
    }
  }
  return LineSearchResult{traj, false, 0.0};
}

SweepResult ddp_sweep(const Trajectory& traj, const DynamicsModel& dyn,
                      const CostModel& cost, Regularization& reg,
                      std::span<const double> schedule) {
  while (true) {
    try {
      const BackwardResult bwd = backward_pass(traj, dyn, cost, reg.value);
      SweepResult result{forward_line_search(traj, bwd, dyn, cost, schedule),
                         false};
      if (result.search.improved) {
        reg.decrease();
      } else {
        reg.increase();
        if (reg.exhausted()) {
          reg.value = reg.ceiling;
        }
      }
      return result;
    } catch (const RegularizationNeeded&) {
      reg.increase();
      if (reg.exhausted()) {
        reg.value = reg.ceiling;
        return SweepResult{LineSearchResult{traj, false, 0.0}, true};
      }
    }
  }
}

}  // namespace eddp
