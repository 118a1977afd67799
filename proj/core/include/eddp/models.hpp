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

// Benchmark systems (2D kinematic car, quadrotor) and the quadratic plus
// Gaussian-obstacle cost used on them.

#pragma once

#include <vector>

#include "eddp/trajopt.hpp"

namespace eddp::models {

/// Unicycle car, state (p_x, p_y, theta), control (v, omega), explicit Euler.
class Car2D final : public DynamicsModel {
public:
  explicit Car2D(double dt);

  int state_dim() const override { return 3; }
  int control_dim() const override { return 2; }
  Vector step(const Vector& x, const Vector& u) const override;
  Jacobians jacobians(const Vector& x, const Vector& u) const override;

  double dt() const noexcept { return dt_; }

private:
  double dt_;
};

struct QuadrotorParams {
  double mass = 0.468;           // kg
  double gravity = 9.81;         // m/s^2
  double arm_length = 0.225;     // m
  double inertia_xx = 4.856e-3;  // kg m^2
  double inertia_yy = 4.856e-3;
  double inertia_zz = 8.801e-3;
  double torque_coefficient = 0.0383;  // yaw torque per unit rotor force, m

  double hover_force() const { return mass * gravity / 4.0; }
};

/// Rigid-body quadrotor with rotor forces as inputs. State is position,
/// velocity (world frame), roll-pitch-yaw Euler angles and body angular
/// rates. Rotors 1 and 3 lie on the body x axis, 2 and 4 on the y axis.
///
/// The Euler-rate map is singular at pitch = +-pi/2.
class Quadrotor final : public DynamicsModel {
public:
  Quadrotor(double dt, QuadrotorParams params = {});

  int state_dim() const override { return 12; }
  int control_dim() const override { return 4; }
  Vector step(const Vector& x, const Vector& u) const override;
  Jacobians jacobians(const Vector& x, const Vector& u) const override;

  double dt() const noexcept { return dt_; }
  const QuadrotorParams& params() const noexcept { return params_; }

private:
  double dt_;
  QuadrotorParams params_;
};

struct Obstacle {
  Vector center;
  double radius;
  double weight = 1.0;
};

class ObstacleField {
public:
  ObstacleField() = default;
  explicit ObstacleField(std::vector<Obstacle> obstacles);

  const std::vector<Obstacle>& obstacles() const noexcept { return obstacles_; }
  bool empty() const noexcept { return obstacles_.empty(); }

private:
  std::vector<Obstacle> obstacles_;
};

// Selects the position components of a state vector.
struct PositionExtractor {
  std::vector<int> indices;
};

struct ObstacleCost {
  double value = 0.0;
  Vector gradient;  // n_x
  Matrix hessian;   // n_x x n_x
};

/// sum_o w_o exp(-|p(x) - c_o|^2 / (2 r_o^2)) with analytic derivatives.
ObstacleCost obstacle_cost(const ObstacleField& field, const Vector& x,
                           const PositionExtractor& position);

struct QuadraticWeights {
  Matrix running_state;  // Q_run, PSD
  Matrix control;        // R, PD
  Matrix terminal;       // Q_f, PSD
};

/// l = 1/2 (x - x*)^T Q_run (x - x*) + 1/2 (u - u_ref)^T R (u - u_ref) + obs,
/// Phi = 1/2 (x - x*)^T Q_f (x - x*) + obs.
class CompositeCost final : public CostModel {
public:
  CompositeCost(QuadraticWeights weights, Vector target, ObstacleField field,
                PositionExtractor position, Vector control_reference = {});

  double running(const Vector& x, const Vector& u, int t) const override;
  double terminal(const Vector& x) const override;
  RunningExpansion running_expansion(const Vector& x, const Vector& u,
                                     int t) const override;
  TerminalExpansion terminal_expansion(const Vector& x) const override;

  const Vector& target() const noexcept { return target_; }
  const ObstacleField& field() const noexcept { return field_; }

private:
  QuadraticWeights weights_;
  Vector target_;
  ObstacleField field_;
  PositionExtractor position_;
  Vector control_reference_;
};

}  // namespace eddp::models
