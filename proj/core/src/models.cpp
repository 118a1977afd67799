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

#include "eddp/models.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "eddp/errors.hpp"

namespace eddp::models {

Car2D::Car2D(double dt) : dt_(dt) {
  if (!(dt > 0.0)) {
    throw DomainError("car dt must be positive");
  }
}

Vector Car2D::step(const Vector& x, const Vector& u) const {
  Vector next(3);
  next << x(0) + dt_ * u(0) * std::cos(x(2)),
          x(1) + dt_ * u(0) * std::sin(x(2)),
          x(2) + dt_ * u(1);
  return next;
}

Jacobians Car2D::jacobians(const Vector& x, const Vector& u) const {
  const double c = std::cos(x(2));
  const double s = std::sin(x(2));
  Jacobians jac{Matrix::Identity(3, 3), Matrix::Zero(3, 2)};
  jac.fx(0, 2) = -dt_ * u(0) * s;
  jac.fx(1, 2) = dt_ * u(0) * c;
  jac.fu(0, 0) = dt_ * c;
  jac.fu(1, 0) = dt_ * s;
  jac.fu(2, 1) = dt_;
  return jac;
}

namespace {

using std::cos;
using std::sin;
using std::tan;

// Continuous-time quadrotor vector field, templated for forward-mode AD.
template <typename S>
Eigen::Matrix<S, 12, 1> quadrotor_rates(const Eigen::Matrix<S, 12, 1>& x,
                                        const Eigen::Matrix<S, 4, 1>& f,
                                        const QuadrotorParams& p) {
  const S phi = x(6), theta = x(7), psi = x(8);
  const S wx = x(9), wy = x(10), wz = x(11);
  const S cphi = cos(phi), sphi = sin(phi);
  const S cth = cos(theta), sth = sin(theta);
  const S cpsi = cos(psi), spsi = sin(psi);

  const S thrust_acc = (f(0) + f(1) + f(2) + f(3)) / p.mass;
  const S tau_x = p.arm_length * (f(3) - f(1));
  const S tau_y = p.arm_length * (f(2) - f(0));
  const S tau_z = p.torque_coefficient * (f(0) - f(1) + f(2) - f(3));

  Eigen::Matrix<S, 12, 1> dx;
  dx(0) = x(3);
  dx(1) = x(4);
  dx(2) = x(5);
  dx(3) = thrust_acc * (cpsi * sth * cphi + spsi * sphi);
  dx(4) = thrust_acc * (spsi * sth * cphi - cpsi * sphi);
  dx(5) = thrust_acc * cth * cphi - p.gravity;
  // Body rates to Euler-angle rates.
  dx(6) = wx + sphi * tan(theta) * wy + cphi * tan(theta) * wz;
  dx(7) = cphi * wy - sphi * wz;
  dx(8) = (sphi * wy + cphi * wz) / cth;
  // Euler's rotation equations with diagonal inertia.
  dx(9) = (tau_x - (p.inertia_zz - p.inertia_yy) * wy * wz) / p.inertia_xx;
  dx(10) = (tau_y - (p.inertia_xx - p.inertia_zz) * wx * wz) / p.inertia_yy;
  dx(11) = (tau_z - (p.inertia_yy - p.inertia_xx) * wx * wy) / p.inertia_zz;
  return dx;
}

}  // namespace

Quadrotor::Quadrotor(double dt, QuadrotorParams params)
    : dt_(dt), params_(params) {
  if (!(dt > 0.0)) {
    throw DomainError("quadrotor dt must be positive");
  }
  if (!(params.mass > 0.0) || !(params.inertia_xx > 0.0) ||
      !(params.inertia_yy > 0.0) || !(params.inertia_zz > 0.0)) {
    throw DomainError("quadrotor mass and inertia must be positive");
  }
}

Vector Quadrotor::step(const Vector& x, const Vector& u) const {
  const Eigen::Matrix<double, 12, 1> xs = x;
  const Eigen::Matrix<double, 4, 1> us = u;
  return xs + dt_ * quadrotor_rates<double>(xs, us, params_);
}

Jacobians Quadrotor::jacobians(const Vector& x, const Vector& u) const {
  using Deriv = Eigen::Matrix<double, 16, 1>;
  using AD = Eigen::AutoDiffScalar<Deriv>;
  Eigen::Matrix<AD, 12, 1> xa;
  Eigen::Matrix<AD, 4, 1> ua;
  for (int i = 0; i < 12; ++i) {
    xa(i) = AD(x(i), 16, i);
  }
  for (int i = 0; i < 4; ++i) {
    ua(i) = AD(u(i), 16, 12 + i);
  }
  const Eigen::Matrix<AD, 12, 1> rates = quadrotor_rates<AD>(xa, ua, params_);
  Jacobians jac{Matrix::Identity(12, 12), Matrix::Zero(12, 4)};
  for (int i = 0; i < 12; ++i) {
    const Deriv& d = rates(i).derivatives();
    jac.fx.row(i) += dt_ * d.head<12>().transpose();
    jac.fu.row(i) = dt_ * d.tail<4>().transpose();
  }
  return jac;
}

ObstacleField::ObstacleField(std::vector<Obstacle> obstacles)
    : obstacles_(std::move(obstacles)) {
  for (const Obstacle& o : obstacles_) {
    if (!(o.radius > 0.0)) {
      throw DomainError("obstacle radius must be positive");
    }
    if (!(o.weight > 0.0)) {
      throw DomainError("obstacle weight must be positive");
    }
  }
}

ObstacleCost obstacle_cost(const ObstacleField& field, const Vector& x,
                           const PositionExtractor& position) {
  const int nx = static_cast<int>(x.size());
  ObstacleCost out{0.0, Vector::Zero(nx), Matrix::Zero(nx, nx)};
  const int dim = static_cast<int>(position.indices.size());
  Vector p(dim);
  for (int i = 0; i < dim; ++i) {
    p(i) = x(position.indices[i]);
  }
  Vector grad_p = Vector::Zero(dim);
  Matrix hess_p = Matrix::Zero(dim, dim);
  for (const Obstacle& o : field.obstacles()) {
    if (o.center.size() != dim) {
      throw DomainError("obstacle center dimension does not match position");
    }
    const Vector d = p - o.center;
    const double inv_r2 = 1.0 / (o.radius * o.radius);
    const double e = o.weight * std::exp(-0.5 * d.squaredNorm() * inv_r2);
    out.value += e;
    grad_p -= e * inv_r2 * d;
    hess_p += e * (inv_r2 * inv_r2 * d * d.transpose() -
                   inv_r2 * Matrix::Identity(dim, dim));
  }
  // The extractor is a constant selection, so the chain rule is a scatter.
  for (int i = 0; i < dim; ++i) {
    out.gradient(position.indices[i]) = grad_p(i);
    for (int j = 0; j < dim; ++j) {
      out.hessian(position.indices[i], position.indices[j]) = hess_p(i, j);
    }
  }
  return out;
}

CompositeCost::CompositeCost(QuadraticWeights weights, Vector target,
                             ObstacleField field, PositionExtractor position,
                             Vector control_reference)
    : weights_(std::move(weights)), target_(std::move(target)),
      field_(std::move(field)), position_(std::move(position)),
      control_reference_(std::move(control_reference)) {
  const auto nx = target_.size();
  const auto nu = weights_.control.rows();
  if (weights_.running_state.rows() != nx ||
      weights_.running_state.cols() != nx || weights_.terminal.rows() != nx ||
      weights_.terminal.cols() != nx || weights_.control.cols() != nu) {
    throw DomainError("cost weight shapes do not match the target state");
  }
  if (control_reference_.size() == 0) {
    control_reference_ = Vector::Zero(nu);
  }
  if (control_reference_.size() != nu) {
    throw DomainError("control reference has wrong dimension");
  }
  for (int idx : position_.indices) {
    if (idx < 0 || idx >= nx) {
      throw DomainError("position index " + std::to_string(idx) +
                        " out of range");
    }
  }
}

double CompositeCost::running(const Vector& x, const Vector& u, int) const {
  const Vector dx = x - target_;
  const Vector du = u - control_reference_;
  double value = 0.5 * dx.dot(weights_.running_state * dx) +
                 0.5 * du.dot(weights_.control * du);
  if (!field_.empty()) {
    value += obstacle_cost(field_, x, position_).value;
  }
  return value;
}

double CompositeCost::terminal(const Vector& x) const {
  const Vector dx = x - target_;
  double value = 0.5 * dx.dot(weights_.terminal * dx);
  if (!field_.empty()) {
    value += obstacle_cost(field_, x, position_).value;
  }
  return value;
}

RunningExpansion CompositeCost::running_expansion(const Vector& x,
                                                  const Vector& u,
                                                  int) const {
  const Vector dx = x - target_;
  RunningExpansion e;
  e.lx = weights_.running_state * dx;
  e.lu = weights_.control * (u - control_reference_);
  e.lxx = weights_.running_state;
  e.luu = weights_.control;
  e.lux = Matrix::Zero(u.size(), x.size());
  if (!field_.empty()) {
    const ObstacleCost obs = obstacle_cost(field_, x, position_);
    e.lx += obs.gradient;
    e.lxx += obs.hessian;
  }
  return e;
}

TerminalExpansion CompositeCost::terminal_expansion(const Vector& x) const {
  TerminalExpansion e{weights_.terminal * (x - target_), weights_.terminal};
  if (!field_.empty()) {
    const ObstacleCost obs = obstacle_cost(field_, x, position_);
    e.phi_x += obs.gradient;
    e.phi_xx += obs.hessian;
  }
  return e;
}

}  // namespace eddp::models
