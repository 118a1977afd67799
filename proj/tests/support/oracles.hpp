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

#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "eddp/trajopt.hpp"

namespace eddp::testing {

// x' = A x + B u
class LinearDynamics final : public DynamicsModel {
public:
  LinearDynamics(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {}

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int control_dim() const override { return static_cast<int>(b_.cols()); }
  Vector step(const Vector& x, const Vector& u) const override {
    return a_ * x + b_ * u;
  }
  Jacobians jacobians(const Vector&, const Vector&) const override {
    return {a_, b_};
  }

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }

private:
  Matrix a_;
  Matrix b_;
};

// l = 1/2 x'Qx + 1/2 u'Ru, Phi = 1/2 x'Qf x
class QuadraticCost final : public CostModel {
public:
  QuadraticCost(Matrix q, Matrix r, Matrix qf)
      : q_(std::move(q)), r_(std::move(r)), qf_(std::move(qf)) {}

  double running(const Vector& x, const Vector& u, int) const override {
    return 0.5 * x.dot(q_ * x) + 0.5 * u.dot(r_ * u);
  }
  double terminal(const Vector& x) const override {
    return 0.5 * x.dot(qf_ * x);
  }
  RunningExpansion running_expansion(const Vector& x, const Vector& u,
                                     int) const override {
    return {q_ * x, r_ * u, q_, r_, Matrix::Zero(r_.rows(), q_.rows())};
  }
  TerminalExpansion terminal_expansion(const Vector& x) const override {
    return {qf_ * x, qf_};
  }

  const Matrix& q() const { return q_; }
  const Matrix& r() const { return r_; }
  const Matrix& qf() const { return qf_; }

private:
  Matrix q_;
  Matrix r_;
  Matrix qf_;
};

struct LqrInstance {
  LinearDynamics dyn;
  QuadraticCost cost;
  Vector x0;
  int horizon;
};

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng,
                            double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

// Eigenvalues in [lo, hi].
inline Matrix random_spd(int n, std::mt19937_64& rng, double lo = 0.5,
                         double hi = 2.0) {
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  const Matrix basis = qr.householderQ();
  std::uniform_real_distribution<double> eig(lo, hi);
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    d(i) = eig(rng);
  }
  const Matrix s = basis * d.asDiagonal() * basis.transpose();
  return 0.5 * (s + s.transpose());
}

inline LqrInstance random_lqr(std::mt19937_64& rng, int nx, int nu,
                              int horizon) {
  Matrix a = Matrix::Identity(nx, nx) + random_matrix(nx, nx, rng, 0.2);
  Matrix b = random_matrix(nx, nu, rng, 0.5);
  Matrix q = random_spd(nx, rng, 0.1, 1.0);
  Matrix r = random_spd(nu, rng, 0.1, 1.0);
  Matrix qf = random_spd(nx, rng, 1.0, 5.0);
  Vector x0 = random_matrix(nx, 1, rng, 1.0);
  return {LinearDynamics(std::move(a), std::move(b)),
          QuadraticCost(std::move(q), std::move(r), std::move(qf)),
          std::move(x0), horizon};
}

struct RiccatiSolution {
  std::vector<Matrix> P;  // cost-to-go Hessians, t = 0..T
  std::vector<Matrix> K;  // u_t = -K_t x_t
  double cost = 0.0;
};

inline RiccatiSolution riccati(const LqrInstance& lqr) {
  const Matrix& a = lqr.dyn.a();
  const Matrix& b = lqr.dyn.b();
  RiccatiSolution sol;
  sol.P.assign(lqr.horizon + 1, Matrix());
  sol.K.assign(lqr.horizon, Matrix());
  sol.P[lqr.horizon] = lqr.cost.qf();
  for (int t = lqr.horizon - 1; t >= 0; --t) {
    const Matrix& p = sol.P[t + 1];
    const Matrix s = lqr.cost.r() + b.transpose() * p * b;
    sol.K[t] = s.ldlt().solve(b.transpose() * p * a);
    const Matrix next = lqr.cost.q() + a.transpose() * p * (a - b * sol.K[t]);
    sol.P[t] = 0.5 * (next + next.transpose());
  }
  sol.cost = 0.5 * lqr.x0.dot(sol.P[0] * lqr.x0);
  return sol;
}

// Central differences of a vector-valued map, one column per input.
inline Matrix numeric_jacobian(const std::function<Vector(const Vector&)>& f,
                               const Vector& x, double h = 1e-6) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector lo = x;
    Vector hi = x;
    lo(i) -= h;
    hi(i) += h;
    jac.col(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return jac;
}

inline Vector numeric_gradient(const std::function<double(const Vector&)>& f,
                               const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector lo = x;
    Vector hi = x;
    lo(i) -= h;
    hi(i) += h;
    g(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Matrix& actual, const Matrix& expected) {
  return (actual - expected).norm() / std::max(1.0, expected.norm());
}

}  // namespace eddp::testing
