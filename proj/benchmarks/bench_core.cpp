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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "eddp/entropy_ddp.hpp"
#include "eddp/models.hpp"
#include "eddp/qgauss.hpp"
#include "eddp/trajopt.hpp"

namespace {

using eddp::EntropicIndex;
using eddp::Matrix;
using eddp::Vector;

// Keeps Q_uu positive definite on the straight-line nominals below.
constexpr double kReg = 10.0;

eddp::models::CompositeCost car_cost() {
  Vector target(3);
  target << 4.0, 0.0, 0.0;
  Vector c(2);
  c << 2.0, 3.0;
  return eddp::models::CompositeCost(
      eddp::models::QuadraticWeights{Matrix::Zero(3, 3), Matrix::Identity(2, 2),
                                     1e4 * Matrix::Identity(3, 3)},
      target, eddp::models::ObstacleField({eddp::models::Obstacle{c, 0.35, 1000.0}}),
      eddp::models::PositionExtractor{{0, 1}});
}

eddp::models::CompositeCost quad_cost() {
  Vector target = Vector::Zero(12);
  target(0) = 3.0;
  target(2) = 1.0;
  Vector c(3);
  c << 1.5, 2.0, 0.5;
  const double f = eddp::models::QuadrotorParams{}.hover_force();
  return eddp::models::CompositeCost(
      eddp::models::QuadraticWeights{0.01 * Matrix::Identity(12, 12), Matrix::Identity(4, 4),
                                     1e3 * Matrix::Identity(12, 12)},
      target, eddp::models::ObstacleField({eddp::models::Obstacle{c, 0.4, 200.0}}),
      eddp::models::PositionExtractor{{0, 1, 2}}, Vector::Constant(4, f));
}

void BM_BackwardPassCar(benchmark::State& state) {
  const eddp::models::Car2D car(0.02);
  const auto cost = car_cost();
  Vector u(2);
  u << 4.0 / (0.02 * static_cast<double>(state.range(0))), 0.0;
  const auto traj = eddp::rollout(car, cost, Vector::Zero(3),
                                  std::vector<Vector>(state.range(0), u));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eddp::backward_pass(traj, car, cost, kReg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BackwardPassCar)->Arg(150)->Arg(600);

void BM_BackwardPassQuadrotor(benchmark::State& state) {
  const eddp::models::Quadrotor quad(0.02);
  const auto cost = quad_cost();
  const Vector hover = Vector::Constant(4, quad.params().hover_force());
  const auto traj =
      eddp::rollout(quad, cost, Vector::Zero(12), std::vector<Vector>(200, hover));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eddp::backward_pass(traj, quad, cost, kReg));
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BackwardPassQuadrotor);

void BM_NormalizationConstant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EntropicIndex q(1.0 + 0.9 * 2.0 / n);
  double v = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eddp::solve_normalization_constant(v, 1.0, q, n, 0.5));
    v = v > 1e3 ? 0.0 : v + 1.7;
  }
}
BENCHMARK(BM_NormalizationConstant)->Arg(2)->Arg(4);

void BM_SampleEscort(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const eddp::qgauss::QGaussianND d(EntropicIndex(1.0 + 1.8 / n), Vector::Zero(n),
                                    Matrix::Identity(n, n));
  const auto e = eddp::qgauss::escort_transform(d);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eddp::qgauss::sample(e, rng, 1000));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleEscort)->Arg(2)->Arg(4);

void BM_TsallisPolicySample(benchmark::State& state) {
  const eddp::models::Car2D car(0.02);
  const auto cost = car_cost();
  Vector u(2);
  u << 1.0, 0.0;
  const auto traj =
      eddp::rollout(car, cost, Vector::Zero(3), std::vector<Vector>(150, u));
  const auto bwd = eddp::backward_pass(traj, car, cost, kReg);
  const auto policy = eddp::build_qgaussian_policy(bwd, 1.0, EntropicIndex(1.8));
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eddp::sample_control_sequence(policy, traj, car, cost, rng));
  }
}
BENCHMARK(BM_TsallisPolicySample);

}  // namespace

BENCHMARK_MAIN();
