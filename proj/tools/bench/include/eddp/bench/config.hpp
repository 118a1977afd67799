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

// Experiment configuration: scenario description, per-algorithm solver
// settings and the structured text file they are read from.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eddp/entropy_ddp.hpp"
#include "eddp/models.hpp"

namespace eddp::bench {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

enum class SystemKind { kCar2D, kQuadrotor };

enum class InitialControls { kZeros, kHover };

struct Scenario {
  std::string name = "scenario";
  SystemKind system = SystemKind::kCar2D;
  double dt = 0.02;
  int horizon = 150;
  Vector x0;
  Vector target;
  Vector running_state_weights;  // diagonal of Q_run
  Vector control_weights;        // diagonal of R
  Vector terminal_weights;       // diagonal of Q_f
  std::vector<models::Obstacle> obstacles;
  InitialControls initial_controls = InitialControls::kZeros;
  bool hover_control_reference = false;
  double init_perturbation = 0.0;
  models::QuadrotorParams quadrotor;

  int state_dim() const;
  int control_dim() const;
};

/// Owns the dynamics and cost objects for a scenario.
struct Problem {
  std::unique_ptr<DynamicsModel> dynamics;
  std::unique_ptr<CostModel> cost;
  Vector x0;
  std::vector<Vector> nominal_controls;
};

Problem build_problem(const Scenario& scenario);

struct ExperimentSpec {
  std::filesystem::path scenario_path;
  Scenario scenario;
  std::vector<Algorithm> algorithms;
  std::map<Algorithm, SolverConfig> solvers;
  int trials = 15;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir = "results";
  int jobs = 1;

  std::uint64_t trial_seed(int trial) const {
    return base_seed + static_cast<std::uint64_t>(trial);
  }
};

/// Command-line overrides applied on top of the file; unset fields keep the
/// file's values.
struct Overrides {
  std::optional<std::vector<Algorithm>> algorithms;
  std::optional<double> alpha;
  std::optional<double> q;
  std::optional<int> modes;
  std::optional<int> sample_every;
  std::optional<int> max_iter;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<int> jobs;
};

/// Parses the [scenario], [solver], [solver.<algo>] and [experiment]
/// sections. Throws ConfigError naming the offending field.
ExperimentSpec load_experiment(const std::filesystem::path& path);
ExperimentSpec parse_experiment(const std::string& text,
                                const std::filesystem::path& origin = {});

void apply_overrides(ExperimentSpec& spec, const Overrides& overrides);

/// Admissibility of every solver config for the scenario's control
/// dimension (for me_tsallis, 1 < q < 1 + 2/n_u). Throws ConfigError.
void validate(const ExperimentSpec& spec);

}  // namespace eddp::bench
