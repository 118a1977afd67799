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

// Seeded multi-trial experiment runner and its on-disk artifacts.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eddp/bench/config.hpp"

namespace eddp::bench {

struct RunRecord {
  Algorithm algorithm = Algorithm::kDdp;
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::vector<double> best_history;
  std::vector<std::vector<double>> cost_history;
  double final_cost = 0.0;
  double wall_seconds = 0.0;
  Trajectory trajectory;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::kDdp;
  int runs = 0;
  int failures = 0;
  double mean_final_cost = 0.0;
  double min_final_cost = 0.0;
  double max_final_cost = 0.0;
  std::vector<double> mean_best_history;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // algorithm-major, then trial
  std::vector<AlgorithmSummary> summaries;

  bool all_failed() const;
};

/// Initial control sequences for a trial; shared by every algorithm.
std::vector<std::vector<Vector>> trial_initial_controls(
    const ExperimentSpec& spec, const Problem& problem, int trial);

/// Runs trials x algorithms. A failing trial is recorded, not rethrown.
ExperimentResult run_experiment(const ExperimentSpec& spec);

AlgorithmSummary summarize(Algorithm algo,
                           const std::vector<const RunRecord*>& records);

/// Writes trajectory and cost tables per trial, per-algorithm mean-cost
/// curves and summary.json into spec.output_dir.
void emit_artifacts(const ExperimentSpec& spec, const ExperimentResult& result);

// Table writers, exposed for tests.
void write_trajectory_table(std::ostream& out, const Scenario& scenario,
                            const Trajectory& traj);
void write_cost_table(std::ostream& out, const RunRecord& record);
void write_mean_cost_table(std::ostream& out, const AlgorithmSummary& summary);

// %.17g
std::string format_double(double value);

void print_summary(std::ostream& out, const ExperimentResult& result);

}  // namespace eddp::bench
