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

#include "eddp/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

namespace eddp::bench {

namespace {

std::vector<std::string> state_labels(const Scenario& sc) {
  if (sc.system == SystemKind::kCar2D) {
    return {"p_x", "p_y", "theta"};
  }
  return {"x",    "y",     "z",   "v_x", "v_y", "v_z",
          "roll", "pitch", "yaw", "w_x", "w_y", "w_z"};
}

std::vector<std::string> control_labels(const Scenario& sc) {
  if (sc.system == SystemKind::kCar2D) {
    return {"v", "omega"};
  }
  return {"f_1", "f_2", "f_3", "f_4"};
}

std::string file_stem(Algorithm algo, int trial) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_trial%02d",
                std::string(to_string(algo)).c_str(), trial);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return out;
}

nlohmann::json vector_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

nlohmann::json scenario_json(const Scenario& sc) {
  nlohmann::json j;
  j["name"] = sc.name;
  j["system"] = sc.system == SystemKind::kCar2D ? "car2d" : "quadrotor";
  j["dt"] = sc.dt;
  j["horizon"] = sc.horizon;
  j["x0"] = vector_json(sc.x0);
  j["target"] = vector_json(sc.target);
  j["running_state_weights"] = vector_json(sc.running_state_weights);
  j["control_weights"] = vector_json(sc.control_weights);
  j["terminal_weights"] = vector_json(sc.terminal_weights);
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : sc.obstacles) {
    j["obstacles"].push_back({{"center", vector_json(o.center)},
                              {"radius", o.radius},
                              {"weight", o.weight}});
  }
  j["initial_controls"] =
      sc.initial_controls == InitialControls::kHover ? "hover" : "zeros";
  j["control_reference"] = sc.hover_control_reference ? "hover" : "zero";
  j["init_perturbation"] = sc.init_perturbation;
  if (sc.system == SystemKind::kQuadrotor) {
    const auto& p = sc.quadrotor;
    j["mass"] = p.mass;
    j["gravity"] = p.gravity;
    j["arm_length"] = p.arm_length;
    j["inertia"] = {p.inertia_xx, p.inertia_yy, p.inertia_zz};
    j["torque_coefficient"] = p.torque_coefficient;
  }
  return j;
}

nlohmann::json solver_json(const SolverConfig& cfg) {
  nlohmann::json j;
  j["algorithm"] = std::string(to_string(cfg.algorithm));
  j["alpha"] = cfg.alpha;
  j["q"] = cfg.q.value();
  j["modes"] = cfg.modes;
  j["sample_every"] = cfg.sample_every;
  j["iters"] = cfg.max_iter;
  j["covariance_cap"] =
      cfg.covariance_cap ? nlohmann::json(*cfg.covariance_cap) : nlohmann::json();
  return j;
}

RunRecord run_trial(const ExperimentSpec& spec, Algorithm algo, int trial) {
  RunRecord record;
  record.algorithm = algo;
  record.trial = trial;
  record.seed = spec.trial_seed(trial);
  const auto start = std::chrono::steady_clock::now();
  try {
    const Problem problem = build_problem(spec.scenario);
    const auto init = trial_initial_controls(spec, problem, trial);
    SolverConfig cfg = spec.solvers.at(algo);
    cfg.seed = record.seed;
    RunResult result = run(cfg, *problem.dynamics, *problem.cost, problem.x0,
                           init);
    record.best_history = std::move(result.best_history);
    record.cost_history = std::move(result.cost_history);
    record.final_cost = result.best.cost;
    record.trajectory = std::move(result.best);
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = e.what();
  }
  record.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return record;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

bool ExperimentResult::all_failed() const {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return r.failed; });
}

std::vector<std::vector<Vector>> trial_initial_controls(
    const ExperimentSpec& spec, const Problem& problem, int trial) {
  const Scenario& sc = spec.scenario;
  const int modes = std::max_element(spec.solvers.begin(), spec.solvers.end(),
                                     [](const auto& a, const auto& b) {
                                       return a.second.modes < b.second.modes;
                                     })
                        ->second.modes;
  if (sc.init_perturbation == 0.0) {
    return {problem.nominal_controls};
  }
  // Seeded by the trial only, so all algorithms start identically.
  std::mt19937_64 rng(spec.trial_seed(trial) ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, sc.init_perturbation);
  std::vector<std::vector<Vector>> init(modes, problem.nominal_controls);
  for (auto& seq : init) {
    for (Vector& u : seq) {
      for (int j = 0; j < u.size(); ++j) {
        u(j) += normal(rng);
      }
    }
  }
  return init;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const int trials = spec.trials;
  const int tasks = static_cast<int>(spec.algorithms.size()) * trials;
  ExperimentResult result;
  result.records.resize(tasks);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < tasks; task = next++) {
      const Algorithm algo = spec.algorithms[task / trials];
      result.records[task] = run_trial(spec, algo, task % trials);
    }
  };
  const int jobs = std::min(spec.jobs, tasks);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < jobs; ++i) {
      pool.emplace_back(worker);
    }
  }

  for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
    std::vector<const RunRecord*> group;
    for (int t = 0; t < trials; ++t) {
      group.push_back(&result.records[a * trials + t]);
    }
    result.summaries.push_back(summarize(spec.algorithms[a], group));
  }
  return result;
}

AlgorithmSummary summarize(Algorithm algo,
                           const std::vector<const RunRecord*>& records) {
  AlgorithmSummary s;
  s.algorithm = algo;
  s.runs = static_cast<int>(records.size());
  std::vector<double> finals;
  for (const RunRecord* r : records) {
    if (r->failed) {
      ++s.failures;
      continue;
    }
    finals.push_back(r->final_cost);
    if (s.mean_best_history.size() < r->best_history.size()) {
      s.mean_best_history.resize(r->best_history.size(), 0.0);
    }
    for (std::size_t i = 0; i < r->best_history.size(); ++i) {
      s.mean_best_history[i] += r->best_history[i];
    }
  }
  if (!finals.empty()) {
    double sum = 0.0;
    for (double f : finals) {
      sum += f;
    }
    s.mean_final_cost = sum / static_cast<double>(finals.size());
    s.min_final_cost = *std::min_element(finals.begin(), finals.end());
    s.max_final_cost = *std::max_element(finals.begin(), finals.end());
    for (double& m : s.mean_best_history) {
      m /= static_cast<double>(finals.size());
    }
  }
  return s;
}

void write_trajectory_table(std::ostream& out, const Scenario& scenario,
                            const Trajectory& traj) {
  out << "t";
  for (const auto& label : state_labels(scenario)) {
    out << ',' << label;
  }
  const auto controls = control_labels(scenario);
  for (const auto& label : controls) {
    out << ',' << label;
  }
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (int i = 0; i < traj.states[t].size(); ++i) {
      out << ',' << format_double(traj.states[t](i));
    }
    for (std::size_t i = 0; i < controls.size(); ++i) {
      out << ',';
      if (t < traj.controls.size()) {
        out << format_double(traj.controls[t](static_cast<int>(i)));
      }
    }
    out << '\n';
  }
}

void write_cost_table(std::ostream& out, const RunRecord& record) {
  const std::size_t modes =
      record.cost_history.empty() ? 0 : record.cost_history.front().size();
  out << "iteration";
  for (std::size_t n = 0; n < modes; ++n) {
    out << ",mode_" << n;
  }
  out << ",best\n";
  for (std::size_t i = 0; i < record.cost_history.size(); ++i) {
    out << i;
    for (double c : record.cost_history[i]) {
      out << ',' << format_double(c);
    }
    out << ',' << format_double(record.best_history[i]) << '\n';
  }
}

void write_mean_cost_table(std::ostream& out, const AlgorithmSummary& s) {
  out << "iteration,mean_best_cost\n";
  for (std::size_t i = 0; i < s.mean_best_history.size(); ++i) {
    out << i << ',' << format_double(s.mean_best_history[i]) << '\n';
  }
}

void emit_artifacts(const ExperimentSpec& spec,
                    const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path root = spec.output_dir;
  std::error_code ec;
  fs::create_directories(root / "trajectories", ec);
  fs::create_directories(root / "costs", ec);
  if (ec || !fs::is_directory(root)) {
    throw std::runtime_error("cannot create output directory '" +
                             root.string() + "'");
  }

  for (const RunRecord& r : result.records) {
    if (r.failed) {
      continue;
    }
    const std::string stem = file_stem(r.algorithm, r.trial);
    auto traj_out = open_output(root / "trajectories" / (stem + ".csv"));
    write_trajectory_table(traj_out, spec.scenario, r.trajectory);
    auto cost_out = open_output(root / "costs" / (stem + ".csv"));
    write_cost_table(cost_out, r);
  }
  for (const AlgorithmSummary& s : result.summaries) {
    auto out = open_output(root / (std::string(to_string(s.algorithm)) +
                                   "_mean_cost.csv"));
    write_mean_cost_table(out, s);
  }

  nlohmann::json summary;
  nlohmann::json config;
  config["scenario_file"] = spec.scenario_path.string();
  config["scenario"] = scenario_json(spec.scenario);
  config["trials"] = spec.trials;
  config["base_seed"] = spec.base_seed;
  config["algorithms"] = nlohmann::json::array();
  nlohmann::json solvers;
  for (const Algorithm algo : spec.algorithms) {
    config["algorithms"].push_back(std::string(to_string(algo)));
    solvers[std::string(to_string(algo))] = solver_json(spec.solvers.at(algo));
  }
  config["solvers"] = solvers;
  summary["config"] = config;
  std::vector<std::uint64_t> seeds;
  for (int t = 0; t < spec.trials; ++t) {
    seeds.push_back(spec.trial_seed(t));
  }
  summary["seeds"] = seeds;

  nlohmann::json stats;
  for (const AlgorithmSummary& s : result.summaries) {
    nlohmann::json a;
    a["runs"] = s.runs;
    a["failures"] = s.failures;
    a["mean_final_cost"] = s.mean_final_cost;
    a["min_final_cost"] = s.min_final_cost;
    a["max_final_cost"] = s.max_final_cost;
    std::vector<double> finals;
    for (const RunRecord& r : result.records) {
      if (r.algorithm == s.algorithm) {
        finals.push_back(r.failed ? std::nan("") : r.final_cost);
      }
    }
    a["final_costs"] = finals;
    stats[std::string(to_string(s.algorithm))] = a;
  }
  summary["algorithms"] = stats;

  nlohmann::json meta;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["timestamp"] = stamp;
  nlohmann::json runs = nlohmann::json::array();
  for (const RunRecord& r : result.records) {
    nlohmann::json run;
    run["algorithm"] = std::string(to_string(r.algorithm));
    run["trial"] = r.trial;
    run["wall_seconds"] = r.wall_seconds;
    if (r.failed) {
      run["error"] = r.error;
    }
    runs.push_back(run);
  }
  meta["runs"] = runs;
  summary["metadata"] = meta;

  auto out = open_output(root / "summary.json");
  out << summary.dump(2) << '\n';
}

void print_summary(std::ostream& out, const ExperimentResult& result) {
  out << std::left << std::setw(18) << "algorithm" << std::right
      << std::setw(6) << "runs" << std::setw(6) << "fail" << std::setw(16)
      << "mean" << std::setw(16) << "min" << std::setw(16) << "max" << '\n';
  for (const AlgorithmSummary& s : result.summaries) {
    out << std::left << std::setw(18) << to_string(s.algorithm) << std::right
        << std::setw(6) << s.runs << std::setw(6) << s.failures
        << std::setw(16) << std::setprecision(8) << s.mean_final_cost
        << std::setw(16) << s.min_final_cost << std::setw(16)
        << s.max_final_cost << '\n';
  }
}

}  // namespace eddp::bench
