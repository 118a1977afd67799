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

#include "eddp/bench/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "eddp/errors.hpp"
#include "eddp/qgauss.hpp"

namespace eddp::bench {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// One [section] of the file with key lookup and unknown-key detection.
class Section {
public:
  Section(std::string name, const pt::ptree* tree)
      : name_(std::move(name)), tree_(tree) {}

  std::string field(const std::string& key) const { return name_ + "." + key; }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    if (tree_ == nullptr) {
      return std::nullopt;
    }
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) {
      return std::nullopt;
    }
    return trim(it->second.data());
  }

  std::optional<double> number(const std::string& key) {
    const auto text = raw(key);
    if (!text) {
      return std::nullopt;
    }
    std::istringstream in(*text);
    double value = 0.0;
    in >> value;
    if (in.fail() || !(in >> std::ws).eof()) {
      throw ConfigError(field(key), "expected a number, got '" + *text + "'");
    }
    return value;
  }

  std::optional<int> integer(const std::string& key) {
    const auto value = number(key);
    if (!value) {
      return std::nullopt;
    }
    if (*value != static_cast<double>(static_cast<long long>(*value))) {
      throw ConfigError(field(key), "expected an integer");
    }
    return static_cast<int>(*value);
  }

  std::optional<Vector> vector(const std::string& key) {
    const auto text = raw(key);
    if (!text) {
      return std::nullopt;
    }
    std::string cleaned = *text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) {
      values.push_back(v);
    }
    if (!in.eof()) {
      throw ConfigError(field(key), "expected a list of numbers, got '" +
                                        *text + "'");
    }
    return Eigen::Map<Vector>(values.data(),
                              static_cast<Eigen::Index>(values.size()));
  }

  void reject_unknown() const {
    if (tree_ == nullptr) {
      return;
    }
    for (const auto& [key, _] : *tree_) {
      if (!used_.contains(key)) {
        throw ConfigError(field(key), "unknown key");
      }
    }
  }

private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) {
      parts.push_back(item);
    }
  }
  return parts;
}

std::vector<Algorithm> parse_algorithms(const std::string& field,
                                        const std::string& text) {
  std::vector<Algorithm> algos;
  for (const std::string& name : split(text, ',')) {
    const auto algo = parse_algorithm(name);
    if (!algo) {
      throw ConfigError(field, "unknown algorithm '" + name + "'");
    }
    algos.push_back(*algo);
  }
  if (algos.empty()) {
    throw ConfigError(field, "at least one algorithm required");
  }
  return algos;
}

Vector require_size(const std::string& field, std::optional<Vector> v,
                    int size) {
  if (!v) {
    throw ConfigError(field, "missing");
  }
  if (v->size() != size) {
    throw ConfigError(field, "expected " + std::to_string(size) +
                                 " values, got " + std::to_string(v->size()));
  }
  return *v;
}

Scenario parse_scenario(Section& s) {
  Scenario sc;
  sc.name = s.raw("name").value_or(sc.name);
  const std::string system = s.raw("system").value_or("car2d");
  if (system == "car2d") {
    sc.system = SystemKind::kCar2D;
  } else if (system == "quadrotor") {
    sc.system = SystemKind::kQuadrotor;
  } else {
    throw ConfigError(s.field("system"), "unknown system '" + system + "'");
  }
  sc.dt = s.number("dt").value_or(sc.dt);
  if (!(sc.dt > 0.0)) {
    throw ConfigError(s.field("dt"), "must be positive");
  }
  sc.horizon = s.integer("horizon").value_or(sc.horizon);
  if (sc.horizon < 1) {
    throw ConfigError(s.field("horizon"), "must be at least 1");
  }

  auto& quad = sc.quadrotor;
  quad.mass = s.number("mass").value_or(quad.mass);
  quad.gravity = s.number("gravity").value_or(quad.gravity);
  quad.arm_length = s.number("arm_length").value_or(quad.arm_length);
  if (const auto inertia = s.vector("inertia")) {
    const Vector v = require_size(s.field("inertia"), inertia, 3);
    quad.inertia_xx = v(0);
    quad.inertia_yy = v(1);
    quad.inertia_zz = v(2);
  }
  quad.torque_coefficient =
      s.number("torque_coefficient").value_or(quad.torque_coefficient);

  const int nx = sc.state_dim();
  const int nu = sc.control_dim();
  sc.x0 = s.vector("x0") ? require_size(s.field("x0"), s.vector("x0"), nx)
                         : Vector::Zero(nx);
  sc.target = require_size(s.field("target"), s.vector("target"), nx);
  sc.running_state_weights =
      s.vector("running_state_weights")
          ? require_size(s.field("running_state_weights"),
                         s.vector("running_state_weights"), nx)
          : Vector::Zero(nx);
  sc.control_weights = require_size(s.field("control_weights"),
                                    s.vector("control_weights"), nu);
  sc.terminal_weights = require_size(s.field("terminal_weights"),
                                     s.vector("terminal_weights"), nx);
  if ((sc.running_state_weights.array() < 0.0).any() ||
      (sc.terminal_weights.array() < 0.0).any()) {
    throw ConfigError(s.field("running_state_weights"),
                      "state weights must be nonnegative");
  }
  if ((sc.control_weights.array() <= 0.0).any()) {
    throw ConfigError(s.field("control_weights"), "must be positive");
  }

  const int pos_dim = sc.system == SystemKind::kCar2D ? 2 : 3;
  if (const auto text = s.raw("obstacles")) {
    for (const std::string& item : split(*text, '|')) {
      std::string cleaned = item;
      std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
      std::istringstream in(cleaned);
      std::vector<double> v;
      double d = 0.0;
      while (in >> d) {
        v.push_back(d);
      }
      if (static_cast<int>(v.size()) != pos_dim + 2) {
        throw ConfigError(s.field("obstacles"),
                          "each obstacle needs center (" +
                              std::to_string(pos_dim) +
                              " values), radius and weight");
      }
      models::Obstacle o{Eigen::Map<Vector>(v.data(), pos_dim), v[pos_dim],
                         v[pos_dim + 1]};
      if (!(o.radius > 0.0) || !(o.weight > 0.0)) {
        throw ConfigError(s.field("obstacles"),
                          "radius and weight must be positive");
      }
      sc.obstacles.push_back(std::move(o));
    }
  }

  const std::string init = s.raw("initial_controls")
                               .value_or(sc.system == SystemKind::kQuadrotor
                                             ? "hover"
                                             : "zeros");
  if (init == "zeros") {
    sc.initial_controls = InitialControls::kZeros;
  } else if (init == "hover") {
    if (sc.system != SystemKind::kQuadrotor) {
      throw ConfigError(s.field("initial_controls"),
                        "hover is only defined for the quadrotor");
    }
    sc.initial_controls = InitialControls::kHover;
  } else {
    throw ConfigError(s.field("initial_controls"),
                      "expected zeros or hover, got '" + init + "'");
  }
  const std::string ref = s.raw("control_reference").value_or("zero");
  if (ref == "hover") {
    if (sc.system != SystemKind::kQuadrotor) {
      throw ConfigError(s.field("control_reference"),
                        "hover is only defined for the quadrotor");
    }
    sc.hover_control_reference = true;
  } else if (ref != "zero") {
    throw ConfigError(s.field("control_reference"),
                      "expected zero or hover, got '" + ref + "'");
  }
  sc.init_perturbation = s.number("init_perturbation").value_or(0.0);
  if (sc.init_perturbation < 0.0) {
    throw ConfigError(s.field("init_perturbation"), "must be nonnegative");
  }
  s.reject_unknown();
  return sc;
}

void parse_solver(Section& s, SolverConfig& cfg) {
  cfg.alpha = s.number("alpha").value_or(cfg.alpha);
  if (const auto q = s.number("q")) {
    cfg.q = EntropicIndex(*q);
  }
  cfg.modes = s.integer("modes").value_or(cfg.modes);
  cfg.sample_every = s.integer("sample_every").value_or(cfg.sample_every);
  cfg.max_iter = s.integer("iters").value_or(cfg.max_iter);
  if (const auto cap = s.number("covariance_cap")) {
    cfg.covariance_cap = *cap;
  }
  s.reject_unknown();
}

// Per-system default entropic index.
double default_q(SystemKind system) {
  return system == SystemKind::kCar2D ? 1.8 : 1.4;
}

}  // namespace

int Scenario::state_dim() const {
  return system == SystemKind::kCar2D ? 3 : 12;
}

int Scenario::control_dim() const {
  return system == SystemKind::kCar2D ? 2 : 4;
}

Problem build_problem(const Scenario& sc) {
  Problem problem;
  std::vector<int> position;
  Vector hover;
  if (sc.system == SystemKind::kCar2D) {
    problem.dynamics = std::make_unique<models::Car2D>(sc.dt);
    position = {0, 1};
  } else {
    problem.dynamics = std::make_unique<models::Quadrotor>(sc.dt, sc.quadrotor);
    position = {0, 1, 2};
    hover = Vector::Constant(4, sc.quadrotor.hover_force());
  }
  models::QuadraticWeights weights{sc.running_state_weights.asDiagonal(),
                                   sc.control_weights.asDiagonal(),
                                   sc.terminal_weights.asDiagonal()};
  problem.cost = std::make_unique<models::CompositeCost>(
      std::move(weights), sc.target, models::ObstacleField(sc.obstacles),
      models::PositionExtractor{position},
      sc.hover_control_reference ? hover : Vector{});
  problem.x0 = sc.x0;
  const Vector u0 = sc.initial_controls == InitialControls::kHover
                        ? hover
                        : Vector::Zero(sc.control_dim());
  problem.nominal_controls.assign(sc.horizon, u0);
  return problem;
}

ExperimentSpec parse_experiment(const std::string& text,
                                const std::filesystem::path& origin) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", e.message() + " at line " +
                                  std::to_string(e.line()));
  }

  ExperimentSpec spec;
  spec.scenario_path = origin;
  const pt::ptree* scenario_tree = nullptr;
  const pt::ptree* solver_tree = nullptr;
  const pt::ptree* experiment_tree = nullptr;
  std::map<Algorithm, const pt::ptree*> overrides;
  for (const auto& [name, tree] : root) {
    if (name == "scenario") {
      scenario_tree = &tree;
    } else if (name == "solver") {
      solver_tree = &tree;
    } else if (name == "experiment") {
      experiment_tree = &tree;
    } else if (name.rfind("solver.", 0) == 0) {
      const auto algo = parse_algorithm(name.substr(7));
      if (!algo) {
        throw ConfigError(name, "unknown algorithm section");
      }
      overrides[*algo] = &tree;
    } else if (tree.empty()) {
      throw ConfigError(name, "key outside of a section");
    } else {
      throw ConfigError(name, "unknown section");
    }
  }
  if (scenario_tree == nullptr) {
    throw ConfigError("scenario", "missing section");
  }
  Section scenario("scenario", scenario_tree);
  spec.scenario = parse_scenario(scenario);

  Section experiment("experiment", experiment_tree);
  spec.algorithms = parse_algorithms(
      experiment.field("algorithms"),
      experiment.raw("algorithms")
          .value_or("ddp, me_shannon_uni, me_shannon_multi, me_tsallis"));
  spec.trials = experiment.integer("trials").value_or(spec.trials);
  if (spec.trials < 1) {
    throw ConfigError(experiment.field("trials"), "must be at least 1");
  }
  if (const auto seed = experiment.number("seed")) {
    if (*seed < 0.0) {
      throw ConfigError(experiment.field("seed"), "must be nonnegative");
    }
    spec.base_seed = static_cast<std::uint64_t>(*seed);
  }
  if (const auto out = experiment.raw("out")) {
    spec.output_dir = *out;
  }
  spec.jobs = experiment.integer("jobs").value_or(spec.jobs);
  experiment.reject_unknown();

  SolverConfig base;
  base.q = EntropicIndex(default_q(spec.scenario.system));
  Section solver("solver", solver_tree);
  parse_solver(solver, base);
  for (const Algorithm algo :
       {Algorithm::kDdp, Algorithm::kShannonUnimodal,
        Algorithm::kShannonMultimodal, Algorithm::kTsallis}) {
    SolverConfig cfg = base;
    cfg.algorithm = algo;
    if (const auto it = overrides.find(algo); it != overrides.end()) {
      Section section("solver." + std::string(to_string(algo)), it->second);
      parse_solver(section, cfg);
    }
    if (algo == Algorithm::kDdp) {
      cfg.modes = 1;
    }
    spec.solvers[algo] = cfg;
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("scenario", "cannot open '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str(), path);
}

void apply_overrides(ExperimentSpec& spec, const Overrides& o) {
  if (o.algorithms) {
    spec.algorithms = *o.algorithms;
  }
  for (auto& [algo, cfg] : spec.solvers) {
    if (o.alpha) {
      cfg.alpha = *o.alpha;
    }
    if (o.q) {
      cfg.q = EntropicIndex(*o.q);
    }
    if (o.modes && algo != Algorithm::kDdp) {
      cfg.modes = *o.modes;
    }
    if (o.sample_every) {
      cfg.sample_every = *o.sample_every;
    }
    if (o.max_iter) {
      cfg.max_iter = *o.max_iter;
    }
  }
  if (o.trials) {
    spec.trials = *o.trials;
  }
  if (o.seed) {
    spec.base_seed = *o.seed;
  }
  if (o.output_dir) {
    spec.output_dir = *o.output_dir;
  }
  if (o.jobs) {
    spec.jobs = *o.jobs;
  }
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) {
    throw ConfigError("experiment.trials", "must be at least 1");
  }
  if (spec.jobs < 1) {
    throw ConfigError("experiment.jobs", "must be at least 1");
  }
  const int nu = spec.scenario.control_dim();
  for (const Algorithm algo : spec.algorithms) {
    const std::string section = "solver." + std::string(to_string(algo));
    try {
      spec.solvers.at(algo).validate(nu);
    } catch (const DomainError& e) {
      const std::string what = e.what();
      const auto colon = what.find(':');
      throw ConfigError(section + "." + what.substr(0, colon),
                        colon == std::string::npos ? what
                                                   : trim(what.substr(colon + 1)));
    }
  }
}

}  // namespace eddp::bench
