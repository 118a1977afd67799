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

#include <stdexcept>
#include <string>

namespace eddp {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A q-deformed expression diverges (q-exponential pole, gamma pole).
class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

// A rollout produced a non-finite state.
class RolloutDivergence : public std::runtime_error {
public:
  explicit RolloutDivergence(int timestep)
      : std::runtime_error("rollout diverged at timestep " +
                           std::to_string(timestep)),
        timestep_(timestep) {}

  int timestep() const noexcept { return timestep_; }

private:
  int timestep_;
};

// Q_uu stayed indefinite after regularization.
class RegularizationNeeded : public std::runtime_error {
public:
  RegularizationNeeded(int timestep, double min_eigenvalue)
      : std::runtime_error("Q_uu not positive definite at timestep " +
                           std::to_string(timestep) + " (min eigenvalue " +
                           std::to_string(min_eigenvalue) + ")"),
        timestep_(timestep), min_eigenvalue_(min_eigenvalue) {}

  int timestep() const noexcept { return timestep_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
  int timestep_;
  double min_eigenvalue_;
};

// Root bracketing for a monotone scalar equation failed.
class BracketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace eddp
