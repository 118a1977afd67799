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

// Scalar q-deformed algebra and the special functions used by q-Gaussian
// partition functions.

#pragma once

namespace eddp {

// |q - 1| below this value selects the Shannon (q = 1) branch.
inline constexpr double kBranchTolerance = 1e-8;

/// Entropic index q of the Tsallis family. Always finite; each operation
/// checks its own admissible range.
class EntropicIndex {
public:
  explicit EntropicIndex(double q);

  double value() const noexcept { return q_; }
  bool is_shannon() const noexcept;

private:
  double q_;
};

namespace tsallis {

/// ln_q(x); throws DomainError for x <= 0.
double q_log(double x, EntropicIndex q);

/// exp_q(x) = [1 - (q-1) x]_+^{-1/(q-1)}. Returns 0 outside the support for
/// q < 1 and throws PoleError past the divergence for q > 1.
double q_exp(double x, EntropicIndex q);

/// a (x)_q b = [a^{1-q} + b^{1-q} - 1]_+^{1/(1-q)}, the product satisfying
/// exp_q(x) (x)_q exp_q(y) = exp_q(x + y).
double q_product(double a, double b, EntropicIndex q);

double gamma_fn(double x);
double log_gamma_fn(double x);

// Computed as exp(lnG(a) + lnG(b) - lnG(a + b)).
double beta_fn(double a, double b);
double log_beta_fn(double a, double b);

}  // namespace tsallis
}  // namespace eddp
