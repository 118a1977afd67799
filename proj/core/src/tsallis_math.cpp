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

#include "eddp/tsallis_math.hpp"

#include <cmath>
#include <string>

#include "eddp/errors.hpp"

namespace eddp {

EntropicIndex::EntropicIndex(double q) : q_(q) {
  if (!std::isfinite(q)) {
    throw DomainError("entropic index must be finite");
  }
}

bool EntropicIndex::is_shannon() const noexcept {
  return std::abs(q_ - 1.0) < kBranchTolerance;
}

namespace tsallis {
namespace {

// std::lgamma writes the global signgam; the reentrant form does not.
double lgamma_reentrant(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace

double q_log(double x, EntropicIndex q) {
  if (!(x > 0.0)) {
    throw DomainError("q_log requires x > 0, got " + std::to_string(x));
  }
  if (q.is_shannon()) {
    return std::log(x);
  }
  const double one_minus_q = 1.0 - q.value();
  // expm1 keeps precision when (1-q) ln x is small.
  return std::expm1(one_minus_q * std::log(x)) / one_minus_q;
}

double q_exp(double x, EntropicIndex q) {
  if (q.is_shannon()) {
    return std::exp(x);
  }
  const double q_minus_one = q.value() - 1.0;
  const double base = 1.0 - q_minus_one * x;
  if (base <= 0.0) {
    if (q_minus_one < 0.0) {
      return 0.0;
    }
    throw PoleError("q_exp diverges: 1 - (q-1)x = " + std::to_string(base));
  }
  return std::exp(-std::log1p(-q_minus_one * x) / q_minus_one);
}

double q_product(double a, double b, EntropicIndex q) {
  if (a < 0.0 || b < 0.0) {
    throw DomainError("q_product requires nonnegative arguments");
  }
  if (q.is_shannon()) {
    return a * b;
  }
  const double one_minus_q = 1.0 - q.value();
  if (a == 0.0 || b == 0.0) {
    return 0.0;
  }
  const double base =
      std::pow(a, one_minus_q) + std::pow(b, one_minus_q) - 1.0;
  if (base <= 0.0) {
    if (one_minus_q > 0.0) {
      return 0.0;
    }
    throw PoleError("q_product diverges for q > 1");
  }
  const double result = std::pow(base, 1.0 / one_minus_q);
  if (!std::isfinite(result)) {
    throw OverflowError("q_product overflow");
  }
  return result;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw DomainError("gamma_fn requires x > 0");
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) {
    throw OverflowError("gamma_fn overflow");
  }
  return g;
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma_fn requires x > 0");
  }
  return lgamma_reentrant(x);
}

double log_beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn requires a, b > 0");
  }
  return lgamma_reentrant(a) + lgamma_reentrant(b) - lgamma_reentrant(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta_fn(a, b)); }

}  // namespace tsallis
}  // namespace eddp
