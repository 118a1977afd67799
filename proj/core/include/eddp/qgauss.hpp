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

// Univariate and multivariate q-Gaussian distributions.
//
// The multivariate family (q > 1) is a reparametrized multivariate
// Student's t; sampling and moments go through that correspondence. The
// escort p^q / C of a q-Gaussian is again a q-Gaussian with index
// q' = 2 - 1/q, which is how escort samples are drawn.

#pragma once

#include <optional>
#include <random>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "eddp/tsallis_math.hpp"

namespace eddp::qgauss {

/// Univariate q-Gaussian with q-mean mu and q-variance sigma2, q < 3.
class QGaussian1D {
public:
  QGaussian1D(EntropicIndex q, double mu, double sigma2);

  EntropicIndex q() const noexcept { return q_; }
  double mu() const noexcept { return mu_; }
  double sigma2() const noexcept { return sigma2_; }

  double log_partition() const noexcept { return log_z_; }

  // Half width of the compact support for q < 1; +inf otherwise.
  double support_half_width() const noexcept;

private:
  EntropicIndex q_;
  double mu_;
  double sigma2_;
  double log_z_;
};

double pdf_1d(const QGaussian1D& dist, double x);

/// Multivariate q-Gaussian, 1 < q < 1 + 2/n, with q-mean and SPD
/// q-covariance. Immutable once built.
class QGaussianND {
public:
  QGaussianND(EntropicIndex q, Eigen::VectorXd mu, Eigen::MatrixXd sigma);

  EntropicIndex q() const noexcept { return q_; }
  int dim() const noexcept { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& mu() const noexcept { return mu_; }
  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return lower_; }

  double log_partition() const noexcept { return log_z_; }
  double log_pdf(const Eigen::VectorXd& x) const;

  // (x - mu)^T Sigma^{-1} (x - mu)
  double mahalanobis2(const Eigen::VectorXd& x) const;

private:
  EntropicIndex q_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd lower_;
  double log_z_;
};

double pdf_nd(const QGaussianND& dist, const Eigen::VectorXd& x);

// Upper end of the open q-range (1, 1 + 2/n) where the density exists.
inline double max_q(int n) { return 1.0 + 2.0 / n; }

struct StudentT {
  double nu;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

StudentT to_student_t(const QGaussianND& dist);

/// Escort distribution p^q / C, returned as a q-Gaussian with
/// q' = 2 - 1/q. The result always has finite covariance (q' < 1 + 2/(n+2)).
QGaussianND escort_transform(const QGaussianND& dist);

/// `count` i.i.d. draws as rows of a count x n matrix.
Eigen::MatrixXd sample(const QGaussianND& dist, std::mt19937_64& rng,
                       int count);

struct Infinite {};
struct Undefined {};

using Covariance = std::variant<Eigen::MatrixXd, Infinite, Undefined>;

struct MomentReport {
  std::optional<Eigen::VectorXd> mean;
  Covariance covariance;

  bool covariance_finite() const {
    return std::holds_alternative<Eigen::MatrixXd>(covariance);
  }
};

MomentReport moments(const QGaussianND& dist);

// Ordinary (not q-) covariance over q-covariance, valid for
// q < 1 + 2/(n+2).
double covariance_ratio(EntropicIndex q, int n);

}  // namespace eddp::qgauss
