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

#include "eddp/qgauss.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eddp/errors.hpp"

namespace eddp::qgauss {

namespace {

void require_nd_range(EntropicIndex q, int n, const char* what) {
  if (!(q.value() > 1.0) || !(q.value() < max_q(n))) {
    throw DomainError(std::string(what) + ": q = " +
                      std::to_string(q.value()) + " outside (1, " +
                      std::to_string(max_q(n)) + ") for n = " +
                      std::to_string(n));
  }
}

double log_partition_1d(EntropicIndex q, double sigma2) {
  using tsallis::log_beta_fn;
  const double qv = q.value();
  if (q.is_shannon()) {
    return 0.5 * std::log(2.0 * std::numbers::pi * sigma2);
  }
  if (qv > 1.0) {
    return 0.5 * std::log(sigma2 * (3.0 - qv) / (qv - 1.0)) +
           log_beta_fn(0.5, (3.0 - qv) / (2.0 * (qv - 1.0)));
  }
  return 0.5 * std::log(sigma2 * (3.0 - qv) / (1.0 - qv)) +
         log_beta_fn(0.5, (2.0 - qv) / (1.0 - qv));
}

}  // namespace

QGaussian1D::QGaussian1D(EntropicIndex q, double mu, double sigma2)
    : q_(q), mu_(mu), sigma2_(sigma2) {
  if (!(q.value() < 3.0)) {
    throw DomainError("univariate q-Gaussian requires q < 3");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2) || !std::isfinite(mu)) {
    throw DomainError("q-variance must be positive and finite");
  }
  log_z_ = log_partition_1d(q, sigma2);
}

double QGaussian1D::support_half_width() const noexcept {
  const double qv = q_.value();
  if (q_.is_shannon() || qv > 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(sigma2_ * (3.0 - qv) / (1.0 - qv));
}

double pdf_1d(const QGaussian1D& dist, double x) {
  const double d2 = (x - dist.mu()) * (x - dist.mu()) / dist.sigma2();
  if (dist.q().is_shannon()) {
    return std::exp(-0.5 * d2 - dist.log_partition());
  }
  const double qv = dist.q().value();
  const double base = 1.0 - (1.0 - qv) / (3.0 - qv) * d2;
  if (base <= 0.0) {
    return 0.0;
  }
  return std::exp(std::log(base) / (1.0 - qv) - dist.log_partition());
}

QGaussianND::QGaussianND(EntropicIndex q, Eigen::VectorXd mu,
                         Eigen::MatrixXd sigma)
    : q_(q), mu_(std::move(mu)), sigma_(std::move(sigma)) {
  const int n = dim();
  if (n < 1) {
    throw DomainError("q-Gaussian dimension must be positive");
  }
  if (sigma_.rows() != n || sigma_.cols() != n) {
    throw DomainError("q-covariance shape does not match mean");
  }
  require_nd_range(q_, n, "multivariate q-Gaussian");
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("q-covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) {
    throw DomainError("q-covariance is not positive definite");
  }
  lower_ = llt.matrixL();

  const double qv = q_.value();
  const double s = 1.0 / (qv - 1.0);
  const double half_n = 0.5 * n;
  const double log_det = 2.0 * lower_.diagonal().array().log().sum();
  log_z_ = half_n * std::log((n + 2.0 - n * qv) / (qv - 1.0)) +
           0.5 * log_det + half_n * std::log(std::numbers::pi) +
           tsallis::log_gamma_fn(s - half_n) - tsallis::log_gamma_fn(s);
}

double QGaussianND::mahalanobis2(const Eigen::VectorXd& x) const {
  if (x.size() != mu_.size()) {
    throw DomainError("dimension mismatch: expected " +
                      std::to_string(mu_.size()) + ", got " +
                      std::to_string(x.size()));
  }
  const Eigen::VectorXd w =
      lower_.triangularView<Eigen::Lower>().solve(x - mu_);
  return w.squaredNorm();
}

double QGaussianND::log_pdf(const Eigen::VectorXd& x) const {
  const int n = dim();
  const double qv = q_.value();
  const double r2 = mahalanobis2(x);
  return -std::log1p((qv - 1.0) / (n + 2.0 - n * qv) * r2) / (qv - 1.0) -
         log_z_;
}

double pdf_nd(const QGaussianND& dist, const Eigen::VectorXd& x) {
  return std::exp(dist.log_pdf(x));
}

StudentT to_student_t(const QGaussianND& dist) {
  const int n = dist.dim();
  const double qv = dist.q().value();
  const double nu = (n + 2.0 - n * qv) / (qv - 1.0);
  if (!(nu > 0.0)) {
    throw DomainError("degrees of freedom must be positive");
  }
  // (q-1)/(n+2-nq) Sigma_q^{-1} = Sigma_t^{-1} / nu
  const double scale = nu * (qv - 1.0) / (n + 2.0 - n * qv);
  return StudentT{nu, dist.mu(), scale * dist.sigma()};
}

QGaussianND escort_transform(const QGaussianND& dist) {
  const int n = dist.dim();
  const double qv = dist.q().value();
  const double q_escort = 2.0 - 1.0 / qv;
  const double ratio = (n + 2.0 - n * qv) / (n + (2.0 - n) * qv);
  return QGaussianND(EntropicIndex(q_escort), dist.mu(), ratio * dist.sigma());
}

Eigen::MatrixXd sample(const QGaussianND& dist, std::mt19937_64& rng,
                       int count) {
  if (count < 1) {
    throw DomainError("sample count must be positive");
  }
  const StudentT t = to_student_t(dist);
  const int n = dist.dim();
  // Sigma_t equals Sigma_q up to rounding; factor it directly.
  Eigen::LLT<Eigen::MatrixXd> llt(t.sigma);
  if (llt.info() != Eigen::Success) {
    throw DomainError("Student-t scale matrix is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(t.nu);
  Eigen::MatrixXd out(count, n);
  Eigen::VectorXd z(n);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < n; ++j) {
      z(j) = normal(rng);
    }
    const double w = chi2(rng);
    out.row(i) = (t.mu + lower * z * std::sqrt(t.nu / w)).transpose();
  }
  return out;
}

double covariance_ratio(EntropicIndex q, int n) {
  const double qv = q.value();
  return (n + 2.0 - n * qv) / (n + 4.0 - (n + 2.0) * qv);
}

MomentReport moments(const QGaussianND& dist) {
  const int n = dist.dim();
  const double qv = dist.q().value();
  MomentReport report{std::nullopt, Undefined{}};
  if (!(qv < 1.0 + 2.0 / (n + 1.0))) {
    return report;
  }
  report.mean = dist.mu();
  if (qv < 1.0 + 2.0 / (n + 2.0)) {
    report.covariance =
        Eigen::MatrixXd(covariance_ratio(dist.q(), n) * dist.sigma());
  } else {
    report.covariance = Infinite{};
  }
  return report;
}

}  // namespace eddp::qgauss
