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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "eddp/errors.hpp"
#include "eddp/qgauss.hpp"
#include "support/oracles.hpp"

namespace {

using eddp::EntropicIndex;
using eddp::Matrix;
using eddp::Vector;
using namespace eddp::qgauss;
namespace quad = boost::math::quadrature;

double integrate_1d(const QGaussian1D& d) {
  if (d.q().value() < 1.0) {
    const double w = d.support_half_width();
    quad::tanh_sinh<double> ts;
    return ts.integrate([&](double x) { return pdf_1d(d, x); },
                        d.mu() - w, d.mu() + w);
  }
  quad::sinh_sinh<double> ss;
  return ss.integrate([&](double x) { return pdf_1d(d, x); });
}

// Integral over the plane after x = tan(a), y = tan(b).
template <typename F>
double integrate_plane(F f) {
  quad::tanh_sinh<double> ts;
  const double h = 0.5 * std::numbers::pi;
  return ts.integrate(
      [&](double a) {
        const double ca = std::cos(a);
        return ts.integrate(
            [&](double b) {
              const double cb = std::cos(b);
              return f(std::tan(a), std::tan(b)) / (ca * ca * cb * cb);
            },
            -h, h, 1e-10);
      },
      -h, h, 1e-10);
}

Matrix sample_covariance(const Matrix& s) {
  const Vector mean = s.colwise().mean();
  const Matrix c = s.rowwise() - mean.transpose();
  return c.transpose() * c / static_cast<double>(s.rows() - 1);
}

double frobenius_rel(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / b.norm();
}

TEST(QGaussian1D, CompactSupport) {
  const QGaussian1D d(EntropicIndex(0.5), 0.0, 1.0);
  EXPECT_NEAR(d.support_half_width(), std::sqrt(5.0), 1e-15);
  EXPECT_EQ(pdf_1d(d, 3.0), 0.0);
  EXPECT_EQ(pdf_1d(d, std::sqrt(5.0)), 0.0);
  EXPECT_GT(pdf_1d(d, 2.2), 0.0);
  EXPECT_TRUE(std::isinf(QGaussian1D(EntropicIndex(1.5), 0.0, 1.0)
                             .support_half_width()));
}

TEST(QGaussian1D, GaussianLimit) {
  for (double q : {1.0 - 1e-6, 1.0, 1.0 + 1e-6}) {
    const QGaussian1D d(EntropicIndex(q), 0.0, 1.0);
    EXPECT_NEAR(pdf_1d(d, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-4);
  }
}

TEST(QGaussian1D, NormalizedOnSupport) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> mu(-3.0, 3.0);
  std::uniform_real_distribution<double> log_s2(-2.0, 2.0);
  for (double q : {0.3, 0.5, 0.7, 1.0, 1.2, 1.5, 1.8, 2.0, 2.5}) {
    for (int i = 0; i < 4; ++i) {
      const QGaussian1D d(EntropicIndex(q), mu(rng), std::exp(log_s2(rng)));
      EXPECT_NEAR(integrate_1d(d), 1.0, 1e-6) << "q=" << q;
    }
  }
}

TEST(QGaussian1D, CauchyCaseOnFiniteWindow) {
  // q = 2 with unit q-variance is the standard Cauchy density.
  const QGaussian1D d(EntropicIndex(2.0), 0.0, 1.0);
  quad::tanh_sinh<double> ts;
  const double window =
      ts.integrate([&](double x) { return pdf_1d(d, x); }, -50.0, 50.0);
  EXPECT_NEAR(window, 2.0 / std::numbers::pi * std::atan(50.0), 1e-9);
  EXPECT_NEAR(pdf_1d(d, 1.0), 1.0 / (2.0 * std::numbers::pi), 1e-14);
}

TEST(QGaussian1D, RejectsInvalid) {
  EXPECT_THROW(QGaussian1D(EntropicIndex(3.0), 0.0, 1.0), eddp::DomainError);
  EXPECT_THROW(QGaussian1D(EntropicIndex(1.5), 0.0, 0.0), eddp::DomainError);
  EXPECT_THROW(QGaussian1D(EntropicIndex(1.5), 0.0, -1.0), eddp::DomainError);
}

TEST(QGaussianND, DensityAtMean) {
  const QGaussianND d(EntropicIndex(1.5), Vector::Zero(2), Matrix::Identity(2, 2));
  EXPECT_NEAR(pdf_nd(d, Vector::Zero(2)), 1.0 / (2.0 * std::numbers::pi), 1e-14);
}

TEST(QGaussianND, RadiallyDecreasing) {
  std::mt19937_64 rng(22);
  const Matrix sigma = eddp::testing::random_spd(3, rng);
  const QGaussianND d(EntropicIndex(1.4), Vector::Ones(3), sigma);
  const Vector dir = Vector::Random(3).normalized();
  double prev = pdf_nd(d, d.mu());
  for (int i = 1; i <= 200; ++i) {
    const double p = pdf_nd(d, d.mu() + 0.25 * i * dir);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(QGaussianND, NormalizedInPlane) {
  const QGaussianND d(EntropicIndex(1.8), Vector::Zero(2), Matrix::Identity(2, 2));
  Vector x(2);
  const double mass = integrate_plane([&](double a, double b) {
    x << a, b;
    return pdf_nd(d, x);
  });
  EXPECT_NEAR(mass, 1.0, 1e-3);

  std::mt19937_64 rng(23);
  const QGaussianND e(EntropicIndex(1.3), Vector::Constant(2, 0.5),
                      eddp::testing::random_spd(2, rng));
  const double mass_e = integrate_plane([&](double a, double b) {
    x << a, b;
    return pdf_nd(e, x);
  });
  EXPECT_NEAR(mass_e, 1.0, 1e-6);
}

TEST(QGaussianND, Validation) {
  EXPECT_THROW(QGaussianND(EntropicIndex(2.0), Vector::Zero(2),
                           Matrix::Identity(2, 2)),
               eddp::DomainError);
  EXPECT_THROW(QGaussianND(EntropicIndex(1.0), Vector::Zero(2),
                           Matrix::Identity(2, 2)),
               eddp::DomainError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-6;
  EXPECT_THROW(QGaussianND(EntropicIndex(1.5), Vector::Zero(2), asym),
               eddp::DomainError);
  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  EXPECT_THROW(QGaussianND(EntropicIndex(1.5), Vector::Zero(2), indefinite),
               eddp::DomainError);
  const QGaussianND d(EntropicIndex(1.5), Vector::Zero(2), Matrix::Identity(2, 2));
  EXPECT_THROW(pdf_nd(d, Vector::Zero(3)), eddp::DomainError);
}

TEST(StudentT, DegreesOfFreedom) {
  const auto t2 = to_student_t(
      QGaussianND(EntropicIndex(1.8), Vector::Zero(2), Matrix::Identity(2, 2)));
  EXPECT_NEAR(t2.nu, 0.5, 1e-12);
  const auto t4 = to_student_t(
      QGaussianND(EntropicIndex(1.4), Vector::Zero(4), Matrix::Identity(4, 4)));
  EXPECT_NEAR(t4.nu, 1.0, 1e-12);
  const auto near_one = to_student_t(QGaussianND(
      EntropicIndex(1.0 + 1e-6), Vector::Zero(2), Matrix::Identity(2, 2)));
  EXPECT_GT(near_one.nu, 1e5);
}

TEST(StudentT, ScaleEqualsQCovariance) {
  std::mt19937_64 rng(24);
  for (int n = 1; n <= 4; ++n) {
    const Matrix sigma = eddp::testing::random_spd(n, rng);
    const Vector mu = Vector::Random(n);
    const QGaussianND d(EntropicIndex(1.0 + 1.0 / n), mu, sigma);
    const auto t = to_student_t(d);
    EXPECT_LT((t.sigma - sigma).norm(), 1e-12 * sigma.norm());
    EXPECT_EQ(t.mu, mu);
  }
}

TEST(Escort, Parameters) {
  const Matrix sigma = 2.0 * Matrix::Identity(2, 2);
  const auto e = escort_transform(QGaussianND(EntropicIndex(1.8), Vector::Zero(2), sigma));
  EXPECT_NEAR(e.q().value(), 2.0 - 1.0 / 1.8, 1e-15);
  EXPECT_LT((e.sigma() - 0.2 * sigma).norm(), 1e-14);

  const auto e1 = escort_transform(
      QGaussianND(EntropicIndex(1.5), Vector::Zero(1), Matrix::Identity(1, 1)));
  EXPECT_NEAR(e1.q().value(), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(e1.sigma()(0, 0), 0.6, 1e-15);

  const auto near_one = escort_transform(QGaussianND(
      EntropicIndex(1.0 + 1e-6), Vector::Zero(3), Matrix::Identity(3, 3)));
  EXPECT_NEAR(near_one.q().value(), 1.0, 2e-6);
  EXPECT_LT((near_one.sigma() - Matrix::Identity(3, 3)).norm(), 1e-5);
}

TEST(Escort, AlwaysFiniteCovariance) {
  for (int n = 1; n <= 6; ++n) {
    for (int i = 1; i < 50; ++i) {
      const double q = 1.0 + (2.0 / n) * i / 50.0;
      const auto e = escort_transform(
          QGaussianND(EntropicIndex(q), Vector::Zero(n), Matrix::Identity(n, n)));
      EXPECT_LT(e.q().value(), 1.0 + 2.0 / (n + 2)) << "n=" << n << " q=" << q;
      EXPECT_TRUE(moments(e).covariance_finite());
    }
  }
}

TEST(Escort, DensityRatioConstant) {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int n = 1; n <= 3; ++n) {
    for (double frac : {0.05, 0.3, 0.6, 0.9}) {
      const double q = 1.0 + frac * 2.0 / n;
      const Matrix sigma = eddp::testing::random_spd(n, rng);
      const Vector mu = Vector::Random(n);
      const QGaussianND d(EntropicIndex(q), mu, sigma);
      const QGaussianND e = escort_transform(d);
      std::vector<double> ratios;
      for (int i = 0; i < 100; ++i) {
        Vector x(n);
        for (int j = 0; j < n; ++j) {
          x(j) = mu(j) + normal(rng);
        }
        ratios.push_back(std::exp(e.log_pdf(x) - q * d.log_pdf(x)));
      }
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      EXPECT_LT((*hi - *lo) / *lo, 1e-8) << "n=" << n << " q=" << q;
    }
  }
}

TEST(Escort, ConstantIsInverseNormalizer) {
  std::mt19937_64 rng(35);
  for (double q : {1.1, 1.45, 1.8}) {
    const QGaussianND d(EntropicIndex(q), Vector::Zero(2),
                        eddp::testing::random_spd(2, rng));
    const QGaussianND e = escort_transform(d);
    const Vector origin = Vector::Zero(2);
    Vector y(2);
    const double c = integrate_plane([&](double a, double b) {
      y << a, b;
      return std::exp(q * d.log_pdf(y));
    });
    EXPECT_NEAR(std::exp(e.log_pdf(origin) - q * d.log_pdf(origin)) * c, 1.0,
                1e-6)
        << "q=" << q;
  }
}

TEST(Sampling, Shape) {
  std::mt19937_64 rng(26);
  const QGaussianND d(EntropicIndex(1.3), Vector::Zero(3), Matrix::Identity(3, 3));
  const Matrix one = sample(d, rng, 1);
  EXPECT_EQ(one.rows(), 1);
  EXPECT_EQ(one.cols(), 3);
  EXPECT_THROW(sample(d, rng, 0), eddp::DomainError);
}

TEST(Sampling, Deterministic) {
  const QGaussianND d(EntropicIndex(1.3), Vector::Zero(2), Matrix::Identity(2, 2));
  std::mt19937_64 a(27);
  std::mt19937_64 b(27);
  EXPECT_EQ(sample(d, a, 1000), sample(d, b, 1000));
}

TEST(Sampling, GaussianLimitCovariance) {
  std::mt19937_64 rng(28);
  const QGaussianND d(EntropicIndex(1.0 + 1e-4), Vector::Zero(2),
                      Matrix::Identity(2, 2));
  const Matrix cov = sample_covariance(sample(d, rng, 100000));
  EXPECT_LT(frobenius_rel(cov, Matrix::Identity(2, 2)), 0.05);
}

TEST(Sampling, FiniteCovarianceRegime) {
  std::mt19937_64 rng(29);
  const Matrix sigma = eddp::testing::random_spd(2, rng);
  const QGaussianND d(EntropicIndex(1.3), Vector::Zero(2), sigma);
  const Matrix expected = covariance_ratio(d.q(), 2) * sigma;
  const Matrix cov = sample_covariance(sample(d, rng, 100000));
  EXPECT_LT(frobenius_rel(cov, expected), 0.05);
}

double ks_statistic(std::vector<double> xs, const auto& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

// Critical value of the one-sample KS statistic at significance 0.001.
double ks_critical(std::size_t n) {
  return 1.9495 / std::sqrt(static_cast<double>(n));
}

TEST(Sampling, KolmogorovSmirnovUnivariate) {
  std::mt19937_64 rng(30);
  const QGaussianND d(EntropicIndex(1.6), Vector::Constant(1, 0.3),
                      Matrix::Constant(1, 1, 2.0));
  const Matrix s = sample(d, rng, 100000);
  std::vector<double> xs(s.data(), s.data() + s.size());
  quad::exp_sinh<double> es;
  Vector x(1);
  const auto density = [&](double v) {
    x(0) = v;
    return pdf_nd(d, x);
  };
  // The density is symmetric about the mean.
  const auto cdf = [&](double v) {
    const double m = 0.3;
    const double tail = es.integrate(density, std::abs(v - m) + m,
                                     std::numeric_limits<double>::infinity());
    return v >= m ? 1.0 - tail : tail;
  };
  EXPECT_LT(ks_statistic(xs, cdf), ks_critical(xs.size()));
}

TEST(Sampling, KolmogorovSmirnovMarginals) {
  std::mt19937_64 rng(31);
  const Matrix sigma = eddp::testing::random_spd(3, rng);
  const QGaussianND d(EntropicIndex(1.25), Vector::Zero(3), sigma);
  const Matrix s = sample(d, rng, 100000);
  const double nu = to_student_t(d).nu;
  const boost::math::students_t_distribution<double> t(nu);
  for (int j = 0; j < 3; ++j) {
    std::vector<double> xs(s.rows());
    for (int i = 0; i < s.rows(); ++i) {
      xs[i] = s(i, j);
    }
    const double scale = std::sqrt(sigma(j, j));
    const auto cdf = [&](double v) { return boost::math::cdf(t, v / scale); };
    EXPECT_LT(ks_statistic(xs, cdf), ks_critical(xs.size())) << "marginal " << j;
  }
}

TEST(Moments, Classification) {
  const auto uni = moments(
      QGaussianND(EntropicIndex(1.9), Vector::Zero(1), Matrix::Identity(1, 1)));
  EXPECT_TRUE(uni.mean.has_value());
  EXPECT_TRUE(std::holds_alternative<Infinite>(uni.covariance));

  std::mt19937_64 rng(32);
  const Matrix sigma = eddp::testing::random_spd(2, rng);
  const auto two = moments(QGaussianND(EntropicIndex(1.4), Vector::Ones(2), sigma));
  ASSERT_TRUE(two.covariance_finite());
  EXPECT_LT((std::get<Matrix>(two.covariance) - 3.0 * sigma).norm(),
            1e-12 * sigma.norm());
  EXPECT_EQ(*two.mean, Vector::Ones(2));
  EXPECT_NEAR(covariance_ratio(EntropicIndex(1.4), 2), 3.0, 1e-12);
  EXPECT_NEAR(covariance_ratio(EntropicIndex(1.0 + 1e-9), 5), 1.0, 1e-8);

  const auto undefined = moments(
      QGaussianND(EntropicIndex(1.8), Vector::Zero(2), Matrix::Identity(2, 2)));
  EXPECT_FALSE(undefined.mean.has_value());
  EXPECT_TRUE(std::holds_alternative<Undefined>(undefined.covariance));
}

TEST(Moments, BoundariesFlipExactly) {
  for (int n = 1; n <= 5; ++n) {
    const Vector mu = Vector::Zero(n);
    const Matrix sigma = Matrix::Identity(n, n);
    const double finite_edge = 1.0 + 2.0 / (n + 2);
    const double mean_edge = 1.0 + 2.0 / (n + 1);
    const auto at = [&](double q) {
      return moments(QGaussianND(EntropicIndex(q), mu, sigma));
    };
    EXPECT_TRUE(at(finite_edge - 1e-9).covariance_finite());
    EXPECT_TRUE(std::holds_alternative<Infinite>(at(finite_edge + 1e-9).covariance));
    EXPECT_TRUE(at(mean_edge - 1e-9).mean.has_value());
    EXPECT_TRUE(std::holds_alternative<Infinite>(at(mean_edge - 1e-9).covariance));
    EXPECT_FALSE(at(mean_edge + 1e-9).mean.has_value());
    EXPECT_TRUE(std::holds_alternative<Undefined>(at(mean_edge + 1e-9).covariance));
  }
}

}  // namespace
