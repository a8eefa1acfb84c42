/******************************************************************************
 * Copyright 2026 The rlsmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rlsmrac/adaptive_laws.hpp"
#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"

namespace rlsmrac {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(GradientLawTest, Examples) {
  const GradientGain gain = GradientGain::scalar(1.0, 2);
  const Eigen::Vector2d omega(1.0, 0.0);
  const Eigen::VectorXd rate = gradient_rate(1.0, omega, gain, 1);
  EXPECT_DOUBLE_EQ(rate(0), -1.0);
  EXPECT_DOUBLE_EQ(rate(1), 0.0);
  EXPECT_EQ(gradient_rate(1.0, omega, gain, -1), -rate);

  const Eigen::Vector2d theta(0.3, -0.7);
  EXPECT_EQ(gradient_update(theta, 0.0, omega, gain, 1, 1e-3), theta);
  const Eigen::VectorXd up = gradient_update(theta, 1.0, omega, gain, 1, 1e-3);
  const Eigen::VectorXd down = gradient_update(theta, 1.0, omega, gain, -1, 1e-3);
  EXPECT_NEAR((up - theta)(0), -1e-3, 1e-15);
  EXPECT_NEAR((up - theta + down - theta).norm(), 0.0, 1e-15);
}

TEST(GradientLawTest, GainMustBeSpd) {
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GradientGain{bad}, ValidationError);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.1, 0.0, 1.0;
  EXPECT_THROW(GradientGain{asym}, ValidationError);
}

TEST(RlsLawTest, Examples) {
  const Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  const Eigen::Vector2d omega(1.0, 0.0);
  const Eigen::VectorXd rate = rls_rate(1.0, omega, 0.0, P, 1);
  EXPECT_DOUBLE_EQ(rate(0), -1.0);
  EXPECT_DOUBLE_EQ(rate(1), 0.0);

  // Equilibrium at the ideal parameters.
  const Eigen::Vector2d theta_err = Eigen::Vector2d::Zero();
  const double eps = rls_epsilon(RlsMode::kAnalysis, theta_err, omega);
  EXPECT_EQ(eps, 0.0);
  EXPECT_EQ(rls_rate(0.0, omega, eps, P, 1).norm(), 0.0);

  // Realizable mode drops eps.
  EXPECT_EQ(rls_epsilon(RlsMode::kRealizable, Eigen::Vector2d(1.0, 1.0), omega), 0.0);
  EXPECT_EQ(rls_epsilon(RlsMode::kAnalysis, Eigen::Vector2d(2.0, 1.0), omega), 2.0);
}

TEST(RlsLawTest, NormalizationScalesRate) {
  const Eigen::Matrix2d P = Eigen::Matrix2d::Identity() * 3.0;
  const Eigen::Vector2d omega(1.0, 2.0);
  const Eigen::VectorXd raw = rls_rate(0.5, omega, 0.2, P, 1, false);
  const Eigen::VectorXd norm = rls_rate(0.5, omega, 0.2, P, 1, true);
  EXPECT_LT((norm * 6.0 - raw).norm(), 1e-14);
}

TEST(CovarianceTest, ZeroRegressorGrowsExponentially) {
  Covariance cov(Eigen::Matrix2d::Identity() * 2.0, 0.5);
  const Eigen::Vector2d omega = Eigen::Vector2d::Zero();
  const double dt = 1e-3;
  for (int i = 0; i < 2000; ++i) {
    covariance_update(cov, omega, dt);
  }
  EXPECT_NEAR(cov.P()(0, 0), 2.0 * std::exp(1.0), 1e-9);
  EXPECT_NEAR(cov.P()(0, 1), 0.0, 1e-15);
}

TEST(CovarianceTest, RiccatiClosedForm) {
  Covariance cov(Eigen::MatrixXd::Ones(1, 1), 0.0);
  const Eigen::VectorXd omega = Eigen::VectorXd::Ones(1);
  const double dt = 1e-3;
  int step = 0;
  for (double t_check : {1.0, 5.0, 10.0}) {
    while (step * dt < t_check - 1e-12) {
      covariance_update(cov, omega, dt);
      ++step;
    }
    EXPECT_NEAR(cov.P()(0, 0), 1.0 / (1.0 + t_check), 1e-6) << "t = " << t_check;
  }
}

TEST(CovarianceTest, ClampsAtRhoMax) {
  Covariance cov(Eigen::MatrixXd::Constant(1, 1, 100.0), 0.95, 1e4);
  const Eigen::VectorXd omega = Eigen::VectorXd::Zero(1);
  const double dt = 1e-3;
  double first_clamp = -1.0;
  for (int i = 1; i <= 6000; ++i) {
    const CovarianceEvent ev = covariance_update(cov, omega, dt);
    if (ev.clamped && first_clamp < 0.0) {
      first_clamp = i * dt;
    }
    ASSERT_LE(cov.max_eigenvalue(), 1e4 * (1.0 + 1e-12));
  }
  EXPECT_NEAR(first_clamp, std::log(100.0) / 0.95, 2e-3);
  EXPECT_NEAR(cov.P()(0, 0), 1e4, 1e-6);
  EXPECT_GT(cov.clamp_events(), 0);
}

TEST(CovarianceTest, ResetOnLostDefiniteness) {
  Covariance cov(Eigen::Matrix2d::Identity(), 0.5);
  Eigen::Matrix2d indefinite;
  indefinite << 1.0, 0.0, 0.0, -1.0;
  const CovarianceEvent ev = cov.accept(indefinite);
  EXPECT_TRUE(ev.reset);
  EXPECT_EQ(cov.P(), Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
  EXPECT_EQ(cov.resets(), 1);
}

TEST(CovarianceTest, RejectsBadConstruction) {
  EXPECT_THROW(Covariance(Eigen::Matrix2d::Identity() * -1.0, 0.5), ValidationError);
  EXPECT_THROW(Covariance(Eigen::Matrix2d::Identity(), -0.1), ValidationError);
  EXPECT_THROW(Covariance(Eigen::Matrix2d::Identity() * 10.0, 0.1, 5.0), ValidationError);
}

TEST(CovarianceTest, StaysSymmetricPositiveDefinite) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  Eigen::Matrix3d p0;
  p0 << 4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0;
  Covariance cov(p0, 0.95);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::Vector3d omega(n(rng), n(rng), n(rng));
    covariance_update(cov, omega, 1e-3, i % 2 == 0);
    ASSERT_LT((cov.P() - cov.P().transpose()).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_EQ(Eigen::LLT<Eigen::MatrixXd>(cov.P()).info(), Eigen::Success);
  }
  EXPECT_EQ(cov.resets(), 0);
}

TEST(DualityTest, DualExamples) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Constant(1, 1, 2.0);
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    Q = dual_q_step(Q, Eigen::VectorXd::Zero(1), 0.7, dt);
  }
  EXPECT_NEAR(Q(0, 0), 2.0 * std::exp(-0.7), 1e-10);

  Q = Eigen::MatrixXd::Constant(1, 1, 2.0);
  for (int i = 0; i < 3000; ++i) {
    Q = dual_q_step(Q, Eigen::VectorXd::Ones(1), 0.0, dt);
  }
  EXPECT_NEAR(Q(0, 0), 5.0, 1e-10);
}

TEST(DualityTest, PTimesQStaysIdentity) {
  Covariance cov(Eigen::Matrix2d::Identity(), 0.95);
  Eigen::MatrixXd Q = Eigen::Matrix2d::Identity();
  const double dt = 1e-3;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = i * dt;
    // Omega held over the step for both flows.
    const Eigen::Vector2d omega(std::sin(t), std::cos(t));
    const CovarianceEvent ev = covariance_update(cov, omega, dt);
    ASSERT_FALSE(ev.clamped || ev.reset);
    Q = dual_q_step(Q, omega, 0.95, dt);
    worst = std::max(worst, (cov.P() * Q - Eigen::MatrixXd::Identity(2, 2))
                                .lpNorm<Eigen::Infinity>());
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(ProjectionTest, Examples) {
  const ProjectionBounds b = ProjectionBounds::uniform(-1.0, 1.0, 2);
  const Eigen::Vector2d interior(0.0, 0.5);
  const Eigen::Vector2d d(3.0, -2.0);
  EXPECT_EQ(project(interior, d, b).derivative, Eigen::VectorXd(d));

  const Eigen::Vector2d on_upper(1.0, 1.0);
  const ProjectionResult r = project(on_upper, Eigen::Vector2d(2.0, -2.0), b);
  EXPECT_EQ(r.derivative(0), 0.0);
  EXPECT_EQ(r.derivative(1), -2.0);
  EXPECT_FALSE(r.clamped);

  const ProjectionResult out = project(Eigen::Vector2d(1.5, -3.0), d, b);
  EXPECT_TRUE(out.clamped);
  EXPECT_EQ(out.value, Eigen::VectorXd(Eigen::Vector2d(1.0, -1.0)));
  EXPECT_EQ(out.derivative(0), 0.0);
  EXPECT_EQ(out.derivative(1), 0.0);
}

TEST(ProjectionTest, BoundsValidation) {
  ProjectionBounds b;
  b.lower = Eigen::Vector2d(0.0, 1.0);
  b.upper = Eigen::Vector2d(1.0, 1.0);
  EXPECT_THROW(b.validate(), ValidationError);
  b.upper = Eigen::Vector3d(1.0, 2.0, 3.0);
  EXPECT_THROW(b.validate(), ValidationError);
}

TEST(ProjectionTest, RandomDerivativesStayInside) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 50.0);
  ProjectionBounds b;
  b.lower = Eigen::Vector3d(-1.0, 0.0, -5.0);
  b.upper = Eigen::Vector3d(1.0, 2.0, -4.0);
  const double dt = 1e-2;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd theta = Eigen::Vector3d(0.0, 1.0, -4.5);
    for (int i = 0; i < 2000; ++i) {
      const Eigen::Vector3d drive(n(rng), n(rng), n(rng));
      auto f = [&](double, const Eigen::VectorXd& x) {
        return projected_rate(x, drive, b);
      };
      const ProjectionResult r =
          project(rk4_step(f, theta, i * dt, dt), Eigen::Vector3d::Zero(), b);
      theta = r.value;
      ASSERT_TRUE(b.contains(theta));
    }
  }
}

TEST(PeTest, SinusoidWindowIntegral) {
  PeWindow win(2.0 * kPi, 1e-3);
  const int steps = 20000;
  const double dt = 2.0 * kPi / steps;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    win.push(t, Eigen::Vector2d(std::sin(t), std::cos(t)));
  }
  const PeVerdict v = pe_check(win);
  ASSERT_EQ(v.status, PeStatus::kExcited);
  const Eigen::Matrix2d expected = Eigen::Matrix2d::Identity() * kPi;
  EXPECT_LE((v.integral - expected).norm() / expected.norm(), 1e-3);
  EXPECT_NEAR(v.min_eig_level, 0.5, 1e-3);
}

TEST(PeTest, ConstantAndZeroRegressorsAreNotExciting) {
  PeWindow constant(1.0, 1e-3);
  PeWindow zero(1.0, 1e-3);
  for (int i = 0; i <= 2000; ++i) {
    constant.push(i * 1e-3, Eigen::Vector2d(1.0, 2.0));
    zero.push(i * 1e-3, Eigen::Vector2d::Zero());
  }
  EXPECT_FALSE(pe_check(constant).is_pe());
  EXPECT_EQ(pe_check(constant).status, PeStatus::kNotExcited);
  EXPECT_FALSE(pe_check(zero).is_pe());
  EXPECT_EQ(pe_check(zero).min_eig_level, 0.0);
}

TEST(PeTest, ShortBufferIsIndeterminate) {
  PeWindow win(1.0, 1e-3);
  EXPECT_EQ(pe_check(win).status, PeStatus::kIndeterminate);
  win.push(0.0, Eigen::Vector2d(1.0, 0.0));
  win.push(0.5, Eigen::Vector2d(0.0, 1.0));
  EXPECT_EQ(pe_check(win).status, PeStatus::kIndeterminate);
  EXPECT_THROW(win.push(0.5, Eigen::Vector2d(0.0, 1.0)), ValidationError);
}

TEST(LyapunovTest, Examples) {
  const GradientGain gain = GradientGain::diagonal(Eigen::Vector3d(50.0, 30.0, 40.0));
  const LyapunovWeights acc{1.0, 0.3};
  EXPECT_EQ(lyapunov_value(0.0, Eigen::Vector3d::Zero(), gain, acc), 0.0);
  EXPECT_DOUBLE_EQ(lyapunov_value(1.0, Eigen::Vector3d::Zero(), gain, acc), 0.5);

  const Covariance cov(Eigen::Vector3d(2.0, 3.0, 4.0).asDiagonal().toDenseMatrix(), 0.9);
  const Eigen::Vector3d k(0.4, -1.0, 2.0);
  const double single = lyapunov_value(0.0, k, cov, acc);
  EXPECT_NEAR(lyapunov_value(0.0, 2.0 * k, cov, acc), 4.0 * single, 1e-14);
  // Direct substitution: b/2 * sum k_i^2 / p_i.
  EXPECT_NEAR(single, 0.15 * (0.16 / 2.0 + 1.0 / 3.0 + 4.0 / 4.0), 1e-14);
  EXPECT_NEAR(lyapunov_value(0.0, k, gain, acc),
              0.15 * (0.16 / 50.0 + 1.0 / 30.0 + 4.0 / 40.0), 1e-14);
}

TEST(LyapunovTest, AnalyticRateMatchesFiniteDifference) {
  // e' = -am e + g theta~' omega with the analysis-mode RLS law; the joint
  // state is [e, theta~, vec(P)].
  const ScalarErrorModel model{2.0, 1.5};
  const LyapunovWeights w{1.0, model.input_gain};
  const double beta = 0.4;
  const int m = 2;
  auto omega_at = [](double t) { return Eigen::Vector2d(std::sin(t), 1.0 + 0.5 * std::cos(2.0 * t)); };
  auto unpack_p = [&](const Eigen::VectorXd& x) {
    return Eigen::Map<const Eigen::MatrixXd>(x.data() + 1 + m, m, m).eval();
  };
  auto deriv = [&](double t, const Eigen::VectorXd& x) {
    const Eigen::Vector2d omega = omega_at(t);
    const double e = x(0);
    const Eigen::VectorXd th = x.segment(1, m);
    const Eigen::MatrixXd P = unpack_p(x);
    const double eps = th.dot(omega);
    Eigen::VectorXd d(x.size());
    d(0) = -model.am * e + model.input_gain * eps;
    d.segment(1, m) = rls_rate(e, omega, eps, P, 1);
    const Eigen::MatrixXd Pd = covariance_rate(P, omega, beta);
    d.tail(m * m) = Eigen::Map<const Eigen::VectorXd>(Pd.data(), m * m);
    return d;
  };
  auto value = [&](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd P = unpack_p(x);
    return 0.5 * x(0) * x(0) +
           0.5 * w.parameter * x.segment(1, m).dot(P.llt().solve(x.segment(1, m)));
  };

  Eigen::VectorXd x(1 + m + m * m);
  x << 0.7, 1.0, -0.5, 2.0, 0.3, 0.3, 1.0;
  double t = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 500; ++i) {
    x = rk4_step(deriv, x, t, h);
    t += h;
  }
  const Eigen::VectorXd ahead = rk4_step(deriv, x, t, h);
  // Backward step: integrate the reversed flow.
  auto reversed = [&](double s, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -deriv(2.0 * t - s, y);
  };
  const Eigen::VectorXd behind = rk4_step(reversed, x, t, h);
  const double fd = (value(ahead) - value(behind)) / (2.0 * h);

  const Eigen::Vector2d omega = omega_at(t);
  const Eigen::VectorXd th = x.segment(1, m);
  const Covariance cov(unpack_p(x), beta);
  const double analytic = rls_lyapunov_rate(
      model, x(0), th, rls_rate(x(0), omega, th.dot(omega), cov.P(), 1), omega, cov, w);
  EXPECT_NEAR(fd, analytic, 1e-5);
  EXPECT_LE(analytic, 0.0);
}

}  // namespace
}  // namespace rlsmrac
