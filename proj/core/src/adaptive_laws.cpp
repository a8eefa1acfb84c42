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

#include "rlsmrac/adaptive_laws.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"

namespace rlsmrac {

namespace {

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-10) {
  return m.rows() == m.cols() &&
         (m - m.transpose()).lpNorm<Eigen::Infinity>() <=
             tol * std::max(1.0, m.lpNorm<Eigen::Infinity>());
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

void require_size(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw ValidationError(std::string(what) + ": expected " +
                          std::to_string(n) + " entries, got " +
                          std::to_string(v.size()));
  }
}

void require_sign(int sign_rho) {
  if (sign_rho != 1 && sign_rho != -1) {
    throw ValidationError("sgn(rho*) must be +1 or -1");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

GradientGain::GradientGain(Eigen::MatrixXd gamma) : gamma_(std::move(gamma)) {
  if (gamma_.size() == 0 || !is_symmetric(gamma_)) {
    throw ValidationError("adaptive gain Gamma must be a nonempty symmetric matrix");
  }
  llt_.compute(gamma_);
  if (llt_.info() != Eigen::Success) {
    throw ValidationError("adaptive gain Gamma must be positive definite");
  }
}

GradientGain GradientGain::diagonal(const Eigen::VectorXd& entries) {
  return GradientGain(entries.asDiagonal().toDenseMatrix());
}

GradientGain GradientGain::scalar(double gamma, int size) {
  return GradientGain(gamma * Eigen::MatrixXd::Identity(size, size));
}

Eigen::VectorXd GradientGain::solve(const Eigen::VectorXd& x) const {
  return llt_.solve(x);
}

// ---------------------------------------------------------------------------

Covariance::Covariance(Eigen::MatrixXd p0, double beta, double rho_max)
    : p0_(std::move(p0)), p_(p0_), beta_(beta), rho_max_(rho_max) {
  if (p0_.size() == 0 || !is_symmetric(p0_)) {
    throw ValidationError("P(0) must be a nonempty symmetric matrix");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(p0_).info() != Eigen::Success) {
    throw ValidationError("P(0) must be positive definite");
  }
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
    throw ValidationError("forgetting factor beta must be >= 0");
  }
  if (!(rho_max_ > 0.0) || max_eigenvalue() > rho_max_) {
    throw ValidationError("rho_max must be at least lambda_max(P(0))");
  }
}

CovarianceEvent Covariance::accept(const Eigen::MatrixXd& candidate) {
  CovarianceEvent ev;
  Eigen::MatrixXd next = 0.5 * (candidate + candidate.transpose());
  if (!next.allFinite()) {
    p_ = p0_;
    ev.reset = true;
    ++resets_;
    return ev;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      next, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  if (lmax > rho_max_) {
    next *= rho_max_ / lmax;
    ev.clamped = true;
    ++clamp_events_;
  }
  if (eig.eigenvalues().minCoeff() <= 0.0 ||
      Eigen::LLT<Eigen::MatrixXd>(next).info() != Eigen::Success) {
    p_ = p0_;
    ev.reset = true;
    ++resets_;
    return ev;
  }
  p_ = std::move(next);
  return ev;
}

Eigen::VectorXd Covariance::solve(const Eigen::VectorXd& x) const {
  return p_.llt().solve(x);
}

Eigen::MatrixXd Covariance::inverse() const {
  return p_.llt().solve(Eigen::MatrixXd::Identity(p_.rows(), p_.cols()));
}

double Covariance::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p_, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double Covariance::max_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p_, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

// ---------------------------------------------------------------------------

double normalization(const Eigen::VectorXd& omega, bool normalize) {
  return normalize ? 1.0 + omega.squaredNorm() : 1.0;
}

Eigen::VectorXd gradient_rate(double e1, const Eigen::VectorXd& omega,
                              const GradientGain& gain, int sign_rho) {
  require_size(omega, gain.size(), "gradient_rate omega");
  return -(e1 * sign_rho) * (gain.matrix() * omega);
}

Eigen::MatrixXd covariance_rate(const Eigen::MatrixXd& P,
                                const Eigen::VectorXd& omega, double beta,
                                bool normalize) {
  require_size(omega, P.rows(), "covariance_rate omega");
  const Eigen::VectorXd Pw = P * omega;
  return beta * P - (Pw * Pw.transpose()) / normalization(omega, normalize);
}

Eigen::VectorXd rls_rate(double e1, const Eigen::VectorXd& omega, double eps,
                         const Eigen::MatrixXd& P, int sign_rho,
                         bool normalize) {
  require_size(omega, P.rows(), "rls_rate omega");
  return -((e1 * sign_rho + 0.5 * eps) / normalization(omega, normalize)) *
         (P * omega);
}

double rls_epsilon(RlsMode mode, const Eigen::VectorXd& theta_err,
                   const Eigen::VectorXd& omega) {
  return mode == RlsMode::kAnalysis ? theta_err.dot(omega) : 0.0;
}

Eigen::MatrixXd dual_q_rate(const Eigen::MatrixXd& Q,
                            const Eigen::VectorXd& omega, double beta) {
  require_size(omega, Q.rows(), "dual_q_rate omega");
  return -beta * Q + omega * omega.transpose();
}

Eigen::VectorXd gradient_update(const Eigen::VectorXd& theta, double e1,
                                const Eigen::VectorXd& omega,
                                const GradientGain& gain, int sign_rho,
                                double dt) {
  require_sign(sign_rho);
  require_size(theta, gain.size(), "gradient_update theta");
  const Eigen::VectorXd rate = gradient_rate(e1, omega, gain, sign_rho);
  return rk4_step([&](double, const Eigen::VectorXd&) { return rate; }, theta,
                  0.0, dt);
}

CovarianceEvent covariance_update(Covariance& cov, const Eigen::VectorXd& omega,
                                  double dt, bool normalize) {
  const Eigen::Index n = cov.size();
  const double beta = cov.beta();
  const auto deriv = [&](double, const Eigen::VectorXd& p) {
    return flatten(covariance_rate(unflatten(p, n), omega, beta, normalize));
  };
  const Eigen::VectorXd next = rk4_step(deriv, flatten(cov.P()), 0.0, dt);
  return cov.accept(unflatten(next, n));
}

Eigen::VectorXd rls_update(const Eigen::VectorXd& theta, double e1,
                           const Eigen::VectorXd& omega, double eps,
                           const Covariance& cov, int sign_rho, double dt,
                           bool normalize) {
  require_sign(sign_rho);
  require_size(theta, cov.size(), "rls_update theta");
  const Eigen::VectorXd rate =
      rls_rate(e1, omega, eps, cov.P(), sign_rho, normalize);
  return rk4_step([&](double, const Eigen::VectorXd&) { return rate; }, theta,
                  0.0, dt);
}

Eigen::MatrixXd dual_q_step(const Eigen::MatrixXd& Q,
                            const Eigen::VectorXd& omega, double beta,
                            double dt) {
  const Eigen::Index n = Q.rows();
  const auto deriv = [&](double, const Eigen::VectorXd& q) {
    return flatten(dual_q_rate(unflatten(q, n), omega, beta));
  };
  return unflatten(rk4_step(deriv, flatten(Q), 0.0, dt), n);
}

// ---------------------------------------------------------------------------

void ProjectionBounds::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw ValidationError("projection bounds: lower and upper sizes differ");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower(i) < upper(i))) {
      throw ValidationError("projection bounds: lower[" + std::to_string(i) +
                            "] must be below upper[" + std::to_string(i) + "]");
    }
  }
}

bool ProjectionBounds::contains(const Eigen::VectorXd& v) const {
  return v.size() == lower.size() && (v.array() >= lower.array()).all() &&
         (v.array() <= upper.array()).all();
}

ProjectionBounds ProjectionBounds::uniform(double lo, double hi, int size) {
  return {Eigen::VectorXd::Constant(size, lo), Eigen::VectorXd::Constant(size, hi)};
}

Eigen::VectorXd projected_rate(const Eigen::VectorXd& value,
                               const Eigen::VectorXd& derivative,
                               const ProjectionBounds& bounds) {
  require_size(value, bounds.lower.size(), "projection value");
  require_size(derivative, bounds.lower.size(), "projection derivative");
  Eigen::VectorXd out = derivative;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    if ((value(i) >= bounds.upper(i) && out(i) > 0.0) ||
        (value(i) <= bounds.lower(i) && out(i) < 0.0)) {
      out(i) = 0.0;
    }
  }
  return out;
}

ProjectionResult project(const Eigen::VectorXd& value,
                         const Eigen::VectorXd& derivative,
                         const ProjectionBounds& bounds) {
  ProjectionResult r;
  r.value = value.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
  r.clamped = (r.value.array() != value.array()).any();
  r.derivative = projected_rate(r.value, derivative, bounds);
  return r;
}

// ---------------------------------------------------------------------------

PeWindow::PeWindow(double window, double alpha0)
    : window_(window), alpha0_(alpha0) {
  if (!(window_ > 0.0) || !(alpha0_ > 0.0)) {
    throw ValidationError("PE window T0 and level alpha0 must be positive");
  }
}

Eigen::MatrixXd PeWindow::segment(const Sample& a, const Sample& b) {
  return 0.5 * (b.t - a.t) * (a.outer + b.outer);
}

void PeWindow::push(double t, const Eigen::VectorXd& omega) {
  Sample s{t, omega * omega.transpose()};
  if (buffer_.empty()) {
    running_ = Eigen::MatrixXd::Zero(omega.size(), omega.size());
  } else {
    if (!(t > buffer_.back().t)) {
      throw ValidationError("PE window samples must be strictly time-ordered");
    }
    if (omega.size() != running_.rows()) {
      throw ValidationError("PE window: regressor size changed");
    }
    running_ += segment(buffer_.back(), s);
  }
  buffer_.push_back(std::move(s));
  const double start = t - window_;
  while (buffer_.size() > 2 && buffer_[1].t <= start) {
    running_ -= segment(buffer_[0], buffer_[1]);
    buffer_.pop_front();
  }
}

void PeWindow::clear() {
  buffer_.clear();
  running_.resize(0, 0);
}

double PeWindow::span() const {
  return buffer_.size() < 2 ? 0.0 : buffer_.back().t - buffer_.front().t;
}

Eigen::MatrixXd PeWindow::window_integral() const {
  if (span() < window_ * (1.0 - 1e-12)) {
    throw ValidationError("PE window does not yet span T0");
  }
  // Remove the part of the first segment that precedes t - T0.
  const Sample& a = buffer_[0];
  const Sample& b = buffer_[1];
  const double cut = buffer_.back().t - window_;
  if (cut <= a.t) {
    return running_;
  }
  const double frac = (cut - a.t) / (b.t - a.t);
  const Eigen::MatrixXd at_cut = a.outer + frac * (b.outer - a.outer);
  return running_ - 0.5 * (cut - a.t) * (a.outer + at_cut);
}

PeVerdict pe_check(const PeWindow& win) {
  PeVerdict v;
  if (win.samples() < 2 || win.span() < win.window() * (1.0 - 1e-12)) {
    v.status = PeStatus::kIndeterminate;
    v.min_eig_level = std::numeric_limits<double>::quiet_NaN();
    return v;
  }
  v.integral = win.window_integral();
  const double lmin =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(v.integral,
                                                     Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  v.min_eig_level = std::max(0.0, lmin) / win.window();
  v.status = lmin >= win.alpha0() * win.window() ? PeStatus::kExcited
                                                 : PeStatus::kNotExcited;
  return v;
}

// ---------------------------------------------------------------------------

double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const Eigen::MatrixXd& metric, const LyapunovWeights& w) {
  require_size(theta_err, metric.rows(), "lyapunov_value theta error");
  return 0.5 * w.error * e * e +
         0.5 * w.parameter * theta_err.dot(metric * theta_err);
}

double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const GradientGain& gain, const LyapunovWeights& w) {
  require_size(theta_err, gain.size(), "lyapunov_value theta error");
  return 0.5 * w.error * e * e +
         0.5 * w.parameter * theta_err.dot(gain.solve(theta_err));
}

double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const Covariance& cov, const LyapunovWeights& w) {
  require_size(theta_err, cov.size(), "lyapunov_value theta error");
  return 0.5 * w.error * e * e +
         0.5 * w.parameter * theta_err.dot(cov.solve(theta_err));
}

double rls_lyapunov_rate(const ScalarErrorModel& model, double e,
                         const Eigen::VectorXd& theta_err,
                         const Eigen::VectorXd& theta_dot,
                         const Eigen::VectorXd& omega, const Covariance& cov,
                         const LyapunovWeights& w) {
  const double eps = theta_err.dot(omega);
  const Eigen::VectorXd q_err = cov.solve(theta_err);
  return w.error * e * (-model.am * e + model.input_gain * eps) +
         w.parameter * q_err.dot(theta_dot) -
         0.5 * cov.beta() * w.parameter * theta_err.dot(q_err) +
         0.5 * w.parameter * eps * eps;
}

}  // namespace rlsmrac
