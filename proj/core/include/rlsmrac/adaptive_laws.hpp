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

/**
 * @file adaptive_laws.hpp
 * @brief Parameter update laws for direct MRAC.
 *
 * Two laws share one structure and differ only in the adaptation gain:
 *
 *   gradient:  theta' = -Gamma e1 omega sgn(rho*)             (Gamma constant)
 *   RLS:       theta' = -P (e1 sgn(rho*) + eps/2) omega
 *              P'     = beta P - P omega omega^T P
 *
 * The RLS law is certified by V = e^T P_c e / 2 + |rho*| theta~^T P^{-1} theta~ / 2.
 * Differentiating P^{-1} contributes +|rho*| eps^2 / 2 with eps = theta~^T omega,
 * which the eps term of the update cancels, leaving
 * V' = -e^T q q^T e / 2 - nu e^T L e / 2 - beta |rho*| theta~^T P^{-1} theta~ / 2.
 *
 * eps needs theta*, so it is only available in RlsMode::kAnalysis; the
 * realizable law drops it.
 *
 * Every *_rate function is a pure right-hand side so that simulations can
 * integrate the full closed loop in one RK4 step. The *_update / *_step
 * functions advance a single law with its inputs held over the step.
 */

#pragma once

#include <cstdint>
#include <deque>

#include <Eigen/Dense>

namespace rlsmrac {

enum class RlsMode {
  kRealizable,  ///< eps term dropped; needs no knowledge of theta*
  kAnalysis,    ///< eps = theta~^T omega from the known theta*
};

/// Constant symmetric positive-definite adaptation gain Gamma.
class GradientGain {
 public:
  /// @throws ValidationError unless @p gamma is symmetric positive definite.
  explicit GradientGain(Eigen::MatrixXd gamma);
  static GradientGain diagonal(const Eigen::VectorXd& entries);
  static GradientGain scalar(double gamma, int size);

  const Eigen::MatrixXd& matrix() const { return gamma_; }
  int size() const { return static_cast<int>(gamma_.rows()); }
  /// Gamma^{-1} x
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd gamma_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct CovarianceEvent {
  bool clamped = false;  ///< largest eigenvalue exceeded rho_max, P rescaled
  bool reset = false;    ///< positive definiteness lost, P restored to P(0)
};

/**
 * @brief Time-varying RLS gain P(t) with forgetting factor beta.
 *
 * After each accepted step P is re-symmetrized, rescaled uniformly when
 * lambda_max(P) > rho_max, and checked by Cholesky; a failed factorization
 * restores P(0). Invariant: eigenvalues in (0, rho_max].
 */
class Covariance {
 public:
  static constexpr double kDefaultRhoMax = 1e4;

  /// @throws ValidationError unless p0 is SPD, beta >= 0 and
  ///         rho_max >= lambda_max(p0).
  Covariance(Eigen::MatrixXd p0, double beta,
             double rho_max = kDefaultRhoMax);

  const Eigen::MatrixXd& P() const { return p_; }
  const Eigen::MatrixXd& initial() const { return p0_; }
  double beta() const { return beta_; }
  double rho_max() const { return rho_max_; }
  int size() const { return static_cast<int>(p_.rows()); }

  /// Installs a freshly integrated P after symmetrize / cap / SPD check.
  CovarianceEvent accept(const Eigen::MatrixXd& candidate);

  /// P^{-1} x via Cholesky.
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd inverse() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  std::int64_t clamp_events() const { return clamp_events_; }
  std::int64_t resets() const { return resets_; }

 private:
  Eigen::MatrixXd p0_;
  Eigen::MatrixXd p_;
  double beta_;
  double rho_max_;
  std::int64_t clamp_events_ = 0;
  std::int64_t resets_ = 0;
};

/// 1 + omega^T omega when normalizing, else 1.
double normalization(const Eigen::VectorXd& omega, bool normalize);

/// -Gamma e1 omega sgn(rho*)
Eigen::VectorXd gradient_rate(double e1, const Eigen::VectorXd& omega,
                              const GradientGain& gain, int sign_rho);

/// beta P - P omega omega^T P (divided by m_s^2 when normalizing)
Eigen::MatrixXd covariance_rate(const Eigen::MatrixXd& P,
                                const Eigen::VectorXd& omega, double beta,
                                bool normalize = false);

/// -P (e1 sgn(rho*) + eps / 2) omega (divided by m_s^2 when normalizing)
Eigen::VectorXd rls_rate(double e1, const Eigen::VectorXd& omega, double eps,
                         const Eigen::MatrixXd& P, int sign_rho,
                         bool normalize = false);

/// eps = theta~^T omega in analysis mode, 0 in realizable mode.
double rls_epsilon(RlsMode mode, const Eigen::VectorXd& theta_err,
                   const Eigen::VectorXd& omega);

/// Dual of the covariance flow: Q' = -beta Q + omega omega^T, Q = P^{-1}.
Eigen::MatrixXd dual_q_rate(const Eigen::MatrixXd& Q,
                            const Eigen::VectorXd& omega, double beta);

Eigen::VectorXd gradient_update(const Eigen::VectorXd& theta, double e1,
                                const Eigen::VectorXd& omega,
                                const GradientGain& gain, int sign_rho,
                                double dt);

/// RK4 step of P' with omega held, followed by Covariance::accept.
CovarianceEvent covariance_update(Covariance& cov, const Eigen::VectorXd& omega,
                                  double dt, bool normalize = false);

/// RK4 step of the RLS parameter law with P and omega held.
Eigen::VectorXd rls_update(const Eigen::VectorXd& theta, double e1,
                           const Eigen::VectorXd& omega, double eps,
                           const Covariance& cov, int sign_rho, double dt,
                           bool normalize = false);

Eigen::MatrixXd dual_q_step(const Eigen::MatrixXd& Q,
                            const Eigen::VectorXd& omega, double beta,
                            double dt);

// ---------------------------------------------------------------------------
// Projection onto a box.

struct ProjectionBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// @throws ValidationError unless sizes agree and lower < upper.
  void validate() const;
  bool contains(const Eigen::VectorXd& v) const;
  static ProjectionBounds uniform(double lo, double hi, int size);
};

struct ProjectionResult {
  Eigen::VectorXd value;       ///< clamped into the box
  Eigen::VectorXd derivative;  ///< outward components removed
  bool clamped = false;        ///< value had left the box
};

/**
 * @brief Pr{.}: zero each derivative component that would push a value
 * sitting on (or past) its bound further out. Inward motion is untouched.
 */
ProjectionResult project(const Eigen::VectorXd& value,
                         const Eigen::VectorXd& derivative,
                         const ProjectionBounds& bounds);

/// Derivative part of project() without the clamp, for use inside RK4 stages.
Eigen::VectorXd projected_rate(const Eigen::VectorXd& value,
                               const Eigen::VectorXd& derivative,
                               const ProjectionBounds& bounds);

// ---------------------------------------------------------------------------
// Persistent excitation monitor.

/**
 * @brief Sliding record of omega(t) for the excitation test
 *
 *   integral_{t-T0}^{t} omega omega^T dtau >= alpha0 T0 I.
 *
 * The trapezoidal integral is maintained incrementally; samples older than
 * the window are dropped as new ones arrive.
 */
class PeWindow {
 public:
  PeWindow(double window, double alpha0);

  void push(double t, const Eigen::VectorXd& omega);
  void clear();

  double window() const { return window_; }
  double alpha0() const { return alpha0_; }
  /// Time covered by the stored samples.
  double span() const;
  std::size_t samples() const { return buffer_.size(); }

  /// Trapezoidal integral over exactly the trailing window.
  /// Requires span() >= window().
  Eigen::MatrixXd window_integral() const;

 private:
  struct Sample {
    double t;
    Eigen::MatrixXd outer;
  };
  static Eigen::MatrixXd segment(const Sample& a, const Sample& b);

  double window_;
  double alpha0_;
  std::deque<Sample> buffer_;
  Eigen::MatrixXd running_;
};

enum class PeStatus { kIndeterminate, kExcited, kNotExcited };

struct PeVerdict {
  PeStatus status = PeStatus::kIndeterminate;
  /// lambda_min of the window integral divided by T0 (NaN if indeterminate).
  double min_eig_level = 0.0;
  Eigen::MatrixXd integral;

  bool is_pe() const { return status == PeStatus::kExcited; }
};

PeVerdict pe_check(const PeWindow& win);

// ---------------------------------------------------------------------------
// Lyapunov-like functions (scalar error certificate).

struct LyapunovWeights {
  double error = 1.0;      ///< P_c for a scalar tracking error
  double parameter = 1.0;  ///< |rho*| (or b in the cruise-control form)
};

/// V = w_e e^2 / 2 + w_p theta~^T M theta~ / 2 for an explicit metric M.
double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const Eigen::MatrixXd& metric,
                      const LyapunovWeights& w);
/// Gradient form, M = Gamma^{-1}.
double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const GradientGain& gain, const LyapunovWeights& w);
/// RLS form, M = P^{-1}.
double lyapunov_value(double e, const Eigen::VectorXd& theta_err,
                      const Covariance& cov, const LyapunovWeights& w);

/// Scalar error dynamics e' = -am e + input_gain * theta~^T omega.
struct ScalarErrorModel {
  double am = 1.0;
  double input_gain = 1.0;
};

/**
 * @brief Analytic V' of the RLS Lyapunov-like function along any parameter
 * velocity theta_dot:
 *
 *   V' = w_e e (-am e + g eps) + w_p theta~^T P^{-1} theta_dot
 *        - beta w_p theta~^T P^{-1} theta~ / 2 + w_p eps^2 / 2.
 */
double rls_lyapunov_rate(const ScalarErrorModel& model, double e,
                         const Eigen::VectorXd& theta_err,
                         const Eigen::VectorXd& theta_dot,
                         const Eigen::VectorXd& omega, const Covariance& cov,
                         const LyapunovWeights& w);

}  // namespace rlsmrac
