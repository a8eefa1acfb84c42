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
 * @file mrac_sim.hpp
 * @brief Closed-loop direct MRAC for SISO plants of relative degree one.
 *
 * Plant and reference model run in their own canonical realizations; the
 * controller filters, the parameter vector and (for RLS) the covariance are
 * stacked into a single state and advanced together by one RK4 step, so
 * the adaptive law sees exactly the signals the plant produces.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rlsmrac/adaptive_laws.hpp"
#include "rlsmrac/law_settings.hpp"
#include "rlsmrac/matching.hpp"
#include "rlsmrac/reference_signal.hpp"
#include "rlsmrac/regressor.hpp"
#include "rlsmrac/transfer_function.hpp"

namespace rlsmrac {

struct MracConfig {
  TransferFunction plant{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
  TransferFunction refmodel{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
  /// Defaults to default_lambda0().
  std::optional<Polynomial> lambda0;
  ReferenceSpec reference = ConstantReference{1.0};

  AdaptiveLaw law = AdaptiveLaw::kRls;
  RlsMode mode = RlsMode::kRealizable;
  /// Diagonal of Gamma; a single entry is broadcast.
  Eigen::VectorXd gamma_diag = Eigen::VectorXd::Constant(1, 10.0);
  /// p0_diag with a single entry is broadcast.
  RlsSettings rls;
  std::optional<ProjectionBounds> projection;
  PeSettings pe;

  /// Empty means zero; start_at_ideal overrides.
  Eigen::VectorXd theta0;
  bool start_at_ideal = false;
  /// Plant initial state in canonical coordinates; empty means zero.
  Eigen::VectorXd plant_x0;

  double dt = 1e-3;
  double t_final = 50.0;
  /// Boundedness alarm on |y_p|, |u_p| and ||theta||.
  double max_abs_signal = 1e6;
  /// Also integrate e' = A_c e + B_c theta~^T omega as a second route to e1.
  bool track_composite_error = false;
};

struct MracSample {
  double t = 0.0;
  double r = 0.0;
  double y_p = 0.0;
  double y_m = 0.0;
  double e1 = 0.0;
  double u_p = 0.0;
  Eigen::VectorXd theta;
  /// diag(P) for RLS, diag(Gamma) for the gradient law.
  Eigen::VectorXd gain_diag;
  double theta_error_norm = 0.0;
  double pe_level = std::numeric_limits<double>::quiet_NaN();
  /// NaN unless analysis mode with a scalar certificate.
  double lyapunov = std::numeric_limits<double>::quiet_NaN();
  bool clamp_flag = false;
  double e1_composite = std::numeric_limits<double>::quiet_NaN();
};

/**
 * @brief Scalar Lyapunov certificate V = e1^2 / (2 k_m) + |rho*| theta~^T M theta~ / 2.
 *
 * Exists for first-order plants (n = 1, relative degree 1) with k_m > 0.
 * @throws Unsupported otherwise.
 */
LyapunovWeights scalar_certificate(const TransferFunction& plant,
                                   const TransferFunction& refmodel);

class MracSimulation {
 public:
  /// @throws AssumptionViolation, ValidationError
  explicit MracSimulation(MracConfig cfg);

  void step();
  bool done() const;
  double time() const { return t_; }
  std::int64_t step_index() const { return steps_; }

  MracSample sample() const;

  const MracConfig& config() const { return cfg_; }
  const MatchingSolution& ideal() const { return ideal_; }
  const Polynomial& lambda() const { return lambda_; }
  Eigen::VectorXd theta() const;
  Eigen::VectorXd theta_error() const { return theta() - ideal_.theta.flatten(); }
  const Covariance* covariance() const;
  bool has_lyapunov() const { return weights_.has_value(); }
  /// @throws Unsupported when no certificate is available.
  double lyapunov() const;
  ScalarErrorModel error_model() const;
  /// Current omega.
  Eigen::VectorXd regressor() const;
  /// theta' evaluated at the current state.
  Eigen::VectorXd theta_rate() const;

  std::int64_t clamp_events() const;
  std::int64_t covariance_resets() const;
  std::int64_t projection_clamps() const { return projection_clamps_; }

 private:
  struct Signals {
    double r, y_p, y_m, e1, u_p;
    Eigen::VectorXd omega;
  };
  Signals signals(double t, const Eigen::VectorXd& x) const;
  Eigen::VectorXd derivative(double t, const Eigen::VectorXd& x) const;
  Eigen::VectorXd theta_of(const Eigen::VectorXd& x) const;

  MracConfig cfg_;
  MatchingSolution ideal_;
  Polynomial lambda_;
  StateSpace plant_ss_;
  StateSpace model_ss_;
  StateSpace composite_;
  RegressorState filters_;
  std::optional<GradientGain> gain_;
  std::optional<Covariance> cov_;
  std::optional<LyapunovWeights> weights_;
  PeWindow pe_;

  int np_ = 0, nm_ = 0, nf_ = 0, m_ = 0, nc_ = 0;
  Eigen::Index off_m_ = 0, off_w1_ = 0, off_w2_ = 0, off_th_ = 0, off_p_ = 0,
               off_c_ = 0;
  Eigen::VectorXd x_;
  double t_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t projection_clamps_ = 0;
  bool last_clamp_ = false;
};

struct MracMetrics {
  double max_abs_e1 = 0.0;
  double rms_e1 = 0.0;
  /// mean |e1| over the final 10% of the run.
  double tail_mean_abs_e1 = 0.0;
  double max_abs_y = 0.0;
  double max_abs_u = 0.0;
  double max_theta_norm = 0.0;
  double final_theta_error = 0.0;
};

MracMetrics mrac_metrics(const std::vector<MracSample>& samples);

struct MracRun {
  std::vector<MracSample> samples;  ///< one per step, t = 0 included
  MracMetrics metrics;
  std::optional<int> richness;
  std::int64_t clamp_events = 0;
  std::int64_t covariance_resets = 0;
  std::int64_t projection_clamps = 0;
};

/// Runs to t_final, recording every step. @p observer, when set, sees each
/// sample as it is produced.
MracRun simulate_mrac(const MracConfig& cfg,
                      const std::function<void(const MracSample&)>& observer = {});

}  // namespace rlsmrac
