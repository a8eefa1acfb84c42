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
 * @file acc.hpp
 * @brief Adaptive cruise control with a gradient or RLS adaptive law.
 *
 * Following vehicle   v' = -a v + b u + d
 * Gap                 x_r' = v_l - v,   s_d = s0 + h v,   delta = x_r - s_d
 * Reference model     v_m = am / (s + am) (v_l + k delta)
 * Control             u = k1 v_r + k2 delta + k3,   v_r = v_l - v
 *
 * With ideal gains k1* = (am - a)/b, k2* = am k / b, k3* = (a v_l - d)/b
 * the speed error e = v - v_m obeys e' = -am e + b k~^T [v_r, delta, 1].
 *
 * Adaptive laws (Pr{} is the box projection):
 *   gradient             k_i' = Pr{-gamma_i e w_i},  w = [v_r, delta, 1]
 *   RLS, realizable      k'   = Pr{-diag(P) e phi},  phi = w / (s + am)
 *                        P'   = beta P - P phi phi^T P
 *   RLS, analysis        k'   = Pr{-P (e + eps/2) w},  eps = k~^T w
 *                        P'   = beta P - P w w^T P
 *
 * The analysis variant is the generic RLS law applied to the error
 * equation above; with it V = e^2/2 + (b/2) k~^T P^{-1} k~ is nonincreasing.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rlsmrac/adaptive_laws.hpp"
#include "rlsmrac/law_settings.hpp"

namespace rlsmrac {

inline constexpr double kGravity = 9.81;

struct VehicleModel {
  double a = 0.1;  ///< 1/s
  double b = 1.0;  ///< control effectiveness

  /// Reduced model from physical data:
  /// a = B / (m + I/R^2), b = 1 / (R (m + I/R^2)).
  static VehicleModel from_physical(double mass, double wheel_radius,
                                    double wheel_inertia, double damping);
  void validate() const;
};

struct ConstantDisturbance {
  double value = 0.0;
};
/// d = 0 before `time`, -g sin(slope) afterwards.
struct GradeStepDisturbance {
  double time = 0.0;
  double slope_deg = 0.0;
};
using DisturbanceProfile = std::variant<ConstantDisturbance, GradeStepDisturbance>;

double disturbance(const DisturbanceProfile& d, double t);

struct SpacingPolicy {
  double s0 = 5.0;  ///< m
  double h = 1.5;   ///< s
  double desired(double v) const { return s0 + h * v; }
  void validate() const;
};

struct AccRefModel {
  double am = 0.5;
  double k = 0.2;
  void validate() const;
};

struct ConstantLead {
  double speed = 20.0;
};
/// Linear from `from` to `to` over [start, end], flat outside.
struct RampLead {
  double from = 15.0;
  double to = 25.0;
  double start = 10.0;
  double end = 20.0;
};
/**
 * Level speeds[i] holds from times[i] on (speeds[0] before times[1]).
 * Level changes are blended linearly over `transition` seconds starting at
 * each switching time so that dv_l/dt stays bounded.
 */
struct PiecewiseLead {
  std::vector<double> times;
  std::vector<double> speeds;
  double transition = 2.0;
};
/// mean + amplitude sin(2 pi t / period)
struct SinusoidLead {
  double mean = 20.0;
  double amplitude = 2.0;
  double period = 40.0;
};
using LeadProfile = std::variant<ConstantLead, RampLead, PiecewiseLead, SinusoidLead>;

void validate_lead(const LeadProfile& lead);
double lead_profile(const LeadProfile& lead, double t);

struct IdealAccGains {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  Eigen::Vector3d vector() const { return {k1, k2, k3}; }
};

/// @throws ValidationError if b == 0.
IdealAccGains ideal_acc_gains(const VehicleModel& vm, const AccRefModel& rm,
                              double v_l, double d);

/**
 * @brief Seeded Gaussian source, bit-reproducible across platforms.
 *
 * Box-Muller over std::mt19937_64 (whose output sequence is fixed by the
 * standard), since std::normal_distribution is implementation-defined.
 */
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}
  double standard_normal();

 private:
  double uniform_open();
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// signal + sigma * N(0, 1); sigma == 0 returns the signal and draws nothing.
double inject_noise(double signal, double sigma, NoiseSource& rng);

struct AccProblem {
  VehicleModel vehicle;
  DisturbanceProfile disturbance_profile = ConstantDisturbance{};
  SpacingPolicy spacing;
  AccRefModel refmodel;
  LeadProfile lead = ConstantLead{};
  void validate() const;
};

struct AccState {
  double t = 0.0;
  double v = 0.0;
  double x_r = 0.0;
  double v_m = 0.0;
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();
};

/// Additive sensor noise held over one integration step.
struct AccMeasurementNoise {
  double v = 0.0;
  double x_r = 0.0;
};

/// Controller-side signals at one instant.
struct AccSignals {
  double v_l = 0.0;
  double d = 0.0;
  double s_d = 0.0;
  double v_r = 0.0;
  double delta = 0.0;
  double e = 0.0;
  double u = 0.0;
  Eigen::Vector3d w = Eigen::Vector3d::Zero();  ///< [v_r, delta, 1]
};

AccSignals acc_signals(const AccProblem& p, const AccState& s,
                       const AccMeasurementNoise& noise = {});

struct AccStepReport {
  bool projection_clamped = false;
  CovarianceEvent covariance;
};

/// One joint RK4 step of vehicle, gap, reference model, regressor filters
/// and gains under the gradient law.
AccStepReport acc_step_gradient(AccState& state, const AccProblem& p,
                                const Eigen::Vector3d& gamma,
                                const ProjectionBounds& bounds, double dt,
                                const AccMeasurementNoise& noise = {});

/// As acc_step_gradient for the RLS law; P is integrated in the same step
/// and then passed through Covariance::accept.
AccStepReport acc_step_rls(AccState& state, Covariance& cov,
                           const AccProblem& p, RlsMode mode, bool normalize,
                           const ProjectionBounds& bounds, double dt,
                           const AccMeasurementNoise& noise = {});

struct AccConfig {
  AccProblem problem;
  AdaptiveLaw law = AdaptiveLaw::kRls;
  RlsMode mode = RlsMode::kRealizable;
  Eigen::Vector3d gamma{50.0, 30.0, 40.0};
  RlsSettings rls;  ///< p0_diag empty means 100 I
  ProjectionBounds bounds = ProjectionBounds::uniform(-100.0, 100.0, 3);
  PeSettings pe;

  double v0 = 20.0;
  double x_r0 = 35.0;
  /// NaN means start the reference model at v0.
  double v_m0 = std::numeric_limits<double>::quiet_NaN();
  Eigen::Vector3d k0 = Eigen::Vector3d::Zero();

  double dt = 1e-3;
  double t_final = 60.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  double max_abs_signal = 1e6;
};

struct AccSample {
  double t = 0.0;
  double v_l = 0.0;
  double v = 0.0;
  double v_m = 0.0;
  double x_r = 0.0;
  double s_d = 0.0;
  double v_r = 0.0;    ///< true v_l - v
  double delta = 0.0;  ///< true x_r - s_d
  double e = 0.0;      ///< true v - v_m
  double u = 0.0;      ///< applied command
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  /// diag(P) for RLS, (gamma1, gamma2, gamma3) for gradient.
  Eigen::Vector3d gain_diag = Eigen::Vector3d::Zero();
  double pe_level = std::numeric_limits<double>::quiet_NaN();
  double lyapunov = std::numeric_limits<double>::quiet_NaN();
  bool clamp_flag = false;
};

class AccSimulation {
 public:
  explicit AccSimulation(AccConfig cfg);

  void step();
  bool done() const;
  double time() const { return state_.t; }
  std::int64_t step_index() const { return steps_; }
  const AccState& state() const { return state_; }
  const AccConfig& config() const { return cfg_; }
  const Covariance* covariance() const { return cov_ ? &*cov_ : nullptr; }

  AccSample sample() const;
  /// V = e^2/2 + sum b/(2 gamma_i) k~_i^2 (gradient) or
  /// e^2/2 + (b/2) k~^T P^{-1} k~ (RLS), k* from the current v_l and d.
  double lyapunov() const;
  Eigen::Vector3d gain_error() const;

  std::int64_t clamp_events() const { return cov_ ? cov_->clamp_events() : 0; }
  std::int64_t covariance_resets() const { return cov_ ? cov_->resets() : 0; }
  std::int64_t projection_clamps() const { return projection_clamps_; }

 private:
  Eigen::Vector3d law_regressor(const AccSignals& sig) const;

  AccConfig cfg_;
  AccState state_;
  std::optional<Covariance> cov_;
  NoiseSource noise_rng_;
  AccMeasurementNoise noise_;
  PeWindow pe_;
  std::int64_t steps_ = 0;
  std::int64_t projection_clamps_ = 0;
  bool last_clamp_ = false;

  void draw_noise();
};

struct AccMetrics {
  double rms_speed_error = 0.0;
  double rms_spacing_error = 0.0;
  double max_accel = 0.0;
  double max_jerk = 0.0;
  /// First t after which |v_r| < 0.1 m/s for the rest of the trace; NaN if
  /// the trace is too short or never settles.
  double settle_time = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kSettleBand = 0.1;

AccMetrics acc_metrics(std::span<const AccSample> trace);

struct AccRun {
  std::vector<AccSample> samples;  ///< one per step, t = 0 included
  AccMetrics metrics;
  double min_gap = 0.0;
  std::int64_t clamp_events = 0;
  std::int64_t covariance_resets = 0;
  std::int64_t projection_clamps = 0;
  bool gains_within_bounds = true;
};

AccRun simulate_acc(const AccConfig& cfg,
                    const std::function<void(const AccSample&)>& observer = {});

}  // namespace rlsmrac
