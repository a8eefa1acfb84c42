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

#include "rlsmrac/acc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"

namespace rlsmrac {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr Eigen::Index kV = 0;
constexpr Eigen::Index kXr = 1;
constexpr Eigen::Index kVm = 2;
constexpr Eigen::Index kK = 3;
constexpr Eigen::Index kPhi = 6;
constexpr Eigen::Index kP = 9;
constexpr Eigen::Index kBase = 9;

Eigen::VectorXd pack(const AccState& s, const Covariance* cov) {
  Eigen::VectorXd x(kBase + (cov ? 9 : 0));
  x(kV) = s.v;
  x(kXr) = s.x_r;
  x(kVm) = s.v_m;
  x.segment<3>(kK) = s.k;
  x.segment<3>(kPhi) = s.phi;
  if (cov) {
    x.segment<9>(kP) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(cov->P().data());
  }
  return x;
}

AccState unpack(const Eigen::VectorXd& x, double t) {
  AccState s;
  s.t = t;
  s.v = x(kV);
  s.x_r = x(kXr);
  s.v_m = x(kVm);
  s.k = x.segment<3>(kK);
  s.phi = x.segment<3>(kPhi);
  return s;
}

/// Plant, gap, reference model and filter derivatives; gains left to caller.
Eigen::VectorXd loop_rates(const AccProblem& p, const AccState& s,
                           const AccSignals& sig) {
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(kBase);
  dx(kV) = -p.vehicle.a * s.v + p.vehicle.b * sig.u + sig.d;
  dx(kXr) = sig.v_l - s.v;
  dx(kVm) = p.refmodel.am * (sig.v_l + p.refmodel.k * sig.delta - s.v_m);
  dx.segment<3>(kPhi) = -p.refmodel.am * s.phi + sig.w;
  return dx;
}

AccStepReport finish_step(AccState& state, Eigen::VectorXd next,
                          Covariance* cov, const ProjectionBounds& bounds,
                          double t_next) {
  AccStepReport rep;
  const ProjectionResult pr =
      project(next.segment<3>(kK), Eigen::VectorXd::Zero(3), bounds);
  if (pr.clamped) {
    rep.projection_clamped = true;
    next.segment<3>(kK) = pr.value;
  }
  if (cov) {
    const Eigen::Map<const Eigen::Matrix3d> P(next.data() + kP);
    rep.covariance = cov->accept(Eigen::MatrixXd(P));
  }
  state = unpack(next, t_next);
  return rep;
}

void check_bounds_size(const ProjectionBounds& bounds) {
  bounds.validate();
  if (bounds.lower.size() != 3) {
    throw ValidationError("acc gain bounds must have 3 entries");
  }
}

}  // namespace

VehicleModel VehicleModel::from_physical(double mass, double wheel_radius,
                                         double wheel_inertia, double damping) {
  if (!(mass > 0.0) || !(wheel_radius > 0.0) || !(wheel_inertia >= 0.0) ||
      !(damping > 0.0)) {
    throw ValidationError(
        "vehicle: mass, wheel radius and damping must be positive, inertia "
        "nonnegative");
  }
  const double m_eff = mass + wheel_inertia / (wheel_radius * wheel_radius);
  return {damping / m_eff, 1.0 / (wheel_radius * m_eff)};
}

void VehicleModel::validate() const {
  if (!(a > 0.0)) {
    throw ValidationError("vehicle.a must be positive");
  }
  if (!(b > 0.0)) {
    throw ValidationError("vehicle.b must be positive");
  }
}

double disturbance(const DisturbanceProfile& d, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantDisturbance& c) { return c.value; },
          [t](const GradeStepDisturbance& g) {
            if (t < g.time) {
              return 0.0;
            }
            return -kGravity * std::sin(g.slope_deg * std::numbers::pi / 180.0);
          },
      },
      d);
}

void SpacingPolicy::validate() const {
  if (!(s0 > 0.0)) {
    throw ValidationError("spacing.s0 must be positive");
  }
  if (!(h > 0.0)) {
    throw ValidationError("spacing.h must be positive");
  }
}

void AccRefModel::validate() const {
  if (!(am > 0.0)) {
    throw ValidationError("refmodel.am must be positive");
  }
  if (!(k > 0.0)) {
    throw ValidationError("refmodel.k must be positive");
  }
}

void validate_lead(const LeadProfile& lead) {
  std::visit(
      Overloaded{
          [](const ConstantLead&) {},
          [](const RampLead& r) {
            if (!(r.end > r.start)) {
              throw ValidationError("lead: ramp end must follow start");
            }
          },
          [](const PiecewiseLead& pw) {
            if (pw.times.empty() || pw.times.size() != pw.speeds.size()) {
              throw ValidationError(
                  "lead: piecewise times and speeds must be nonempty and of "
                  "equal length");
            }
            if (!std::is_sorted(pw.times.begin(), pw.times.end()) ||
                std::adjacent_find(pw.times.begin(), pw.times.end()) !=
                    pw.times.end()) {
              throw ValidationError("lead: piecewise times must be strictly increasing");
            }
            if (!(pw.transition > 0.0)) {
              throw ValidationError("lead: piecewise transition must be positive");
            }
            for (std::size_t i = 1; i < pw.times.size(); ++i) {
              if (pw.times[i] - pw.times[i - 1] < pw.transition) {
                throw ValidationError(
                    "lead: piecewise levels must last at least one transition");
              }
            }
          },
          [](const SinusoidLead& s) {
            if (!(s.period > 0.0)) {
              throw ValidationError("lead: sinusoid period must be positive");
            }
          },
      },
      lead);
}

double lead_profile(const LeadProfile& lead, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantLead& c) { return c.speed; },
          [t](const RampLead& r) {
            if (t <= r.start) {
              return r.from;
            }
            if (t >= r.end) {
              return r.to;
            }
            return r.from + (r.to - r.from) * (t - r.start) / (r.end - r.start);
          },
          [t](const PiecewiseLead& pw) {
            double v = pw.speeds.front();
            for (std::size_t i = 1; i < pw.times.size(); ++i) {
              const double t0 = pw.times[i];
              if (t <= t0) {
                break;
              }
              const double frac = std::min(1.0, (t - t0) / pw.transition);
              v = pw.speeds[i - 1] + frac * (pw.speeds[i] - pw.speeds[i - 1]);
            }
            return v;
          },
          [t](const SinusoidLead& s) {
            return s.mean +
                   s.amplitude * std::sin(2.0 * std::numbers::pi * t / s.period);
          },
      },
      lead);
}

IdealAccGains ideal_acc_gains(const VehicleModel& vm, const AccRefModel& rm,
                              double v_l, double d) {
  if (vm.b == 0.0) {
    throw ValidationError("ideal gains need b != 0");
  }
  return {(rm.am - vm.a) / vm.b, rm.am * rm.k / vm.b, (vm.a * v_l - d) / vm.b};
}

double NoiseSource::uniform_open() {
  // 53 random bits mapped into (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double NoiseSource::standard_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double inject_noise(double signal, double sigma, NoiseSource& rng) {
  if (!(sigma >= 0.0)) {
    throw ValidationError("noise sigma must be nonnegative");
  }
  if (sigma == 0.0) {
    return signal;
  }
  return signal + sigma * rng.standard_normal();
}

void AccProblem::validate() const {
  vehicle.validate();
  spacing.validate();
  refmodel.validate();
  validate_lead(lead);
}

AccSignals acc_signals(const AccProblem& p, const AccState& s,
                       const AccMeasurementNoise& noise) {
  AccSignals sig;
  sig.v_l = lead_profile(p.lead, s.t);
  sig.d = disturbance(p.disturbance_profile, s.t);
  const double v_meas = s.v + noise.v;
  const double x_r_meas = s.x_r + noise.x_r;
  sig.s_d = p.spacing.desired(v_meas);
  sig.v_r = sig.v_l - v_meas;
  sig.delta = x_r_meas - sig.s_d;
  sig.e = v_meas - s.v_m;
  sig.w = Eigen::Vector3d(sig.v_r, sig.delta, 1.0);
  sig.u = s.k.dot(sig.w);
  return sig;
}

AccStepReport acc_step_gradient(AccState& state, const AccProblem& p,
                                const Eigen::Vector3d& gamma,
                                const ProjectionBounds& bounds, double dt,
                                const AccMeasurementNoise& noise) {
  if (!(gamma.array() > 0.0).all()) {
    throw ValidationError("gradient gains must be positive");
  }
  check_bounds_size(bounds);
  auto deriv = [&](double t, const Eigen::VectorXd& x) {
    const AccState s = unpack(x, t);
    const AccSignals sig = acc_signals(p, s, noise);
    Eigen::VectorXd dx = loop_rates(p, s, sig);
    const Eigen::VectorXd raw = -(gamma.array() * (sig.e * sig.w).array()).matrix();
    dx.segment<3>(kK) = projected_rate(s.k, raw, bounds);
    return dx;
  };
  Eigen::VectorXd next = rk4_step(deriv, pack(state, nullptr), state.t, dt);
  return finish_step(state, std::move(next), nullptr, bounds, state.t + dt);
}

AccStepReport acc_step_rls(AccState& state, Covariance& cov,
                           const AccProblem& p, RlsMode mode, bool normalize,
                           const ProjectionBounds& bounds, double dt,
                           const AccMeasurementNoise& noise) {
  if (cov.size() != 3) {
    throw ValidationError("acc covariance must be 3x3");
  }
  check_bounds_size(bounds);
  const double beta = cov.beta();
  auto deriv = [&](double t, const Eigen::VectorXd& x) {
    const AccState s = unpack(x, t);
    const AccSignals sig = acc_signals(p, s, noise);
    Eigen::VectorXd dx(kBase + 9);
    dx.head(kBase) = loop_rates(p, s, sig);
    const Eigen::Map<const Eigen::MatrixXd> P(x.data() + kP, 3, 3);
    Eigen::VectorXd raw;
    Eigen::MatrixXd dP;
    if (mode == RlsMode::kAnalysis) {
      const Eigen::Vector3d k_star =
          ideal_acc_gains(p.vehicle, p.refmodel, sig.v_l, sig.d).vector();
      const Eigen::VectorXd w = sig.w;
      const double eps = rls_epsilon(mode, s.k - k_star, w);
      raw = rls_rate(sig.e, w, eps, P, 1, normalize);
      dP = covariance_rate(P, w, beta, normalize);
    } else {
      const Eigen::VectorXd phi = s.phi;
      const Eigen::MatrixXd diag_p = P.diagonal().asDiagonal();
      raw = rls_rate(sig.e, phi, 0.0, diag_p, 1, normalize);
      dP = covariance_rate(P, phi, beta, normalize);
    }
    dx.segment<3>(kK) = projected_rate(s.k, raw, bounds);
    dx.segment<9>(kP) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dP.data());
    return dx;
  };
  Eigen::VectorXd next = rk4_step(deriv, pack(state, &cov), state.t, dt);
  return finish_step(state, std::move(next), &cov, bounds, state.t + dt);
}

AccSimulation::AccSimulation(AccConfig cfg)
    : cfg_(std::move(cfg)),
      noise_rng_(cfg_.seed),
      pe_(cfg_.pe.window, cfg_.pe.alpha0) {
  cfg_.problem.validate();
  if (!(cfg_.dt > 0.0)) {
    throw ValidationError("sim.dt must be positive");
  }
  if (!(cfg_.t_final > cfg_.dt)) {
    throw ValidationError("sim.t_final must exceed sim.dt");
  }
  if (!(cfg_.noise_sigma >= 0.0)) {
    throw ValidationError("sim.noise_sigma must be nonnegative");
  }
  if (!(cfg_.x_r0 > 0.0)) {
    throw ValidationError("initial gap must be positive");
  }
  check_bounds_size(cfg_.bounds);
  if (!cfg_.bounds.contains(cfg_.k0)) {
    throw ValidationError("initial gains lie outside the projection bounds");
  }
  if (cfg_.law == AdaptiveLaw::kGradient) {
    if (!(cfg_.gamma.array() > 0.0).all()) {
      throw ValidationError("gradient gains must be positive");
    }
  } else {
    Eigen::VectorXd p0 = cfg_.rls.p0_diag;
    if (p0.size() == 0) {
      p0 = Eigen::VectorXd::Constant(3, 100.0);
    } else if (p0.size() == 1) {
      p0 = Eigen::VectorXd::Constant(3, p0(0));
    } else if (p0.size() != 3) {
      throw ValidationError("rls.p0 must have 1 or 3 entries");
    }
    cov_.emplace(p0.asDiagonal().toDenseMatrix(), cfg_.rls.beta,
                 cfg_.rls.rho_max);
  }

  state_.t = 0.0;
  state_.v = cfg_.v0;
  state_.x_r = cfg_.x_r0;
  state_.v_m = std::isnan(cfg_.v_m0) ? cfg_.v0 : cfg_.v_m0;
  state_.k = cfg_.k0;
  state_.phi.setZero();

  draw_noise();
  pe_.push(0.0, law_regressor(acc_signals(cfg_.problem, state_, noise_)));
}

void AccSimulation::draw_noise() {
  noise_.v = inject_noise(0.0, cfg_.noise_sigma, noise_rng_);
  noise_.x_r = inject_noise(0.0, cfg_.noise_sigma, noise_rng_);
}

Eigen::Vector3d AccSimulation::law_regressor(const AccSignals& sig) const {
  if (cfg_.law == AdaptiveLaw::kRls && cfg_.mode == RlsMode::kRealizable) {
    return state_.phi;
  }
  return sig.w;
}

void AccSimulation::step() {
  const double t_next = static_cast<double>(steps_ + 1) * cfg_.dt;
  AccStepReport rep;
  if (cov_) {
    rep = acc_step_rls(state_, *cov_, cfg_.problem, cfg_.mode,
                       cfg_.rls.normalize, cfg_.bounds, cfg_.dt, noise_);
  } else {
    rep = acc_step_gradient(state_, cfg_.problem, cfg_.gamma, cfg_.bounds,
                            cfg_.dt, noise_);
  }
  ++steps_;
  state_.t = t_next;
  if (rep.projection_clamped) {
    ++projection_clamps_;
  }
  last_clamp_ = rep.covariance.clamped || rep.covariance.reset;

  draw_noise();
  const AccSignals sig = acc_signals(cfg_.problem, state_, noise_);
  if (!(state_.x_r > 0.0)) {
    std::ostringstream os;
    os << "collision: gap x_r = " << state_.x_r << " at t = " << state_.t;
    throw SafetyViolation(os.str());
  }
  if (std::abs(state_.v) > cfg_.max_abs_signal ||
      std::abs(sig.u) > cfg_.max_abs_signal || !std::isfinite(sig.u)) {
    std::ostringstream os;
    os << "boundedness alarm at t = " << state_.t << ": v = " << state_.v
       << ", u = " << sig.u;
    throw NumericalHalt(os.str());
  }
  pe_.push(state_.t, law_regressor(sig));
}

bool AccSimulation::done() const {
  return state_.t >= cfg_.t_final - 0.5 * cfg_.dt;
}

Eigen::Vector3d AccSimulation::gain_error() const {
  const double v_l = lead_profile(cfg_.problem.lead, state_.t);
  const double d = disturbance(cfg_.problem.disturbance_profile, state_.t);
  return state_.k -
         ideal_acc_gains(cfg_.problem.vehicle, cfg_.problem.refmodel, v_l, d)
             .vector();
}

double AccSimulation::lyapunov() const {
  const double e = state_.v - state_.v_m;
  const Eigen::VectorXd err = gain_error();
  const LyapunovWeights w{1.0, cfg_.problem.vehicle.b};
  if (cov_) {
    return lyapunov_value(e, err, *cov_, w);
  }
  const Eigen::VectorXd inv_gamma = cfg_.gamma.cwiseInverse();
  return lyapunov_value(e, err, Eigen::MatrixXd(inv_gamma.asDiagonal()), w);
}

AccSample AccSimulation::sample() const {
  const AccSignals sig = acc_signals(cfg_.problem, state_, noise_);
  AccSample out;
  out.t = state_.t;
  out.v_l = sig.v_l;
  out.v = state_.v;
  out.v_m = state_.v_m;
  out.x_r = state_.x_r;
  out.s_d = cfg_.problem.spacing.desired(state_.v);
  out.v_r = sig.v_l - state_.v;
  out.delta = state_.x_r - out.s_d;
  out.e = state_.v - state_.v_m;
  out.u = sig.u;
  out.k = state_.k;
  out.gain_diag = cov_ ? Eigen::Vector3d(cov_->P().diagonal()) : cfg_.gamma;
  out.pe_level = pe_check(pe_).min_eig_level;
  if (cfg_.mode == RlsMode::kAnalysis) {
    out.lyapunov = lyapunov();
  }
  out.clamp_flag = last_clamp_;
  return out;
}

AccMetrics acc_metrics(std::span<const AccSample> trace) {
  if (trace.empty()) {
    throw ValidationError("acc_metrics: empty trace");
  }
  AccMetrics m;
  double sq_v = 0.0;
  double sq_d = 0.0;
  for (const auto& s : trace) {
    sq_v += s.v_r * s.v_r;
    sq_d += s.delta * s.delta;
  }
  const auto n = static_cast<double>(trace.size());
  m.rms_speed_error = std::sqrt(sq_v / n);
  m.rms_spacing_error = std::sqrt(sq_d / n);

  if (trace.size() < 3) {
    m.max_accel = std::numeric_limits<double>::quiet_NaN();
    m.max_jerk = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const double h = trace[i + 1].t - trace[i].t;
    m.max_accel = std::max(m.max_accel, std::abs(trace[i + 1].v - trace[i].v) / h);
  }
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    const double h = 0.5 * (trace[i + 1].t - trace[i - 1].t);
    const double second =
        (trace[i + 1].v - 2.0 * trace[i].v + trace[i - 1].v) / (h * h);
    m.max_jerk = std::max(m.max_jerk, std::abs(second));
  }

  std::size_t first_settled = 0;
  for (std::size_t i = trace.size(); i-- > 0;) {
    if (!(std::abs(trace[i].v_r) < kSettleBand)) {
      first_settled = i + 1;
      break;
    }
  }
  if (first_settled < trace.size()) {
    m.settle_time = trace[first_settled].t;
  }
  return m;
}

AccRun simulate_acc(const AccConfig& cfg,
                    const std::function<void(const AccSample&)>& observer) {
  AccSimulation sim(cfg);
  AccRun run;
  run.samples.reserve(static_cast<std::size_t>(cfg.t_final / cfg.dt) + 2);
  run.min_gap = std::numeric_limits<double>::infinity();
  auto record = [&] {
    run.samples.push_back(sim.sample());
    const AccSample& s = run.samples.back();
    run.min_gap = std::min(run.min_gap, s.x_r);
    if (!cfg.bounds.contains(s.k)) {
      run.gains_within_bounds = false;
    }
    if (observer) {
      observer(s);
    }
  };
  record();
  while (!sim.done()) {
    sim.step();
    record();
  }
  run.metrics = acc_metrics(run.samples);
  run.clamp_events = sim.clamp_events();
  run.covariance_resets = sim.covariance_resets();
  run.projection_clamps = sim.projection_clamps();
  return run;
}

}  // namespace rlsmrac
