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

#include "rlsmrac/mrac_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"

namespace rlsmrac {

namespace {

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, int size, double fallback,
                          const char* what) {
  if (v.size() == 0) {
    return Eigen::VectorXd::Constant(size, fallback);
  }
  if (v.size() == 1) {
    return Eigen::VectorXd::Constant(size, v(0));
  }
  if (v.size() != size) {
    throw ValidationError(std::string(what) + ": expected 1 or " +
                          std::to_string(size) + " entries, got " +
                          std::to_string(v.size()));
  }
  return v;
}

}  // namespace

LyapunovWeights scalar_certificate(const TransferFunction& plant,
                                   const TransferFunction& refmodel) {
  if (plant.order() != 1 || plant.relative_degree() != 1 ||
      refmodel.order() != 1) {
    throw Unsupported(
        "Lyapunov certificate is only available in scalar form (first-order "
        "plant and reference model)");
  }
  if (!(refmodel.gain() > 0.0)) {
    throw Unsupported("scalar Lyapunov certificate needs k_m > 0");
  }
  return {1.0 / refmodel.gain(), std::abs(plant.gain() / refmodel.gain())};
}

MracSimulation::MracSimulation(MracConfig cfg)
    : cfg_(std::move(cfg)), pe_(cfg_.pe.window, cfg_.pe.alpha0) {
  if (!(cfg_.dt > 0.0)) {
    throw ValidationError("dt must be positive");
  }
  if (!(cfg_.t_final > cfg_.dt)) {
    throw ValidationError("t_final must exceed dt");
  }
  validate_reference(cfg_.reference);
  validate_problem(cfg_.plant, cfg_.refmodel).require_ok();
  if (cfg_.plant.relative_degree() != 1) {
    throw AssumptionViolation(
        "direct MRAC with these adaptive laws requires relative degree 1, got " +
        std::to_string(cfg_.plant.relative_degree()));
  }

  const int n = cfg_.plant.order();
  const Polynomial lambda0 =
      cfg_.lambda0 ? *cfg_.lambda0 : default_lambda0(cfg_.refmodel, n);
  lambda_ = build_lambda(cfg_.refmodel, lambda0, n);
  ideal_ = solve_matching(cfg_.plant, cfg_.refmodel, lambda_);
  plant_ss_ = canonical_realize(cfg_.plant);
  model_ss_ = canonical_realize(cfg_.refmodel);
  filters_ = make_regressor(lambda_);

  np_ = plant_ss_.order();
  nm_ = model_ss_.order();
  nf_ = filters_.filter_order();
  m_ = 2 * n;

  if (cfg_.law == AdaptiveLaw::kGradient) {
    gain_.emplace(GradientGain::diagonal(
        broadcast(cfg_.gamma_diag, m_, 10.0, "gradient.gamma")));
  } else {
    const Eigen::VectorXd p0 = broadcast(cfg_.rls.p0_diag, m_, 100.0, "rls.p0");
    cov_.emplace(p0.asDiagonal().toDenseMatrix(), cfg_.rls.beta,
                 cfg_.rls.rho_max);
  }

  if (cfg_.projection) {
    cfg_.projection->validate();
    if (cfg_.projection->lower.size() != m_) {
      throw ValidationError("projection bounds must have 2n = " +
                            std::to_string(m_) + " entries");
    }
  }

  Eigen::VectorXd theta0;
  if (cfg_.start_at_ideal) {
    theta0 = ideal_.theta.flatten();
  } else if (cfg_.theta0.size() == 0) {
    theta0 = Eigen::VectorXd::Zero(m_);
  } else if (cfg_.theta0.size() == m_) {
    theta0 = cfg_.theta0;
  } else {
    throw ValidationError("theta(0) must have 2n = " + std::to_string(m_) +
                          " entries");
  }
  if (cfg_.projection && !cfg_.projection->contains(theta0)) {
    throw ValidationError("theta(0) lies outside the projection bounds");
  }

  Eigen::VectorXd xp0 = Eigen::VectorXd::Zero(np_);
  if (cfg_.plant_x0.size() != 0) {
    if (cfg_.plant_x0.size() != np_) {
      throw ValidationError("plant x0 must have " + std::to_string(np_) +
                            " entries");
    }
    xp0 = cfg_.plant_x0;
  }

  if (cfg_.mode == RlsMode::kAnalysis && n == 1 && cfg_.refmodel.gain() > 0.0) {
    weights_ = scalar_certificate(cfg_.plant, cfg_.refmodel);
  }

  if (cfg_.track_composite_error) {
    composite_ = composite_error_system(cfg_.plant, ideal_.theta, lambda_);
    nc_ = composite_.order();
  }

  off_m_ = np_;
  off_w1_ = off_m_ + nm_;
  off_w2_ = off_w1_ + nf_;
  off_th_ = off_w2_ + nf_;
  off_p_ = off_th_ + m_;
  const Eigen::Index np_cov = cov_ ? m_ * m_ : 0;
  off_c_ = off_p_ + np_cov;

  x_ = Eigen::VectorXd::Zero(off_c_ + nc_);
  x_.head(np_) = xp0;
  x_.segment(off_th_, m_) = theta0;
  if (cov_) {
    x_.segment(off_p_, np_cov) =
        Eigen::Map<const Eigen::VectorXd>(cov_->P().data(), np_cov);
  }
  if (nc_ > 0) {
    x_.segment(off_c_, np_) = xp0;
  }

  pe_.push(t_, signals(t_, x_).omega);
}

MracSimulation::Signals MracSimulation::signals(double t,
                                                const Eigen::VectorXd& x) const {
  Signals s;
  s.r = reference_signal(cfg_.reference, t);
  s.y_p = plant_ss_.C.dot(x.head(np_));
  s.y_m = model_ss_.C.dot(x.segment(off_m_, nm_));
  s.e1 = s.y_p - s.y_m;
  s.omega.resize(m_);
  s.omega << x.segment(off_w1_, nf_), x.segment(off_w2_, nf_), s.y_p, s.r;
  s.u_p = x.segment(off_th_, m_).dot(s.omega);
  return s;
}

Eigen::VectorXd MracSimulation::theta_of(const Eigen::VectorXd& x) const {
  return x.segment(off_th_, m_);
}

Eigen::VectorXd MracSimulation::derivative(double t,
                                           const Eigen::VectorXd& x) const {
  const Signals s = signals(t, x);
  Eigen::VectorXd dx(x.size());

  dx.head(np_) = plant_ss_.A * x.head(np_) + plant_ss_.B * s.u_p;
  dx.segment(off_m_, nm_) =
      model_ss_.A * x.segment(off_m_, nm_) + model_ss_.B * s.r;
  if (nf_ > 0) {
    dx.segment(off_w1_, nf_) =
        filters_.F * x.segment(off_w1_, nf_) + filters_.g * s.u_p;
    dx.segment(off_w2_, nf_) =
        filters_.F * x.segment(off_w2_, nf_) + filters_.g * s.y_p;
  }

  const Eigen::VectorXd theta = theta_of(x);
  const Eigen::VectorXd theta_err = theta - ideal_.theta.flatten();
  Eigen::VectorXd theta_dot;
  if (gain_) {
    theta_dot = gradient_rate(s.e1, s.omega, *gain_, ideal_.sign_rho);
  } else {
    const Eigen::Map<const Eigen::MatrixXd> P(x.data() + off_p_, m_, m_);
    const double eps = rls_epsilon(cfg_.mode, theta_err, s.omega);
    theta_dot = rls_rate(s.e1, s.omega, eps, P, ideal_.sign_rho,
                         cfg_.rls.normalize);
    const Eigen::MatrixXd dP =
        covariance_rate(P, s.omega, cfg_.rls.beta, cfg_.rls.normalize);
    dx.segment(off_p_, m_ * m_) =
        Eigen::Map<const Eigen::VectorXd>(dP.data(), m_ * m_);
  }
  if (cfg_.projection) {
    theta_dot = projected_rate(theta, theta_dot, *cfg_.projection);
  }
  dx.segment(off_th_, m_) = theta_dot;

  if (nc_ > 0) {
    dx.segment(off_c_, nc_) = composite_.A * x.segment(off_c_, nc_) +
                              composite_.B * theta_err.dot(s.omega);
  }
  return dx;
}

void MracSimulation::step() {
  Eigen::VectorXd next = rk4_step(
      [this](double t, const Eigen::VectorXd& x) { return derivative(t, x); },
      x_, t_, cfg_.dt);

  if (cfg_.projection) {
    const ProjectionResult pr =
        project(next.segment(off_th_, m_),
                Eigen::VectorXd::Zero(m_), *cfg_.projection);
    if (pr.clamped) {
      ++projection_clamps_;
      next.segment(off_th_, m_) = pr.value;
    }
  }
  last_clamp_ = false;
  if (cov_) {
    const Eigen::Map<const Eigen::MatrixXd> P(next.data() + off_p_, m_, m_);
    const CovarianceEvent ev = cov_->accept(P);
    last_clamp_ = ev.clamped || ev.reset;
    next.segment(off_p_, m_ * m_) =
        Eigen::Map<const Eigen::VectorXd>(cov_->P().data(), m_ * m_);
  }

  x_ = std::move(next);
  ++steps_;
  t_ = static_cast<double>(steps_) * cfg_.dt;

  const Signals s = signals(t_, x_);
  const double theta_norm = theta_of(x_).norm();
  if (std::abs(s.y_p) > cfg_.max_abs_signal ||
      std::abs(s.u_p) > cfg_.max_abs_signal ||
      theta_norm > cfg_.max_abs_signal || !std::isfinite(s.u_p)) {
    std::ostringstream os;
    os << "boundedness alarm at step " << steps_ << " (t = " << t_
       << "): y_p = " << s.y_p << ", u_p = " << s.u_p
       << ", |theta| = " << theta_norm;
    throw NumericalHalt(os.str());
  }
  pe_.push(t_, s.omega);
}

bool MracSimulation::done() const {
  return t_ >= cfg_.t_final - 0.5 * cfg_.dt;
}

Eigen::VectorXd MracSimulation::theta() const { return theta_of(x_); }

const Covariance* MracSimulation::covariance() const {
  return cov_ ? &*cov_ : nullptr;
}

double MracSimulation::lyapunov() const {
  if (!weights_) {
    throw Unsupported("no Lyapunov certificate for this configuration");
  }
  const Signals s = signals(t_, x_);
  const Eigen::VectorXd err = theta_error();
  return gain_ ? lyapunov_value(s.e1, err, *gain_, *weights_)
               : lyapunov_value(s.e1, err, *cov_, *weights_);
}

ScalarErrorModel MracSimulation::error_model() const {
  if (cfg_.plant.order() != 1) {
    throw Unsupported("scalar error model needs a first-order plant");
  }
  return {cfg_.refmodel.den().coeff_of_power(0), cfg_.plant.gain()};
}

Eigen::VectorXd MracSimulation::regressor() const {
  return signals(t_, x_).omega;
}

Eigen::VectorXd MracSimulation::theta_rate() const {
  return derivative(t_, x_).segment(off_th_, m_);
}

std::int64_t MracSimulation::clamp_events() const {
  return cov_ ? cov_->clamp_events() : 0;
}

std::int64_t MracSimulation::covariance_resets() const {
  return cov_ ? cov_->resets() : 0;
}

MracSample MracSimulation::sample() const {
  const Signals s = signals(t_, x_);
  MracSample out;
  out.t = t_;
  out.r = s.r;
  out.y_p = s.y_p;
  out.y_m = s.y_m;
  out.e1 = s.e1;
  out.u_p = s.u_p;
  out.theta = theta();
  out.gain_diag = gain_ ? Eigen::VectorXd(gain_->matrix().diagonal())
                        : Eigen::VectorXd(cov_->P().diagonal());
  out.theta_error_norm = theta_error().norm();
  const PeVerdict pv = pe_check(pe_);
  out.pe_level = pv.min_eig_level;
  if (weights_) {
    out.lyapunov = lyapunov();
  }
  out.clamp_flag = last_clamp_;
  if (nc_ > 0) {
    out.e1_composite = composite_.C.dot(x_.segment(off_c_, nc_));
  }
  return out;
}

MracMetrics mrac_metrics(const std::vector<MracSample>& samples) {
  MracMetrics m;
  if (samples.empty()) {
    return m;
  }
  double sq = 0.0;
  for (const auto& s : samples) {
    m.max_abs_e1 = std::max(m.max_abs_e1, std::abs(s.e1));
    m.max_abs_y = std::max(m.max_abs_y, std::abs(s.y_p));
    m.max_abs_u = std::max(m.max_abs_u, std::abs(s.u_p));
    m.max_theta_norm = std::max(m.max_theta_norm, s.theta.norm());
    sq += s.e1 * s.e1;
  }
  m.rms_e1 = std::sqrt(sq / static_cast<double>(samples.size()));
  const std::size_t tail_start = samples.size() - std::max<std::size_t>(1, samples.size() / 10);
  double tail = 0.0;
  for (std::size_t i = tail_start; i < samples.size(); ++i) {
    tail += std::abs(samples[i].e1);
  }
  m.tail_mean_abs_e1 = tail / static_cast<double>(samples.size() - tail_start);
  m.final_theta_error = samples.back().theta_error_norm;
  return m;
}

MracRun simulate_mrac(const MracConfig& cfg,
                      const std::function<void(const MracSample&)>& observer) {
  MracSimulation sim(cfg);
  MracRun run;
  run.richness = richness_order(cfg.reference);
  run.samples.reserve(static_cast<std::size_t>(cfg.t_final / cfg.dt) + 2);
  auto record = [&] {
    run.samples.push_back(sim.sample());
    if (observer) {
      observer(run.samples.back());
    }
  };
  record();
  while (!sim.done()) {
    sim.step();
    record();
  }
  run.metrics = mrac_metrics(run.samples);
  run.clamp_events = sim.clamp_events();
  run.covariance_resets = sim.covariance_resets();
  run.projection_clamps = sim.projection_clamps();
  return run;
}

}  // namespace rlsmrac
