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
 * @file acceptance.cpp
 * @brief One PASS/FAIL line per acceptance criterion; exit status 1 if any
 *        criterion fails.
 */

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../test_support.hpp"
#include "rlsmrac/acc.hpp"
#include "rlsmrac/adaptive_laws.hpp"
#include "rlsmrac/harness.hpp"
#include "rlsmrac/matching.hpp"
#include "rlsmrac/mrac_sim.hpp"
#include "rlsmrac/scenario.hpp"

namespace {

using namespace rlsmrac;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kPresets = RLSMRAC_TEST_PRESET_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s  %-26s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += o.pass ? 0 : 1;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome matching_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> freq(0.05, 20.0);
  double worst_coeff = 0.0;
  double worst_freq = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pair = testing::random_matching_pair(rng, true);
    const MatchingSolution sol =
        solve_matching(pair.plant, pair.refmodel, pair.lambda);
    worst_coeff = std::max(
        worst_coeff,
        tf_mismatch(closed_loop_tf(pair.plant, sol.theta, pair.lambda), pair.refmodel));
    for (int k = 0; k < 10; ++k) {
      const std::complex<double> s(0.0, freq(rng));
      const auto want = pair.refmodel.evaluate(s);
      const auto got = testing::closed_loop_response(pair.plant, sol.theta, pair.lambda, s);
      worst_freq = std::max(worst_freq, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst_coeff <= 1e-8 && worst_freq <= 1e-8 && secs < 5.0,
          fmt("coeff err %.2e", worst_coeff) + fmt(", freq err %.2e", worst_freq) +
              " over 100 plants (tol 1e-8)"};
}

// V = e^2/2 + (b/2) k~' M k~ with k* from the closed-form ideal gains.
double acc_lyapunov_oracle(const AccSimulation& sim) {
  const AccConfig& cfg = sim.config();
  const VehicleModel& vm = cfg.problem.vehicle;
  const AccRefModel& rm = cfg.problem.refmodel;
  const double v_l = lead_profile(cfg.problem.lead, sim.time());
  const double d = disturbance(cfg.problem.disturbance_profile, sim.time());
  const Eigen::Vector3d k_star((rm.am - vm.a) / vm.b, rm.am * rm.k / vm.b,
                               (vm.a * v_l - d) / vm.b);
  const Eigen::Vector3d err = sim.state().k - k_star;
  const double e = sim.state().v - sim.state().v_m;
  const Eigen::Matrix3d metric =
      sim.covariance() ? Eigen::Matrix3d(sim.covariance()->P().inverse())
                       : Eigen::Matrix3d(cfg.gamma.cwiseInverse().asDiagonal());
  return 0.5 * e * e + 0.5 * vm.b * err.dot(metric * err);
}

Outcome acc_lyapunov() {
  const auto t0 = Clock::now();
  const Scenario base = load_scenario(kPresets / "acc_lyapunov.json");
  std::string detail;
  bool ok = true;
  for (AdaptiveLaw law : {AdaptiveLaw::kGradient, AdaptiveLaw::kRls}) {
    AccConfig cfg = base.acc;
    cfg.law = law;
    cfg.mode = RlsMode::kAnalysis;
    cfg.noise_sigma = 0.0;
    AccSimulation sim(cfg);
    double prev = acc_lyapunov_oracle(sim);
    const double tol = 1e-8 * std::max(1.0, prev);
    double worst = -1e300;
    while (!sim.done()) {
      sim.step();
      const double v = acc_lyapunov_oracle(sim);
      worst = std::max(worst, v - prev);
      prev = v;
    }
    ok = ok && worst <= tol && sim.step_index() == 60000;
    detail += std::string(to_string(law)) + fmt(" max dV %.2e", worst) + fmt(" (tol %.1e); ", tol);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 30.0, detail + "60 s at dt 1e-3"};
}

Outcome covariance_duality() {
  Covariance cov(Eigen::Matrix2d::Identity(), 0.95);
  Eigen::MatrixXd Q = Eigen::Matrix2d::Identity();
  const double dt = 1e-3;
  double worst = 0.0;
  bool clean = true;
  for (int i = 0; i < 10000; ++i) {
    const double t = i * dt;
    const Eigen::Vector2d omega(std::sin(t), std::cos(t));
    const CovarianceEvent ev = covariance_update(cov, omega, dt);
    clean = clean && !ev.clamped && !ev.reset;
    Q = dual_q_step(Q, omega, 0.95, dt);
    worst = std::max(worst,
                     (cov.P() * Q - Eigen::MatrixXd::Identity(2, 2)).lpNorm<Eigen::Infinity>());
  }
  return {clean && worst <= 1e-6, fmt("max |PQ - I| = %.2e over 10 s (tol 1e-6)", worst)};
}

Outcome riccati() {
  Covariance cov(Eigen::MatrixXd::Ones(1, 1), 0.0);
  const Eigen::VectorXd omega = Eigen::VectorXd::Ones(1);
  const double dt = 1e-3;
  int step = 0;
  double worst = 0.0;
  for (double t_check : {1.0, 5.0, 10.0}) {
    while (step * dt < t_check - 1e-12) {
      covariance_update(cov, omega, dt);
      ++step;
    }
    worst = std::max(worst, std::abs(cov.P()(0, 0) - 1.0 / (1.0 + t_check)));
  }
  return {worst <= 1e-6, fmt("max |P - 1/(1+t)| = %.2e at t = 1, 5, 10 (tol 1e-6)", worst)};
}

Outcome pe_detector() {
  const double window = 2.0 * std::numbers::pi;
  PeWindow sinusoid(window, 1e-3);
  PeWindow constant(window, 1e-3);
  const int steps = 20000;
  const double dt = window / steps;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    sinusoid.push(t, Eigen::Vector2d(std::sin(t), std::cos(t)));
    constant.push(t, Eigen::Vector2d(1.0, 0.5));
  }
  const PeVerdict v = pe_check(sinusoid);
  const Eigen::Matrix2d expected = Eigen::Matrix2d::Identity() * std::numbers::pi;
  const double rel = v.integral.size() == 4
                         ? (v.integral - expected).norm() / expected.norm()
                         : 1.0;
  const PeVerdict c = pe_check(constant);
  const bool ok = rel <= 1e-3 && v.is_pe() && c.status == PeStatus::kNotExcited;
  return {ok, fmt("window integral rel err %.2e (tol 1e-3)", rel) +
                  (c.is_pe() ? ", constant omega flagged PE" : ", constant omega not PE")};
}

Outcome convergence_under_pe() {
  const Scenario s = load_scenario(kPresets / "mrac_first_order.json");
  MracConfig cfg = s.mrac;
  cfg.law = AdaptiveLaw::kRls;
  const MracRun run = simulate_mrac(cfg);
  // Least-squares fit of log ||theta~|| against t over [10, 50].
  double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& smp : run.samples) {
    if (smp.t < 10.0 || smp.t > 50.0 || !(smp.theta_error_norm > 0.0)) {
      continue;
    }
    const double y = std::log(smp.theta_error_norm);
    n += 1.0;
    sx += smp.t;
    sy += y;
    sxx += smp.t * smp.t;
    sxy += smp.t * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double final_err = run.samples.back().theta_error_norm;
  return {n > 100.0 && slope < 0.0 && final_err < 0.05,
          fmt("log-linear slope %.3f /s over [10, 50] s", slope) +
              fmt(", final |theta~| = %.2e (tol 0.05)", final_err)};
}

Outcome compare_ordering() {
  const auto t0 = Clock::now();
  const Scenario s = load_scenario(kPresets / "acc_paper_compare.json");
  CompareOptions opts;
  opts.laws = {AdaptiveLaw::kGradient, AdaptiveLaw::kRls};
  opts.seeds = parse_seed_list("1..10");
  const CompareReport rep = compare(s, opts);
  double g = 0.0;
  double r = 0.0;
  for (const auto& a : rep.aggregates) {
    (a.law == AdaptiveLaw::kRls ? r : g) = a.mean;
  }
  const double secs = seconds_since(t0);
  return {rep.rls_wins >= 7 && rep.seeds_compared == 10 && secs < 300.0,
          "RLS <= gradient rms_speed_error in " + std::to_string(rep.rls_wins) + "/" +
              std::to_string(rep.seeds_compared) + " seeds (need 7)" +
              fmt(", mean gradient %.4f", g) + fmt(" rls %.4f", r)};
}

Outcome boundedness_and_safety() {
  int checked = 0;
  std::string bad;
  for (const auto& preset : list_presets()) {
    const Scenario s = load_scenario(preset.path);
    bool finite = true;
    bool inside = true;
    bool gap = true;
    try {
      if (s.mode == ScenarioMode::kAcc) {
        simulate_acc(s.acc, [&](const AccSample& x) {
          finite = finite && std::isfinite(x.v) && std::isfinite(x.u) &&
                   std::isfinite(x.x_r) && x.k.allFinite();
          inside = inside && s.acc.bounds.contains(x.k);
          gap = gap && x.x_r > 0.0;
        });
      } else {
        simulate_mrac(s.mrac, [&](const MracSample& x) {
          finite = finite && std::isfinite(x.y_p) && std::isfinite(x.u_p) &&
                   x.theta.allFinite();
          if (s.mrac.projection) {
            inside = inside && s.mrac.projection->contains(x.theta);
          }
        });
      }
    } catch (const std::exception& e) {
      bad += preset.name + " (" + e.what() + ") ";
      continue;
    }
    if (!(finite && inside && gap)) {
      bad += preset.name + " ";
    }
    ++checked;
  }
  return {bad.empty() && checked >= 5,
          std::to_string(checked) + " presets finite, in bounds, gap > 0" +
              (bad.empty() ? "" : "; failed: " + bad)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Scenario s = load_scenario(kPresets / "acc_paper_compare.json");
  apply_overrides(s, {7, std::nullopt, false});
  const auto root = std::filesystem::temp_directory_path() / "rlsmrac_acceptance";
  std::filesystem::remove_all(root);
  write_run(execute(s), root / "a");
  write_run(execute(s), root / "b");
  const std::string a = slurp(root / "a" / "trace.csv");
  const std::string b = slurp(root / "b" / "trace.csv");
  std::filesystem::remove_all(root);
  return {!a.empty() && a == b,
          std::to_string(a.size()) + " byte trace, repeated run " +
              (a == b ? "identical" : "differs")};
}

}  // namespace

int main() {
  report("matching-oracle", matching_oracle);
  report("lyapunov-monotonicity", acc_lyapunov);
  report("covariance-duality", covariance_duality);
  report("riccati-closed-form", riccati);
  report("pe-detector", pe_detector);
  report("convergence-under-pe", convergence_under_pe);
  report("comparison-ordering", compare_ordering);
  report("boundedness-and-safety", boundedness_and_safety);
  report("determinism", determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
