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

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "rlsmrac/acc.hpp"
#include "rlsmrac/adaptive_laws.hpp"
#include "rlsmrac/matching.hpp"

namespace {

using namespace rlsmrac;

void BM_AccRun60s(benchmark::State& state) {
  AccConfig cfg;
  cfg.problem.vehicle = VehicleModel::from_physical(567.75, 0.3, 1.7, 0.01);
  cfg.problem.lead = PiecewiseLead{{0.0, 15.0, 35.0}, {20.0, 25.0, 18.0}, 3.0};
  cfg.bounds = ProjectionBounds::uniform(-500.0, 500.0, 3);
  cfg.law = state.range(0) == 0 ? AdaptiveLaw::kGradient : AdaptiveLaw::kRls;
  cfg.noise_sigma = 0.05;
  for (auto _ : state) {
    AccSimulation sim(cfg);
    while (!sim.done()) {
      sim.step();
    }
    benchmark::DoNotOptimize(sim.state().v);
  }
}
BENCHMARK(BM_AccRun60s)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveMatching(benchmark::State& state) {
  const TransferFunction plant(1.0, {1.0, 4.0, 3.0}, {1.0, -1.0, 2.0, 5.0});
  const TransferFunction ref(2.0, {1.0}, {1.0, 2.0});
  const Polynomial lambda = build_lambda(ref, default_lambda0(ref, 3), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_matching(plant, ref, lambda));
  }
}
BENCHMARK(BM_SolveMatching);

void BM_CovarianceUpdate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Covariance cov(Eigen::MatrixXd::Identity(m, m), 0.95);
  Eigen::VectorXd omega = Eigen::VectorXd::LinSpaced(m, 0.1, 1.0);
  for (auto _ : state) {
    covariance_update(cov, omega, 1e-3);
    benchmark::DoNotOptimize(cov.P().data());
  }
}
BENCHMARK(BM_CovarianceUpdate)->Arg(2)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
