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

#pragma once

#include <complex>
#include <random>
#include <vector>

#include "rlsmrac/matching.hpp"
#include "rlsmrac/polynomial.hpp"
#include "rlsmrac/transfer_function.hpp"

namespace rlsmrac::testing {

/// Monic polynomial with the given real roots and complex pairs re +- j im.
inline Polynomial from_roots(const std::vector<double>& real_roots,
                             const std::vector<std::complex<double>>& pairs = {}) {
  Polynomial p{1.0};
  for (double r : real_roots) {
    p = p * Polynomial{1.0, -r};
  }
  for (const auto& c : pairs) {
    p = p * Polynomial{1.0, -2.0 * c.real(), std::norm(c)};
  }
  return p;
}

struct RandomPair {
  TransferFunction plant;
  TransferFunction refmodel;
  Polynomial lambda;
};

/// Minimum-phase, relative degree one plant of order 1..3 (stable or not)
/// with a matching reference model and filter polynomial.
inline RandomPair random_matching_pair(std::mt19937_64& rng, bool stable_plant) {
  std::uniform_int_distribution<int> order(1, 3);
  std::uniform_real_distribution<double> root(-5.0, -0.5);
  std::uniform_real_distribution<double> pole(stable_plant ? -5.0 : -3.0,
                                              stable_plant ? -0.5 : 2.0);
  std::uniform_real_distribution<double> gain(0.5, 4.0);
  std::bernoulli_distribution negative(0.3);
  std::bernoulli_distribution full_order_model(0.5);

  const int n = order(rng);
  std::vector<double> poles;
  std::vector<double> zeros;
  for (int i = 0; i < n; ++i) poles.push_back(pole(rng));
  for (int i = 0; i < n - 1; ++i) zeros.push_back(root(rng));
  const double kp = negative(rng) ? -gain(rng) : gain(rng);
  TransferFunction plant(kp, from_roots(zeros), from_roots(poles));

  // Model of relative degree one: either first order or full order.
  std::vector<double> mpoles{root(rng)};
  std::vector<double> mzeros;
  if (full_order_model(rng)) {
    for (int i = 1; i < n; ++i) mpoles.push_back(root(rng));
    for (int i = 0; i < n - 1; ++i) mzeros.push_back(root(rng));
  }
  TransferFunction refmodel(gain(rng), from_roots(mzeros), from_roots(mpoles));
  const Polynomial lambda =
      build_lambda(refmodel, default_lambda0(refmodel, n), n);
  return {plant, refmodel, lambda};
}

/// Closed-loop response y/r at s from the block diagram
///   u = (theta1' a / L) u + (theta2' a / L) y + theta3 y + c0 r,  y = G u
/// evaluated pointwise, without forming polynomials.
inline std::complex<double> closed_loop_response(const TransferFunction& plant,
                                                 const MracTheta& th,
                                                 const Polynomial& lambda,
                                                 std::complex<double> s) {
  const auto m = th.theta1.size();
  std::complex<double> a1 = 0.0;
  std::complex<double> a2 = 0.0;
  std::complex<double> power = 1.0;
  for (Eigen::Index i = m - 1; i >= 0; --i) {
    a1 += th.theta1(i) * power;
    a2 += th.theta2(i) * power;
    power *= s;
  }
  const std::complex<double> L = lambda.evaluate(s);
  const std::complex<double> G = plant.evaluate(s);
  return th.c0 * G / (1.0 - a1 / L - G * (a2 / L + th.theta3));
}

}  // namespace rlsmrac::testing
