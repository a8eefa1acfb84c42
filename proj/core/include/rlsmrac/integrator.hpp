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
 * @file integrator.hpp
 * @brief Fixed-step classical Runge-Kutta integration.
 *
 * Every simulation in the library advances with the same fixed step so that
 * traces of competing adaptive laws line up sample for sample.
 */

#pragma once

#include <concepts>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

inline constexpr double kDefaultStep = 1e-3;

template <typename F>
concept StateDerivative =
    std::invocable<F, double, const Eigen::VectorXd&> &&
    std::convertible_to<std::invoke_result_t<F, double, const Eigen::VectorXd&>,
                        Eigen::VectorXd>;

/// @throws NumericalHalt naming @p what if any entry is NaN or infinite.
inline void require_finite(const Eigen::VectorXd& v, std::string_view what) {
  if (!v.allFinite()) {
    throw NumericalHalt("non-finite value in " + std::string(what));
  }
}

/**
 * @brief One classical RK4 step of x' = f(t, x).
 *
 * @throws ValidationError if dt <= 0.
 * @throws NumericalHalt if the state or any stage derivative is non-finite.
 */
template <StateDerivative F>
Eigen::VectorXd rk4_step(F&& deriv, const Eigen::VectorXd& x, double t,
                         double dt) {
  if (!(dt > 0.0)) {
    throw ValidationError("rk4_step: dt must be positive");
  }
  require_finite(x, "integrator state");
  const double half = 0.5 * dt;
  const Eigen::VectorXd k1 = deriv(t, x);
  require_finite(k1, "state derivative");
  const Eigen::VectorXd k2 = deriv(t + half, x + half * k1);
  require_finite(k2, "state derivative");
  const Eigen::VectorXd k3 = deriv(t + half, x + half * k2);
  require_finite(k3, "state derivative");
  const Eigen::VectorXd k4 = deriv(t + dt, x + dt * k3);
  require_finite(k4, "state derivative");
  Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  require_finite(next, "integrator state");
  return next;
}

}  // namespace rlsmrac
