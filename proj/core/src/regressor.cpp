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

#include "rlsmrac/regressor.hpp"

#include <cmath>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"
#include "rlsmrac/transfer_function.hpp"

namespace rlsmrac {

Eigen::VectorXd RegressorState::assemble(double y_p, double r) const {
  const Eigen::Index f = omega1.size();
  Eigen::VectorXd omega(2 * f + 2);
  omega << omega1, omega2, y_p, r;
  return omega;
}

RegressorState make_regressor(const Polynomial& lambda) {
  if (!lambda.is_monic()) {
    throw ValidationError("regressor filter polynomial must be monic");
  }
  const int f = lambda.degree();
  RegressorState rs;
  rs.omega1 = Eigen::VectorXd::Zero(f);
  rs.omega2 = Eigen::VectorXd::Zero(f);
  rs.F = f > 0 ? companion_matrix(lambda) : Eigen::MatrixXd(0, 0);
  rs.g = Eigen::VectorXd::Zero(f);
  if (f > 0) {
    rs.g(0) = 1.0;
  }
  return rs;
}

Eigen::VectorXd regressor_step(RegressorState& rs, double u_p, double y_p,
                               double r, double dt) {
  if (!std::isfinite(u_p) || !std::isfinite(y_p) || !std::isfinite(r)) {
    throw NumericalHalt("regressor_step: non-finite input");
  }
  const Eigen::Index f = rs.omega1.size();
  if (f > 0) {
    Eigen::VectorXd x(2 * f);
    x << rs.omega1, rs.omega2;
    const auto deriv = [&](double, const Eigen::VectorXd& s) {
      Eigen::VectorXd d(2 * f);
      d.head(f) = rs.F * s.head(f) + rs.g * u_p;
      d.tail(f) = rs.F * s.tail(f) + rs.g * y_p;
      return d;
    };
    x = rk4_step(deriv, x, 0.0, dt);
    rs.omega1 = x.head(f);
    rs.omega2 = x.tail(f);
  } else if (!(dt > 0.0)) {
    throw ValidationError("regressor_step: dt must be positive");
  }
  return rs.assemble(y_p, r);
}

double control_law(const Eigen::VectorXd& theta, const Eigen::VectorXd& omega) {
  if (theta.size() != omega.size()) {
    throw ValidationError("control_law: theta has " +
                          std::to_string(theta.size()) + " entries, omega has " +
                          std::to_string(omega.size()));
  }
  return theta.dot(omega);
}

double control_law(const MracTheta& theta, const Eigen::VectorXd& omega) {
  return control_law(theta.flatten(), omega);
}

}  // namespace rlsmrac
