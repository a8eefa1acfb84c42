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

#include <Eigen/Dense>

#include "rlsmrac/matching.hpp"
#include "rlsmrac/polynomial.hpp"

namespace rlsmrac {

/**
 * @brief Controller filter bank
 *
 *   omega1' = F omega1 + g u_p,   omega2' = F omega2 + g y_p,
 *
 * with det(sI - F) = Lambda(s) and g = e_1. For n = 1 both filters are
 * empty and omega reduces to [y_p, r].
 */
struct RegressorState {
  Eigen::VectorXd omega1;
  Eigen::VectorXd omega2;
  Eigen::MatrixXd F;
  Eigen::VectorXd g;

  int filter_order() const { return static_cast<int>(omega1.size()); }
  /// omega = [omega1; omega2; y_p; r]
  Eigen::VectorXd assemble(double y_p, double r) const;
};

/// Zero-initialized filters for a degree n-1 Lambda.
RegressorState make_regressor(const Polynomial& lambda);

/// Advances both filters one RK4 step with u_p, y_p held; returns omega at
/// the new time, built from the given y_p and r.
Eigen::VectorXd regressor_step(RegressorState& rs, double u_p, double y_p,
                               double r, double dt);

/// u_p = theta^T omega. @throws ValidationError on size mismatch.
double control_law(const Eigen::VectorXd& theta, const Eigen::VectorXd& omega);
double control_law(const MracTheta& theta, const Eigen::VectorXd& omega);

}  // namespace rlsmrac
