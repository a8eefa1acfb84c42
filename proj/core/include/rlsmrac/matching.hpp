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
 * @file matching.hpp
 * @brief Model reference control: problem validation, the filter polynomial
 * Lambda(s), and the ideal parameter vector theta* obtained by matching the
 * closed loop r -> y_p to the reference model.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlsmrac/polynomial.hpp"
#include "rlsmrac/transfer_function.hpp"

namespace rlsmrac {

/**
 * @brief Controller parameters [theta1^T, theta2^T, theta3, c0]^T.
 *
 * theta1 and theta2 have n-1 entries each (empty for n = 1), so the flat
 * vector has 2n entries. That flattening order is used everywhere.
 */
struct MracTheta {
  Eigen::VectorXd theta1;
  Eigen::VectorXd theta2;
  double theta3 = 0.0;
  double c0 = 0.0;

  static MracTheta zero(int n);
  static MracTheta unflatten(const Eigen::VectorXd& flat);

  /// Plant order n this vector is sized for.
  int order() const { return static_cast<int>(theta1.size()) + 1; }
  int size() const { return 2 * order(); }
  Eigen::VectorXd flatten() const;
};

struct AssumptionCheck {
  std::string id;          ///< e.g. "plant.zeros_hurwitz"
  std::string assumption;  ///< e.g. "plant assumption (i)"
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  /// @throws AssumptionViolation naming every failed check.
  void require_ok() const;
  std::string to_string() const;
};

/**
 * @brief Checks the structural MRC assumptions on a plant / model pair.
 *
 * Plant: Z_p monic Hurwitz, n_p >= 1, relative degree n* >= 1, k_p != 0.
 * Model: Z_m and R_m monic Hurwitz, same relative degree as the plant.
 * Monicity holds by construction of TransferFunction.
 */
ValidationReport validate_problem(const TransferFunction& plant,
                                  const TransferFunction& refmodel);

/// (s + 5)^(n - 1 - q_m), the default Lambda_0.
Polynomial default_lambda0(const TransferFunction& refmodel, int n);

/**
 * @brief Lambda = Lambda_0 * Z_m, required monic Hurwitz of degree n - 1.
 *
 * For n = 1 this is the constant 1 (no controller filters).
 *
 * @throws ValidationError on degree mismatch or non-Hurwitz Lambda_0.
 */
Polynomial build_lambda(const TransferFunction& refmodel,
                        const Polynomial& lambda0, int n);

struct MatchingSolution {
  MracTheta theta;
  /// rho* = k_p / k_m = 1 / c0*. Analysis only; controllers see sign_rho.
  double rho = 0.0;
  int sign_rho = 1;
  double residual = 0.0;
  double condition = 1.0;
};

/**
 * @brief Solves for theta* by equating coefficients of
 *
 *   (Lambda - theta1^T alpha) R_p - k_p Z_p (theta2^T alpha + theta3 Lambda)
 *       = Z_p Lambda_0 R_m,     c0* = k_m / k_p,
 *
 * a dense (2n-1)x(2n-1) linear system.
 *
 * @throws AssumptionViolation if validate_problem fails or the system is
 *         numerically singular (condition number above 1e10, i.e. Z_p and
 *         R_p are not coprime).
 */
MatchingSolution solve_matching(const TransferFunction& plant,
                                const TransferFunction& refmodel,
                                const Polynomial& lambda);

/// Condition-number threshold above which the matching system counts as
/// singular.
inline constexpr double kMatchingConditionLimit = 1e10;

/**
 * @brief Closed-loop transfer function r -> y_p for fixed parameters,
 *
 *   G_c = c0 k_p Z_p Lambda /
 *         ((Lambda - theta1^T alpha) R_p - k_p Z_p (theta2^T alpha + theta3 Lambda)),
 *
 * returned unreduced (the Z_p Lambda_0 factor is not cancelled); compare
 * with tf_mismatch.
 */
TransferFunction closed_loop_tf(const TransferFunction& plant,
                                const MracTheta& theta,
                                const Polynomial& lambda);

/**
 * @brief Composite plant + filter realization (A_c, B_c, C_c) with state
 * Y_c = [x_p; omega1; omega2], closed with the ideal parameters.
 *
 * The output error obeys e' = A_c e + B_c (theta - theta*)^T omega,
 * e1 = C_c e, and C_c (sI - A_c)^{-1} B_c c0* = W_m.
 */
StateSpace composite_error_system(const TransferFunction& plant,
                                  const MracTheta& theta_star,
                                  const Polynomial& lambda);

}  // namespace rlsmrac
