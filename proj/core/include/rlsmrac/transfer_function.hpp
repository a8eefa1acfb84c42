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
 * @file transfer_function.hpp
 * @brief SISO transfer functions k * num(s) / den(s) and their
 * controllable-canonical state-space realizations.
 */

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "rlsmrac/polynomial.hpp"

namespace rlsmrac {

/**
 * @brief gain * num(s) / den(s) with monic num and den.
 *
 * Used for both the plant G_p = k_p Z_p / R_p and the reference model
 * W_m = k_m Z_m / R_m.
 */
class TransferFunction {
 public:
  /// Non-monic inputs are normalized; their leading ratio is folded into
  /// the gain.
  TransferFunction(double gain, Polynomial num, Polynomial den);

  double gain() const { return gain_; }
  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  int order() const { return den_.degree(); }
  int relative_degree() const { return den_.degree() - num_.degree(); }
  bool strictly_proper() const { return relative_degree() > 0; }

  std::complex<double> evaluate(std::complex<double> s) const;

 private:
  double gain_;
  Polynomial num_;
  Polynomial den_;
};

/**
 * @brief Largest coefficient of gain_a*num_a*den_b - gain_b*num_b*den_a.
 *
 * Zero iff the two transfer functions are equal as rational functions,
 * common factors included, so unreduced forms compare cleanly.
 */
double tf_mismatch(const TransferFunction& a, const TransferFunction& b);

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  double output(const Eigen::VectorXd& x, double u) const {
    return C.dot(x) + D * u;
  }
  std::complex<double> frequency_response(std::complex<double> s) const;
  /// C A^k B for k = 0 .. count-1.
  Eigen::VectorXd markov_parameters(int count) const;
};

/**
 * @brief Controllable canonical (companion) form.
 *
 * A has the negated den coefficients in its first row and a shifted
 * identity below, B = e_1, and C carries gain * num aligned to
 * s^{n-1} .. s^0. 1/(s^2+3s+2) gives A = [[-3,-2],[1,0]], B = [1,0]^T,
 * C = [0,1].
 *
 * @throws ValidationError for improper or degree-0 denominators.
 */
StateSpace canonical_realize(const TransferFunction& tf);

/// Companion matrix of a monic polynomial (same layout as canonical_realize).
Eigen::MatrixXd companion_matrix(const Polynomial& monic_poly);

}  // namespace rlsmrac
