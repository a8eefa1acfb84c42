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

#include "rlsmrac/transfer_function.hpp"

#include <cmath>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

TransferFunction::TransferFunction(double gain, Polynomial num, Polynomial den)
    : gain_(gain) {
  if (num.is_zero() || den.is_zero()) {
    throw ValidationError("transfer function with a zero polynomial");
  }
  gain_ *= num.leading() / den.leading();
  num_ = num.monic();
  den_ = den.monic();
  if (num_.degree() > den_.degree()) {
    throw ValidationError("transfer function is improper: deg(num) = " +
                          std::to_string(num_.degree()) + " > deg(den) = " +
                          std::to_string(den_.degree()));
  }
}

std::complex<double> TransferFunction::evaluate(std::complex<double> s) const {
  return gain_ * num_.evaluate(s) / den_.evaluate(s);
}

double tf_mismatch(const TransferFunction& a, const TransferFunction& b) {
  const Polynomial lhs = (a.num() * b.den()).scaled(a.gain());
  const Polynomial rhs = (b.num() * a.den()).scaled(b.gain());
  return max_coeff_diff(lhs, rhs);
}

std::complex<double> StateSpace::frequency_response(
    std::complex<double> s) const {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd resolvent =
      s * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  const Eigen::VectorXcd x =
      resolvent.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * x)(0) + D;
}

Eigen::VectorXd StateSpace::markov_parameters(int count) const {
  Eigen::VectorXd out(count);
  Eigen::VectorXd v = B;
  for (int k = 0; k < count; ++k) {
    out(k) = C.dot(v);
    v = A * v;
  }
  return out;
}

Eigen::MatrixXd companion_matrix(const Polynomial& monic_poly) {
  const int n = monic_poly.degree();
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    F(0, j) = -monic_poly.coeffs()[static_cast<std::size_t>(j + 1)];
  }
  for (int i = 1; i < n; ++i) {
    F(i, i - 1) = 1.0;
  }
  return F;
}

StateSpace canonical_realize(const TransferFunction& tf) {
  const int n = tf.order();
  if (n < 1) {
    throw ValidationError(
        "canonical_realize: denominator must have degree >= 1 (pure gains "
        "have no state)");
  }
  if (tf.relative_degree() < 0) {
    throw ValidationError("canonical_realize: improper transfer function");
  }

  StateSpace ss;
  ss.A = companion_matrix(tf.den());
  ss.B = Eigen::VectorXd::Zero(n);
  ss.B(0) = 1.0;

  // Biproper case: peel off the direct feedthrough first.
  Polynomial num = tf.num().scaled(tf.gain());
  if (tf.relative_degree() == 0) {
    ss.D = num.leading();
    num = num - tf.den().scaled(ss.D);
  }
  ss.C = Eigen::RowVectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    ss.C(j) = num.coeff_of_power(n - 1 - j);
  }
  return ss;
}

}  // namespace rlsmrac
