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
 * @file polynomial.hpp
 * @brief Dense real polynomials in s, stored leading coefficient first.
 */

#pragma once

#include <complex>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlsmrac {

/**
 * @brief Real polynomial with descending-degree coefficients.
 *
 * {1, 3, 2} is s^2 + 3s + 2. Leading entries that are exactly zero are
 * trimmed on construction; no epsilon trimming is ever applied, so a degree
 * never changes silently. The zero polynomial is stored as {0}.
 */
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }
  /// (s - root)
  static Polynomial linear_root(double root) { return Polynomial({1.0, -root}); }
  /// (s + a)^power
  static Polynomial binomial_power(double a, int power);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const { return coeffs_.front(); }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  bool is_monic() const { return coeffs_.front() == 1.0; }

  /// Coefficient of s^power (0 when power exceeds the degree).
  double coeff_of_power(int power) const;

  std::complex<double> evaluate(std::complex<double> s) const;
  double evaluate(double s) const;

  Polynomial monic() const;
  Polynomial scaled(double factor) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  std::string to_string() const;

 private:
  void trim();

  std::vector<double> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// Coefficient convolution; deg(a*b) = deg(a) + deg(b) for nonzero inputs.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);

struct PolyDivision {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division a = quotient * b + remainder with deg(remainder) < deg(b).
PolyDivision poly_divmod(const Polynomial& a, const Polynomial& b);

/// Largest absolute coefficient difference after padding to equal length.
double max_coeff_diff(const Polynomial& a, const Polynomial& b);

/// First column of the Routh array (one entry per row, s^n down to s^0).
/// Construction stops early when a pivot is exactly zero; the returned
/// column is then shorter than degree + 1.
std::vector<double> routh_first_column(const Polynomial& p);

/**
 * @brief Strict Hurwitz test via the Routh array.
 *
 * Returns true iff every root has a strictly negative real part. A zero
 * pivot (including a vanishing row) marks a root on or right of the
 * imaginary axis and yields false.
 *
 * @throws ValidationError for degree-0 input.
 */
bool is_hurwitz(const Polynomial& p);

}  // namespace rlsmrac
