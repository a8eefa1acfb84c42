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

#include "rlsmrac/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  trim();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

Polynomial Polynomial::binomial_power(double a, int power) {
  if (power < 0) {
    throw ValidationError("binomial_power: negative power");
  }
  Polynomial result = constant(1.0);
  for (int i = 0; i < power; ++i) {
    result = result * Polynomial({1.0, a});
  }
  return result;
}

void Polynomial::trim() {
  auto first_nonzero = std::find_if(coeffs_.begin(), coeffs_.end(),
                                    [](double c) { return c != 0.0; });
  if (first_nonzero == coeffs_.end()) {
    coeffs_.assign(1, 0.0);
    return;
  }
  coeffs_.erase(coeffs_.begin(), first_nonzero);
}

double Polynomial::coeff_of_power(int power) const {
  if (power < 0 || power > degree()) {
    return 0.0;
  }
  return coeffs_[static_cast<std::size_t>(degree() - power)];
}

std::complex<double> Polynomial::evaluate(std::complex<double> s) const {
  std::complex<double> acc{0.0, 0.0};
  for (double c : coeffs_) {
    acc = acc * s + c;
  }
  return acc;
}

double Polynomial::evaluate(double s) const {
  double acc = 0.0;
  for (double c : coeffs_) {
    acc = acc * s + c;
  }
  return acc;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) {
    throw ValidationError("cannot normalize the zero polynomial");
  }
  std::vector<double> out(coeffs_);
  const double lead = out.front();
  for (double& c : out) {
    c /= lead;
  }
  out.front() = 1.0;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> out(coeffs_);
  for (double& c : out) {
    c *= factor;
  }
  return Polynomial(std::move(out));
}

namespace {

std::vector<double> padded(const std::vector<double>& c, std::size_t len) {
  std::vector<double> out(len - c.size(), 0.0);
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const std::size_t len = std::max(a.coeffs_.size(), b.coeffs_.size());
  auto x = padded(a.coeffs_, len);
  const auto y = padded(b.coeffs_, len);
  for (std::size_t i = 0; i < len; ++i) {
    x[i] += y[i];
  }
  return Polynomial(std::move(x));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + b.scaled(-1.0);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  os << '[';
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    os << (i ? ", " : "") << p.coeffs()[i];
  }
  return os << ']';
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) { return a * b; }

PolyDivision poly_divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) {
    throw ValidationError("poly_divmod: division by the zero polynomial");
  }
  const int da = a.degree();
  const int db = b.degree();
  if (da < db || a.is_zero()) {
    return {Polynomial::constant(0.0), a};
  }
  std::vector<double> rem(a.coeffs());
  std::vector<double> quot(static_cast<std::size_t>(da - db + 1), 0.0);
  const auto& bc = b.coeffs();
  for (std::size_t i = 0; i < quot.size(); ++i) {
    const double q = rem[i] / bc[0];
    quot[i] = q;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      rem[i + j] -= q * bc[j];
    }
  }
  std::vector<double> tail(rem.end() - db, rem.end());
  if (tail.empty()) {
    tail.push_back(0.0);
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(tail))};
}

double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  const std::size_t len = std::max(a.coeffs().size(), b.coeffs().size());
  const auto x = padded(a.coeffs(), len);
  const auto y = padded(b.coeffs(), len);
  double worst = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

std::vector<double> routh_first_column(const Polynomial& p) {
  const Polynomial q = p.monic();
  const auto& c = q.coeffs();
  const int n = q.degree();
  const std::size_t width = static_cast<std::size_t>(n / 2 + 1);

  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (int i = 0; i <= n; ++i) {
    auto& row = (i % 2 == 0) ? upper : lower;
    row[static_cast<std::size_t>(i / 2)] = c[static_cast<std::size_t>(i)];
  }

  std::vector<double> column{upper[0]};
  for (int row = 1; row <= n; ++row) {
    if (lower[0] == 0.0) {
      return column;  // zero pivot, possibly a vanishing row
    }
    column.push_back(lower[0]);
    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      next[j] = (lower[0] * upper[j + 1] - upper[0] * lower[j + 1]) / lower[0];
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  return column;
}

bool is_hurwitz(const Polynomial& p) {
  if (p.degree() < 1) {
    throw ValidationError("is_hurwitz: polynomial " + p.to_string() +
                          " has degree 0; a stability verdict needs degree >= 1");
  }
  const auto column = routh_first_column(p);
  if (static_cast<int>(column.size()) != p.degree() + 1) {
    return false;
  }
  return std::all_of(column.begin(), column.end(),
                     [](double v) { return v > 0.0; });
}

}  // namespace rlsmrac
