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

#include "rlsmrac/matching.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

MracTheta MracTheta::zero(int n) {
  if (n < 1) {
    throw ValidationError("MracTheta: order must be >= 1");
  }
  MracTheta t;
  t.theta1 = Eigen::VectorXd::Zero(n - 1);
  t.theta2 = Eigen::VectorXd::Zero(n - 1);
  return t;
}

MracTheta MracTheta::unflatten(const Eigen::VectorXd& flat) {
  if (flat.size() < 2 || flat.size() % 2 != 0) {
    throw ValidationError("MracTheta: flat vector must have even size >= 2, got " +
                          std::to_string(flat.size()));
  }
  const Eigen::Index m = flat.size() / 2 - 1;
  MracTheta t;
  t.theta1 = flat.segment(0, m);
  t.theta2 = flat.segment(m, m);
  t.theta3 = flat(2 * m);
  t.c0 = flat(2 * m + 1);
  return t;
}

Eigen::VectorXd MracTheta::flatten() const {
  const Eigen::Index m = theta1.size();
  Eigen::VectorXd out(2 * m + 2);
  out << theta1, theta2, theta3, c0;
  return out;
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) {
      return false;
    }
  }
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.id << " (" << c.assumption
       << ")";
    if (!c.detail.empty()) {
      os << ": " << c.detail;
    }
    os << '\n';
  }
  return os.str();
}

void ValidationReport::require_ok() const {
  std::ostringstream os;
  bool failed = false;
  for (const auto& c : checks) {
    if (!c.passed) {
      os << (failed ? "; " : "") << c.id << " violates " << c.assumption
         << " (" << c.detail << ")";
      failed = true;
    }
  }
  if (failed) {
    throw AssumptionViolation(os.str());
  }
}

namespace {

bool hurwitz_or_unit(const Polynomial& p) {
  return p.degree() == 0 ? p.leading() == 1.0 : is_hurwitz(p);
}

// theta^T alpha(s) with alpha = [s^{n-2}, ..., s, 1].
Polynomial alpha_combination(const Eigen::VectorXd& v) {
  if (v.size() == 0) {
    return Polynomial::constant(0.0);
  }
  return Polynomial(std::vector<double>(v.data(), v.data() + v.size()));
}

Polynomial monomial(int power) {
  std::vector<double> c(static_cast<std::size_t>(power + 1), 0.0);
  c.front() = 1.0;
  return Polynomial(std::move(c));
}

}  // namespace

ValidationReport validate_problem(const TransferFunction& plant,
                                  const TransferFunction& refmodel) {
  ValidationReport report;
  auto add = [&](std::string id, std::string assumption, bool passed,
                 std::string detail) {
    report.checks.push_back(
        {std::move(id), std::move(assumption), passed, std::move(detail)});
  };

  add("plant.zeros_hurwitz", "plant assumption (i): Z_p monic Hurwitz",
      hurwitz_or_unit(plant.num()), "Z_p = " + plant.num().to_string());
  add("plant.order", "plant assumption (ii): known order n >= 1",
      plant.order() >= 1, "n_p = " + std::to_string(plant.order()));
  add("plant.relative_degree",
      "plant assumption (iii): known relative degree n* >= 1",
      plant.relative_degree() >= 1,
      "n* = " + std::to_string(plant.relative_degree()));
  add("plant.gain_sign", "plant assumption (iv): sign of k_p known",
      plant.gain() != 0.0 && std::isfinite(plant.gain()),
      "k_p = " + std::to_string(plant.gain()));
  add("refmodel.zeros_hurwitz", "model assumption (i): Z_m monic Hurwitz",
      hurwitz_or_unit(refmodel.num()), "Z_m = " + refmodel.num().to_string());
  add("refmodel.poles_hurwitz", "model assumption (i): R_m monic Hurwitz",
      refmodel.den().degree() >= 1 && is_hurwitz(refmodel.den()),
      "R_m = " + refmodel.den().to_string());
  add("relative_degree_match", "model assumption (ii): n*_m = n*",
      refmodel.relative_degree() == plant.relative_degree(),
      "n*_m = " + std::to_string(refmodel.relative_degree()) +
          ", n* = " + std::to_string(plant.relative_degree()));
  return report;
}

Polynomial default_lambda0(const TransferFunction& refmodel, int n) {
  const int power = n - 1 - refmodel.num().degree();
  if (power < 0) {
    throw ValidationError("default_lambda0: deg(Z_m) exceeds n - 1");
  }
  return Polynomial::binomial_power(5.0, power);
}

Polynomial build_lambda(const TransferFunction& refmodel,
                        const Polynomial& lambda0, int n) {
  if (!lambda0.is_monic()) {
    throw ValidationError("Lambda_0 must be monic, got " + lambda0.to_string());
  }
  if (!hurwitz_or_unit(lambda0)) {
    throw ValidationError("Lambda_0 = " + lambda0.to_string() +
                          " is not Hurwitz");
  }
  Polynomial lambda = lambda0 * refmodel.num();
  if (lambda.degree() != n - 1) {
    throw ValidationError("Lambda = Lambda_0 Z_m has degree " +
                          std::to_string(lambda.degree()) + ", expected n - 1 = " +
                          std::to_string(n - 1));
  }
  return lambda;
}

MatchingSolution solve_matching(const TransferFunction& plant,
                                const TransferFunction& refmodel,
                                const Polynomial& lambda) {
  validate_problem(plant, refmodel).require_ok();
  const int n = plant.order();
  if (lambda.degree() != n - 1 || !lambda.is_monic()) {
    throw ValidationError("solve_matching: Lambda must be monic of degree " +
                          std::to_string(n - 1));
  }
  const auto split = poly_divmod(lambda, refmodel.num());
  if (max_coeff_diff(split.remainder, Polynomial::constant(0.0)) > 1e-12) {
    throw ValidationError("solve_matching: Z_m does not divide Lambda");
  }
  const Polynomial& lambda0 = split.quotient;

  const double kp = plant.gain();
  const Polynomial& zp = plant.num();
  const Polynomial& rp = plant.den();

  const int unknowns = 2 * n - 1;
  const Polynomial target = zp * lambda0 * refmodel.den();
  const Polynomial rhs_poly = target - lambda * rp;

  // Column j holds the coefficients (s^0 .. s^{2n-2}) multiplying unknown j.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(unknowns, unknowns);
  auto fill_column = [&](int col, const Polynomial& p) {
    for (int row = 0; row < unknowns; ++row) {
      M(row, col) = p.coeff_of_power(row);
    }
  };
  for (int i = 0; i < n - 1; ++i) {
    const Polynomial shift = monomial(n - 2 - i);
    fill_column(i, (rp * shift).scaled(-1.0));
    fill_column(n - 1 + i, (zp * shift).scaled(-kp));
  }
  fill_column(2 * n - 2, (zp * lambda).scaled(-kp));

  Eigen::VectorXd b(unknowns);
  for (int row = 0; row < unknowns; ++row) {
    b(row) = rhs_poly.coeff_of_power(row);
  }

  MatchingSolution sol;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  sol.condition = sv(sv.size() - 1) > 0.0
                      ? sv(0) / sv(sv.size() - 1)
                      : std::numeric_limits<double>::infinity();
  if (!(sol.condition <= kMatchingConditionLimit)) {
    std::ostringstream os;
    os << "matching system is singular (condition " << sol.condition
       << "); Z_p = " << zp << " and R_p = " << rp
       << " are not coprime";
    throw AssumptionViolation(os.str());
  }
  const Eigen::VectorXd x = M.colPivHouseholderQr().solve(b);
  sol.residual = (M * x - b).lpNorm<Eigen::Infinity>();
  if (!(sol.residual <= 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))) {
    throw NumericalHalt("matching residual too large: " +
                        std::to_string(sol.residual));
  }

  sol.theta = MracTheta::zero(n);
  sol.theta.theta1 = x.segment(0, n - 1);
  sol.theta.theta2 = x.segment(n - 1, n - 1);
  sol.theta.theta3 = x(2 * n - 2);
  sol.theta.c0 = refmodel.gain() / kp;
  sol.rho = 1.0 / sol.theta.c0;
  sol.sign_rho = sol.rho > 0.0 ? 1 : -1;
  return sol;
}

TransferFunction closed_loop_tf(const TransferFunction& plant,
                                const MracTheta& theta,
                                const Polynomial& lambda) {
  const int n = plant.order();
  if (theta.order() != n || theta.theta2.size() != theta.theta1.size()) {
    throw ValidationError("closed_loop_tf: theta sized for n = " +
                          std::to_string(theta.order()) + ", plant has n = " +
                          std::to_string(n));
  }
  if (lambda.degree() != n - 1) {
    throw ValidationError("closed_loop_tf: Lambda must have degree n - 1");
  }
  const double kp = plant.gain();
  const Polynomial& zp = plant.num();
  const Polynomial& rp = plant.den();
  const Polynomial den =
      (lambda - alpha_combination(theta.theta1)) * rp -
      (zp * (alpha_combination(theta.theta2) + lambda.scaled(theta.theta3)))
          .scaled(kp);
  if (den.is_zero()) {
    throw ValidationError("closed_loop_tf: degenerate closed-loop denominator");
  }
  return TransferFunction(theta.c0 * kp, zp * lambda, den);
}

StateSpace composite_error_system(const TransferFunction& plant,
                                  const MracTheta& theta_star,
                                  const Polynomial& lambda) {
  const int n = plant.order();
  if (theta_star.order() != n) {
    throw ValidationError("composite_error_system: theta size mismatch");
  }
  const StateSpace p = canonical_realize(plant);
  const int f = n - 1;
  const int dim = n + 2 * f;

  StateSpace c;
  c.A = Eigen::MatrixXd::Zero(dim, dim);
  c.B = Eigen::VectorXd::Zero(dim);
  c.C = Eigen::RowVectorXd::Zero(dim);

  c.A.topLeftCorner(n, n) = p.A + theta_star.theta3 * p.B * p.C;
  c.B.head(n) = p.B;
  c.C.head(n) = p.C;
  if (f > 0) {
    const Eigen::MatrixXd F = companion_matrix(lambda);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(f);
    g(0) = 1.0;
    c.A.block(0, n, n, f) = p.B * theta_star.theta1.transpose();
    c.A.block(0, n + f, n, f) = p.B * theta_star.theta2.transpose();
    c.A.block(n, 0, f, n) = theta_star.theta3 * g * p.C;
    c.A.block(n, n, f, f) = F + g * theta_star.theta1.transpose();
    c.A.block(n, n + f, f, f) = g * theta_star.theta2.transpose();
    c.A.block(n + f, 0, f, n) = g * p.C;
    c.A.block(n + f, n + f, f, f) = F;
    c.B.segment(n, f) = g;
  }
  return c;
}

}  // namespace rlsmrac
