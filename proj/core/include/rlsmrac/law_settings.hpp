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

#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "rlsmrac/adaptive_laws.hpp"

namespace rlsmrac {

enum class AdaptiveLaw { kGradient, kRls };

std::string_view to_string(AdaptiveLaw law);
/// "gradient" or "rls". @throws ValidationError otherwise.
AdaptiveLaw parse_law(std::string_view name);

struct RlsSettings {
  double beta = 0.95;
  /// Diagonal of P(0).
  Eigen::VectorXd p0_diag;
  double rho_max = Covariance::kDefaultRhoMax;
  bool normalize = false;
};

struct PeSettings {
  double window = 2.0 * std::numbers::pi;
  double alpha0 = 1e-3;
};

}  // namespace rlsmrac
