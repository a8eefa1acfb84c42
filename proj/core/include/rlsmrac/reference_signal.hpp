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

#include <optional>
#include <variant>
#include <vector>

namespace rlsmrac {

struct ConstantReference {
  double value = 0.0;
};

/// `before` until `time`, `after` from then on.
struct StepReference {
  double time = 0.0;
  double before = 0.0;
  double after = 1.0;
};

/// sum_i amplitudes[i] * sin(frequencies[i] * t + phases[i]), rad/s.
struct SinesReference {
  std::vector<double> amplitudes;
  std::vector<double> frequencies;
  std::vector<double> phases;  ///< empty means all zero
};

/// +amplitude on the first half of each period, -amplitude on the second.
struct SquareReference {
  double period = 1.0;
  double amplitude = 1.0;
};

using ReferenceSpec =
    std::variant<ConstantReference, StepReference, SinesReference, SquareReference>;

/// @throws ValidationError for an empty sinusoid list or mismatched sizes,
///         or a non-positive square period.
void validate_reference(const ReferenceSpec& spec);

double reference_signal(const ReferenceSpec& spec, double t);

/// 2k for a sum of sinusoids with k distinct nonzero frequencies; nothing
/// for other waveforms.
std::optional<int> richness_order(const ReferenceSpec& spec);

}  // namespace rlsmrac
