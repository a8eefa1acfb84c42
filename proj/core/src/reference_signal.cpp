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

#include "rlsmrac/reference_signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate_reference(const ReferenceSpec& spec) {
  std::visit(
      Overloaded{
          [](const ConstantReference&) {},
          [](const StepReference&) {},
          [](const SinesReference& s) {
            if (s.frequencies.empty()) {
              throw ValidationError("reference: sum of sinusoids needs at least one frequency");
            }
            if (s.amplitudes.size() != s.frequencies.size()) {
              throw ValidationError("reference: amplitudes and frequencies differ in length");
            }
            if (!s.phases.empty() && s.phases.size() != s.frequencies.size()) {
              throw ValidationError("reference: phases and frequencies differ in length");
            }
          },
          [](const SquareReference& s) {
            if (!(s.period > 0.0)) {
              throw ValidationError("reference: square period must be positive");
            }
          },
      },
      spec);
}

double reference_signal(const ReferenceSpec& spec, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantReference& c) { return c.value; },
          [t](const StepReference& s) { return t < s.time ? s.before : s.after; },
          [t](const SinesReference& s) {
            if (s.frequencies.empty()) {
              throw ValidationError("reference: sum of sinusoids needs at least one frequency");
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < s.frequencies.size(); ++i) {
              const double phase = s.phases.empty() ? 0.0 : s.phases[i];
              acc += s.amplitudes[i] * std::sin(s.frequencies[i] * t + phase);
            }
            return acc;
          },
          [t](const SquareReference& s) {
            const double phase = std::fmod(t, s.period);
            const double wrapped = phase < 0.0 ? phase + s.period : phase;
            return wrapped < 0.5 * s.period ? s.amplitude : -s.amplitude;
          },
      },
      spec);
}

std::optional<int> richness_order(const ReferenceSpec& spec) {
  const auto* sines = std::get_if<SinesReference>(&spec);
  if (sines == nullptr) {
    return std::nullopt;
  }
  std::set<double> distinct;
  for (std::size_t i = 0; i < sines->frequencies.size(); ++i) {
    if (sines->frequencies[i] != 0.0 && sines->amplitudes[i] != 0.0) {
      distinct.insert(std::abs(sines->frequencies[i]));
    }
  }
  return 2 * static_cast<int>(distinct.size());
}

}  // namespace rlsmrac
