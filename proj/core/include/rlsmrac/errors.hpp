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
 * @file errors.hpp
 * @brief Exception types shared by every rlsmrac module.
 *
 * The CLI maps each family onto a process exit code:
 * ValidationError -> 2, NumericalHalt / SafetyViolation -> 3,
 * AssumptionViolation -> 4.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace rlsmrac {

/// Malformed input: bad dimensions, out-of-range configuration, parse errors.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulation produced a non-finite value or crossed a configured alarm.
class NumericalHalt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The ACC run lost its positive inter-vehicle gap.
class SafetyViolation : public NumericalHalt {
 public:
  using NumericalHalt::NumericalHalt;
};

/// A plant / reference-model pair breaks a structural MRAC assumption.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested analysis exists only for a narrower problem class.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rlsmrac
