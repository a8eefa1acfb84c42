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
 * @file scenario.hpp
 * @brief Run configuration loaded from JSON.
 *
 * Top-level keys (unknown keys anywhere are rejected):
 *
 *   name, description, mode ("acc" | "generic-mrac"), analysis_mode,
 *   law {type, gamma, beta, p0, rho_max, normalize},
 *   projection {lower, upper}, pe {window, alpha0},
 *   sim {dt, t_final, seed, noise_sigma, output_every, max_abs_signal,
 *        track_composite_error}
 *
 * acc mode adds vehicle {a, b} or {mass, wheel_radius, wheel_inertia,
 * damping}, and optionally disturbance, spacing {s0, h}, refmodel {am, k},
 * lead and initial {v, x_r, v_m, k}; omitted sections keep AccConfig defaults. generic-mrac mode adds plant and refmodel
 * {gain, num, den}, lambda0, reference, initial {theta, at_ideal, plant_x}.
 *
 * Vectors accept a scalar, which is broadcast. Errors name the offending
 * key as a dotted path, e.g. "sim.dt: must be positive".
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rlsmrac/acc.hpp"
#include "rlsmrac/law_settings.hpp"
#include "rlsmrac/mrac_sim.hpp"

namespace rlsmrac {

enum class ScenarioMode { kAcc, kGenericMrac };

std::string_view to_string(ScenarioMode mode);

struct PhysicalVehicle {
  double mass = 0.0;
  double wheel_radius = 0.0;
  double wheel_inertia = 0.0;
  double damping = 0.0;
};

struct Scenario {
  std::string name;
  std::string description;
  ScenarioMode mode = ScenarioMode::kAcc;
  /// Only the config matching `mode` is meaningful.
  AccConfig acc;
  MracConfig mrac;
  /// Set when the vehicle was given by physical data; a and b in `acc`
  /// are derived from it.
  std::optional<PhysicalVehicle> physical_vehicle;
  std::uint64_t seed = 1;
  int output_every = 10;

  AdaptiveLaw law() const;
  bool analysis_mode() const;
};

/// @throws ValidationError with a dotted key path on any schema problem.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Fully expanded configuration as JSON with sorted keys and no whitespace.
std::string canonical_json(const Scenario& s);
/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<AdaptiveLaw> law;
  bool analysis_mode = false;
};

void apply_overrides(Scenario& s, const ScenarioOverrides& o);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace rlsmrac
