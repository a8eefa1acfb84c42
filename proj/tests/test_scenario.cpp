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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/scenario.hpp"

namespace rlsmrac {
namespace {

const std::filesystem::path kPresets = RLSMRAC_TEST_PRESET_DIR;

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimalAcc = R"({
  "name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1},
  "law": {"type": "gradient", "gamma": [50, 30, 40]},
  "sim": {"dt": 0.001, "t_final": 1}
})";

TEST(ScenarioTest, ComparePresetCarriesPublishedGains) {
  const Scenario s = load_scenario(kPresets / "acc_paper_compare.json");
  EXPECT_EQ(s.mode, ScenarioMode::kAcc);
  EXPECT_EQ(s.acc.law, AdaptiveLaw::kRls);
  EXPECT_EQ(s.acc.mode, RlsMode::kRealizable);
  EXPECT_DOUBLE_EQ(s.acc.rls.beta, 0.95);
  ASSERT_EQ(s.acc.rls.p0_diag.size(), 3);
  EXPECT_EQ(s.acc.rls.p0_diag(0), 100.0);
  EXPECT_EQ(s.acc.rls.p0_diag(2), 100.0);
  EXPECT_EQ(s.acc.gamma(0), 50.0);
  EXPECT_EQ(s.acc.gamma(1), 30.0);
  EXPECT_EQ(s.acc.gamma(2), 40.0);
  EXPECT_DOUBLE_EQ(s.acc.noise_sigma, 0.05);
  ASSERT_TRUE(s.physical_vehicle.has_value());
  EXPECT_EQ(s.physical_vehicle->mass, 567.75);
  const VehicleModel vm = VehicleModel::from_physical(567.75, 0.3, 1.7, 0.01);
  EXPECT_DOUBLE_EQ(s.acc.problem.vehicle.a, vm.a);
  EXPECT_DOUBLE_EQ(s.acc.problem.vehicle.b, vm.b);
}

TEST(ScenarioTest, AllPresetsLoad) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kPresets)) {
    if (entry.path().extension() == ".json") {
      EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
      ++count;
    }
  }
  EXPECT_GE(count, 5);
}

TEST(ScenarioTest, MinimalConfigUsesDefaults) {
  const Scenario s = parse_scenario(kMinimalAcc);
  EXPECT_EQ(s.acc.law, AdaptiveLaw::kGradient);
  EXPECT_EQ(s.acc.problem.spacing.s0, 5.0);
  EXPECT_EQ(s.acc.problem.spacing.h, 1.5);
  EXPECT_EQ(s.output_every, 10);
  EXPECT_EQ(s.seed, 1u);
}

TEST(ScenarioTest, ErrorsNameTheKey) {
  EXPECT_NE(error_of("").find("malformed JSON"), std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1}, "law": {"type": "rls"},
                         "sim": {"dt": 0}})")
                .find("sim.dt"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1}, "law": {"type": "rls"},
                         "sim": {"dt": 0.001, "bogus": 1}})")
                .find("sim.bogus: unknown key"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "boat", "law": {"type": "rls"}, "sim": {}})")
                .find("mode"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1}, "law": {"type": "lms"}, "sim": {}})")
                .find("law.type"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1}, "law": {"type": "rls"},
                         "sim": {"dt": 0.001, "noise_sigma": -1}})")
                .find("sim.noise_sigma"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "mode": "generic-mrac", "law": {"type": "rls"},
                         "plant": {"gain": 1, "num": [1], "den": [1, 1]},
                         "refmodel": {"gain": 1, "num": [1], "den": [1, 2]},
                         "reference": {"type": "constant", "value": 1},
                         "sim": {"noise_sigma": 0.1}})")
                .find("sim.noise_sigma"),
            std::string::npos);
}

TEST(ScenarioTest, RejectsGainsOutsideBounds) {
  EXPECT_THROW(parse_scenario(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1}, "law": {"type": "rls"},
                                  "projection": {"lower": -1, "upper": 1},
                                  "initial": {"k": [2, 0, 0]}, "sim": {}})"),
               ValidationError);
}

TEST(ScenarioTest, HashIsStableAndSensitive) {
  const Scenario a = parse_scenario(kMinimalAcc);
  const Scenario b = parse_scenario(kMinimalAcc);
  EXPECT_EQ(scenario_hash(a), scenario_hash(b));
  EXPECT_EQ(scenario_hash(a).size(), 16u);
  Scenario c = a;
  apply_overrides(c, {7, std::nullopt, false});
  EXPECT_NE(scenario_hash(a), scenario_hash(c));
}

TEST(ScenarioTest, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(ScenarioTest, OverridesApply) {
  Scenario s = parse_scenario(kMinimalAcc);
  apply_overrides(s, {42, AdaptiveLaw::kRls, true});
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.acc.seed, 42u);
  EXPECT_EQ(s.law(), AdaptiveLaw::kRls);
  EXPECT_TRUE(s.analysis_mode());
}

TEST(ScenarioTest, ScalarBroadcast) {
  const Scenario s = parse_scenario(R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1},
      "law": {"type": "gradient", "gamma": 7},
      "projection": {"lower": -3, "upper": 4}, "sim": {}})");
  EXPECT_EQ(s.acc.gamma, Eigen::Vector3d(7.0, 7.0, 7.0));
  EXPECT_EQ(s.acc.bounds.lower(2), -3.0);
  EXPECT_EQ(s.acc.bounds.upper(1), 4.0);
}

}  // namespace
}  // namespace rlsmrac
