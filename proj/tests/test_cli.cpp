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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

const std::string kCli = RLSMRAC_CLI_PATH;
const std::filesystem::path kPresets = RLSMRAC_TEST_PRESET_DIR;

int run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rlsmrac_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path write_config(const std::filesystem::path& dir,
                                   const std::string& text) {
  const auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

TEST(CliTest, RunWritesOutputs) {
  const auto dir = scratch("run");
  EXPECT_EQ(run("run --config mrac_first_order --out " + dir.string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "trace.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
}

TEST(CliTest, RunIsDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const auto cfg = (kPresets / "acc_grade_step.json").string();
  ASSERT_EQ(run("run --config " + cfg + " --seed 3 --out " + a.string()), 0);
  ASSERT_EQ(run("run --config " + cfg + " --seed 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
}

TEST(CliTest, ValidationErrorsExitTwo) {
  const auto dir = scratch("bad");
  EXPECT_EQ(run("run --config no_such_preset --out " + dir.string()), 2);
  const auto cfg = write_config(
      dir, R"({"name": "t", "mode": "acc", "vehicle": {"a": 0.1, "b": 1},
          "law": {"type": "rls"}, "sim": {"dt": 0}})");
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + dir.string()), 2);
  EXPECT_EQ(run("validate --config " + cfg.string()), 2);
  EXPECT_EQ(run("run --bogus-flag"), 2);
  EXPECT_EQ(run("compare --config mrac_first_order --laws rls --seeds 1 --out " +
                dir.string()),
            2);
}

TEST(CliTest, AssumptionViolationExitsFour) {
  const auto dir = scratch("assumption");
  const auto cfg = write_config(dir, R"({"name": "nmp", "mode": "generic-mrac",
      "law": {"type": "rls"},
      "plant": {"gain": 1, "num": [1, -1], "den": [1, 3, 2]},
      "refmodel": {"gain": 1, "num": [1, 2], "den": [1, 3, 2]},
      "reference": {"type": "constant", "value": 1},
      "sim": {"t_final": 1}})");
  EXPECT_EQ(run("validate --config " + cfg.string()), 4);
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + dir.string()), 4);
}

TEST(CliTest, HaltExitsThree) {
  const auto dir = scratch("halt");
  const auto cfg = write_config(dir, R"({"name": "crash", "mode": "acc", "vehicle": {"a": 0.1, "b": 1},
      "law": {"type": "gradient", "gamma": 0.001},
      "projection": {"lower": -1, "upper": 1},
      "lead": {"type": "constant", "speed": 5},
      "initial": {"v": 30, "x_r": 10},
      "sim": {"t_final": 5}})");
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + dir.string()), 3);
}

TEST(CliTest, CompareAndPresets) {
  const auto dir = scratch("compare");
  const auto cfg = write_config(dir, R"({"name": "short", "mode": "acc", "vehicle": {"a": 0.1, "b": 1},
      "law": {"type": "rls", "gamma": [50, 30, 40]},
      "sim": {"t_final": 2, "noise_sigma": 0.05}})");
  EXPECT_EQ(run("compare --config " + cfg.string() + " --seeds 1..2 --out " +
                dir.string()),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "compare.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "compare_report.txt"));
  EXPECT_EQ(run("presets list"), 0);
  EXPECT_EQ(run("validate --config acc_paper_compare"), 0);
}

}  // namespace
