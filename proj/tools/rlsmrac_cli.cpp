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

// Command-line harness.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical halt or safety
// violation, 4 assumption violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitHalt = 3;
constexpr int kExitAssumption = 4;

rlsmrac::Scenario load(const std::string& config) {
  return rlsmrac::load_scenario(rlsmrac::resolve_config(config));
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed,
            const std::string& out, const std::string& law, bool analysis) {
  rlsmrac::Scenario s = load(config);
  rlsmrac::ScenarioOverrides o;
  o.seed = seed;
  if (!law.empty()) {
    o.law = rlsmrac::parse_law(law);
  }
  o.analysis_mode = analysis;
  rlsmrac::apply_overrides(s, o);
  const rlsmrac::RunResult r = rlsmrac::execute(s);
  rlsmrac::write_run(r, out);
  rlsmrac::write_summary(std::cout, r.summary);
  return kExitOk;
}

int cmd_compare(const std::string& config, const std::string& laws,
                const std::string& seeds, const std::string& out, unsigned threads) {
  const rlsmrac::Scenario s = load(config);
  rlsmrac::CompareOptions opts;
  opts.laws = rlsmrac::parse_law_list(laws);
  opts.seeds = rlsmrac::parse_seed_list(seeds);
  opts.threads = threads;
  const rlsmrac::CompareReport rep = rlsmrac::compare(s, opts);
  rlsmrac::write_compare(rep, out);
  std::cout << rep.text();
  return kExitOk;
}

int cmd_validate(const std::string& config) {
  const rlsmrac::Scenario s = load(config);
  if (s.mode == rlsmrac::ScenarioMode::kAcc) {
    rlsmrac::AccSimulation sim(s.acc);
  } else {
    rlsmrac::validate_problem(s.mrac.plant, s.mrac.refmodel).require_ok();
    rlsmrac::MracSimulation sim(s.mrac);
  }
  std::cout << "ok " << s.name << " (" << rlsmrac::to_string(s.mode) << ", hash "
            << rlsmrac::scenario_hash(s) << ")\n";
  return kExitOk;
}

int cmd_presets_list() {
  for (const auto& p : rlsmrac::list_presets()) {
    std::cout << p.name << "\t" << p.description << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct MRAC with gradient and RLS adaptive laws"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rlsmrac::library_version()));

  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string law;
  bool analysis = false;
  auto* run = app.add_subcommand("run", "Run one scenario and write trace.csv and summary.txt");
  run->add_option("--config", config, "Scenario file or preset name")->required();
  run->add_option("--seed", seed, "Noise seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--law", law, "Override the adaptive law")
      ->check(CLI::IsMember({"gradient", "rls"}));
  run->add_flag("--analysis-mode", analysis, "Use the certified law with known ideal parameters");

  std::string laws = "gradient,rls";
  std::string seeds = "1..10";
  unsigned threads = 0;
  auto* cmp = app.add_subcommand("compare", "Run laws x seeds and report the ordering");
  cmp->add_option("--config", config, "Scenario file or preset name")->required();
  cmp->add_option("--laws", laws, "Comma-separated laws");
  cmp->add_option("--seeds", seeds, "Seed range a..b or comma list");
  cmp->add_option("--out", out, "Output directory");
  cmp->add_option("--threads", threads, "Worker threads (0 = hardware)");

  auto* val = app.add_subcommand("validate", "Check a scenario without running it");
  val->add_option("--config", config, "Scenario file or preset name")->required();

  auto* presets = app.add_subcommand("presets", "Shipped scenario presets");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List shipped presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) {
      return cmd_run(config, seed, out, law, analysis);
    }
    if (cmp->parsed()) {
      return cmd_compare(config, laws, seeds, out, threads);
    }
    if (val->parsed()) {
      return cmd_validate(config);
    }
    if (list->parsed()) {
      return cmd_presets_list();
    }
  } catch (const rlsmrac::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rlsmrac::AssumptionViolation& e) {
    std::cerr << "assumption violation: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const rlsmrac::SafetyViolation& e) {
    std::cerr << "safety violation: " << e.what() << "\n";
    return kExitHalt;
  } catch (const rlsmrac::NumericalHalt& e) {
    std::cerr << "numerical halt: " << e.what() << "\n";
    return kExitHalt;
  } catch (const rlsmrac::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
