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
 * @file harness.hpp
 * @brief Single runs, multi-law / multi-seed comparisons and preset lookup.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rlsmrac/scenario.hpp"
#include "rlsmrac/trace.hpp"

namespace rlsmrac {

std::string_view library_version();

struct RunResult {
  Scenario scenario;
  std::string hash;
  std::vector<std::string> columns;
  /// Decimated rows, already formatted.
  std::vector<std::vector<std::string>> rows;
  Summary summary;
  /// rms_speed_error (acc) or final_theta_error (generic-mrac).
  double key_metric = 0.0;

  std::string csv() const;
};

/// Name of the metric that compare() orders by.
std::string_view key_metric_name(ScenarioMode mode);

/// Runs the scenario in memory. Deterministic in (scenario, seed).
/// @throws ValidationError, AssumptionViolation, NumericalHalt
RunResult execute(const Scenario& s);

/// Writes trace.csv and summary.txt into @p out_dir (created if needed).
void write_run(const RunResult& r, const std::filesystem::path& out_dir);

struct CompareOptions {
  std::vector<AdaptiveLaw> laws;
  std::vector<std::uint64_t> seeds;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct CompareRow {
  AdaptiveLaw law = AdaptiveLaw::kRls;
  std::uint64_t seed = 0;
  double metric = 0.0;
  Summary summary;
};

struct LawAggregate {
  AdaptiveLaw law = AdaptiveLaw::kRls;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CompareReport {
  std::string scenario;
  std::string hash;
  std::string metric;
  std::vector<CompareRow> rows;  ///< law-major, in option order
  std::vector<LawAggregate> aggregates;
  /// Seeds where rls <= gradient on the metric; -1 unless both laws ran.
  int rls_wins = -1;
  int seeds_compared = 0;
  std::string verdict;
  std::vector<std::string> columns;  ///< combined CSV header (law, seed, ...)
  std::string combined_csv;

  std::string text() const;
};

/// Runs every (law, seed) pair on a worker pool. Repeated entries are run
/// again and must reproduce each other.
/// @throws ValidationError unless there are >= 2 laws or >= 2 seeds.
CompareReport compare(const Scenario& base, const CompareOptions& opts);

/// Writes compare.csv, compare_report.txt and compare_summary.txt.
void write_compare(const CompareReport& r, const std::filesystem::path& out_dir);

/// "1..10", "3", or "1,4,9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// "gradient,rls"
std::vector<AdaptiveLaw> parse_law_list(std::string_view text);

struct PresetInfo {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

/// $RLSMRAC_PRESET_DIR if set, else the shipped presets directory.
std::filesystem::path preset_directory();
std::vector<PresetInfo> list_presets();
/// An existing file path is returned as is; otherwise a preset name.
/// @throws ValidationError if neither.
std::filesystem::path resolve_config(const std::string& arg);

}  // namespace rlsmrac
