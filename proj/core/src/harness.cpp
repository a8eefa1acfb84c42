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

#include "rlsmrac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "rlsmrac/errors.hpp"

#ifndef RLSMRAC_VERSION
#define RLSMRAC_VERSION "unknown"
#endif
#ifndef RLSMRAC_PRESET_DIR
#define RLSMRAC_PRESET_DIR "presets"
#endif

namespace rlsmrac {

namespace {

std::string num(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  return format_number(x);
}

void base_summary(Summary& out, const Scenario& s, const std::string& hash) {
  out.emplace_back("scenario", s.name);
  out.emplace_back("scenario_hash", hash);
  out.emplace_back("mode", std::string(to_string(s.mode)));
  out.emplace_back("law", std::string(to_string(s.law())));
  out.emplace_back("analysis_mode", s.analysis_mode() ? "true" : "false");
  out.emplace_back("seed", std::to_string(s.seed));
  out.emplace_back("library_version", std::string(library_version()));
}

/// Largest one-step increase of V and V(0); NaN when V is absent.
std::pair<double, double> lyapunov_stats(const std::vector<double>& v) {
  if (v.empty() || std::isnan(v.front())) {
    return {std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN()};
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i) {
    worst = std::max(worst, v[i] - v[i - 1]);
  }
  return {worst, v.front()};
}

RunResult execute_acc(const Scenario& s, const std::string& hash) {
  RunResult r;
  r.scenario = s;
  r.hash = hash;
  std::vector<double> lyap;
  const AccRun run = simulate_acc(s.acc, [&](const AccSample& smp) {
    if (s.acc.mode == RlsMode::kAnalysis) {
      lyap.push_back(smp.lyapunov);
    }
  });
  r.columns = acc_columns();
  for (std::size_t i : decimate(run.samples.size(), s.output_every)) {
    r.rows.push_back(acc_row(run.samples[i]));
  }

  const AccMetrics& m = run.metrics;
  r.key_metric = m.rms_speed_error;
  base_summary(r.summary, s, hash);
  r.summary.emplace_back("steps", std::to_string(run.samples.size() - 1));
  r.summary.emplace_back("dt", num(s.acc.dt));
  r.summary.emplace_back("t_final", num(s.acc.t_final));
  r.summary.emplace_back("noise_sigma", num(s.acc.noise_sigma));
  r.summary.emplace_back("vehicle_a", num(s.acc.problem.vehicle.a));
  r.summary.emplace_back("vehicle_b", num(s.acc.problem.vehicle.b));
  r.summary.emplace_back("rms_speed_error", num(m.rms_speed_error));
  r.summary.emplace_back("rms_spacing_error", num(m.rms_spacing_error));
  r.summary.emplace_back("max_accel", num(m.max_accel));
  r.summary.emplace_back("max_jerk", num(m.max_jerk));
  r.summary.emplace_back("settle_time", num(m.settle_time));
  r.summary.emplace_back("min_gap", num(run.min_gap));
  r.summary.emplace_back("gains_within_bounds", run.gains_within_bounds ? "true" : "false");
  r.summary.emplace_back("projection_clamps", std::to_string(run.projection_clamps));
  r.summary.emplace_back("covariance_clamps", std::to_string(run.clamp_events));
  r.summary.emplace_back("covariance_resets", std::to_string(run.covariance_resets));
  const AccSample& last = run.samples.back();
  r.summary.emplace_back("final_abs_e", num(std::abs(last.e)));
  r.summary.emplace_back("final_abs_delta", num(std::abs(last.delta)));
  if (s.acc.mode == RlsMode::kAnalysis) {
    const double v_l = lead_profile(s.acc.problem.lead, last.t);
    const double d = disturbance(s.acc.problem.disturbance_profile, last.t);
    const Eigen::Vector3d k_star =
        ideal_acc_gains(s.acc.problem.vehicle, s.acc.problem.refmodel, v_l, d).vector();
    r.summary.emplace_back("final_gain_error", num((last.k - k_star).norm()));
    const auto [worst, v0] = lyapunov_stats(lyap);
    r.summary.emplace_back("lyapunov_initial", num(v0));
    r.summary.emplace_back("lyapunov_final", num(lyap.back()));
    r.summary.emplace_back("lyapunov_max_step_increase", num(worst));
  }
  return r;
}

RunResult execute_generic(const Scenario& s, const std::string& hash) {
  RunResult r;
  r.scenario = s;
  r.hash = hash;
  MracSimulation probe(s.mrac);
  const int m = static_cast<int>(probe.theta().size());
  const bool certified = probe.has_lyapunov();
  std::vector<double> lyap;
  const MracRun run = simulate_mrac(s.mrac, [&](const MracSample& smp) {
    if (certified) {
      lyap.push_back(smp.lyapunov);
    }
  });
  r.columns = mrac_columns(m, s.mrac.law);
  for (std::size_t i : decimate(run.samples.size(), s.output_every)) {
    r.rows.push_back(mrac_row(run.samples[i]));
  }

  const MracMetrics& mm = run.metrics;
  r.key_metric = mm.final_theta_error;
  base_summary(r.summary, s, hash);
  r.summary.emplace_back("steps", std::to_string(run.samples.size() - 1));
  r.summary.emplace_back("dt", num(s.mrac.dt));
  r.summary.emplace_back("t_final", num(s.mrac.t_final));
  r.summary.emplace_back("parameter_count", std::to_string(m));
  r.summary.emplace_back("richness_order",
                         run.richness ? std::to_string(*run.richness) : "none");
  r.summary.emplace_back("max_abs_e1", num(mm.max_abs_e1));
  r.summary.emplace_back("rms_e1", num(mm.rms_e1));
  r.summary.emplace_back("tail_mean_abs_e1", num(mm.tail_mean_abs_e1));
  r.summary.emplace_back("max_abs_y", num(mm.max_abs_y));
  r.summary.emplace_back("max_abs_u", num(mm.max_abs_u));
  r.summary.emplace_back("max_theta_norm", num(mm.max_theta_norm));
  r.summary.emplace_back("final_theta_error", num(mm.final_theta_error));
  r.summary.emplace_back("final_pe_level", num(run.samples.back().pe_level));
  r.summary.emplace_back("projection_clamps", std::to_string(run.projection_clamps));
  r.summary.emplace_back("covariance_clamps", std::to_string(run.clamp_events));
  r.summary.emplace_back("covariance_resets", std::to_string(run.covariance_resets));
  if (certified) {
    const auto [worst, v0] = lyapunov_stats(lyap);
    r.summary.emplace_back("lyapunov_initial", num(v0));
    r.summary.emplace_back("lyapunov_final", num(lyap.back()));
    r.summary.emplace_back("lyapunov_max_step_increase", num(worst));
  }
  return r;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ValidationError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("cannot write '" + path.string() + "'");
  }
  out << content;
}

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw ValidationError("invalid seed list '" + std::string(whole) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view library_version() { return RLSMRAC_VERSION; }

std::string RunResult::csv() const {
  std::string out = csv_line(columns);
  for (const auto& row : rows) {
    out += csv_line(row);
  }
  return out;
}

std::string_view key_metric_name(ScenarioMode mode) {
  return mode == ScenarioMode::kAcc ? "rms_speed_error" : "final_theta_error";
}

RunResult execute(const Scenario& s) {
  const std::string hash = scenario_hash(s);
  return s.mode == ScenarioMode::kAcc ? execute_acc(s, hash) : execute_generic(s, hash);
}

void write_run(const RunResult& r, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  write_file(out_dir / "trace.csv", r.csv());
  std::ostringstream os;
  write_summary(os, r.summary);
  write_file(out_dir / "summary.txt", os.str());
}

CompareReport compare(const Scenario& base, const CompareOptions& opts) {
  if (opts.laws.empty() || opts.seeds.empty()) {
    throw ValidationError("compare needs at least one law and one seed");
  }
  if (opts.laws.size() < 2 && opts.seeds.size() < 2) {
    throw ValidationError("compare needs at least two laws or two seeds");
  }

  struct Job {
    AdaptiveLaw law;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (AdaptiveLaw law : opts.laws) {
    for (std::uint64_t seed : opts.seeds) {
      jobs.push_back({law, seed});
    }
  }
  std::vector<RunResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        Scenario s = base;
        apply_overrides(s, {jobs[i].seed, jobs[i].law, false});
        results[i] = execute(s);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n_threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  CompareReport rep;
  rep.scenario = base.name;
  rep.hash = scenario_hash(base);
  rep.metric = std::string(key_metric_name(base.mode));
  rep.columns = {"law", "seed"};
  rep.columns.insert(rep.columns.end(), results.front().columns.begin(),
                     results.front().columns.end());
  rep.combined_csv = csv_line(rep.columns);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    rep.rows.push_back({jobs[i].law, jobs[i].seed, results[i].key_metric, results[i].summary});
    const std::string prefix =
        std::string(to_string(jobs[i].law)) + "," + std::to_string(jobs[i].seed) + ",";
    for (const auto& row : results[i].rows) {
      rep.combined_csv += prefix + csv_line(row);
    }
  }

  std::vector<AdaptiveLaw> distinct;
  for (AdaptiveLaw law : opts.laws) {
    if (std::find(distinct.begin(), distinct.end(), law) == distinct.end()) {
      distinct.push_back(law);
    }
  }
  for (AdaptiveLaw law : distinct) {
    LawAggregate agg{law, 0.0, std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
    int n = 0;
    for (const auto& row : rep.rows) {
      if (row.law == law) {
        agg.mean += row.metric;
        agg.min = std::min(agg.min, row.metric);
        agg.max = std::max(agg.max, row.metric);
        ++n;
      }
    }
    agg.mean /= n;
    rep.aggregates.push_back(agg);
  }

  const bool has_both =
      std::count(opts.laws.begin(), opts.laws.end(), AdaptiveLaw::kRls) &&
      std::count(opts.laws.begin(), opts.laws.end(), AdaptiveLaw::kGradient);
  if (has_both) {
    rep.rls_wins = 0;
    const std::set<std::uint64_t> seeds(opts.seeds.begin(), opts.seeds.end());
    for (std::uint64_t seed : seeds) {
      // First occurrence per law; repeated entries are identical runs.
      std::optional<double> rls;
      std::optional<double> grad;
      for (const auto& row : rep.rows) {
        if (row.seed != seed) {
          continue;
        }
        auto& slot = row.law == AdaptiveLaw::kRls ? rls : grad;
        if (!slot) {
          slot = row.metric;
        }
      }
      rep.rls_wins += *rls <= *grad ? 1 : 0;
      ++rep.seeds_compared;
    }
    std::ostringstream v;
    v << "rls <= gradient on " << rep.metric << " in " << rep.rls_wins << "/"
      << rep.seeds_compared << " seeds: "
      << (2 * rep.rls_wins > rep.seeds_compared ? "rls better (majority)"
                                                : "rls not better (no majority)");
    rep.verdict = v.str();
  } else {
    rep.verdict = "single law; no ordering";
  }
  return rep;
}

std::string CompareReport::text() const {
  std::ostringstream os;
  os << "scenario " << scenario << " (hash " << hash << ")\n";
  os << "metric " << metric << "\n\n";
  os << "law       seed  " << metric << "\n";
  for (const auto& r : rows) {
    char line[96];
    std::snprintf(line, sizeof line, "%-9s %4llu  %.6g\n",
                  std::string(to_string(r.law)).c_str(),
                  static_cast<unsigned long long>(r.seed), r.metric);
    os << line;
  }
  os << "\n";
  for (const auto& a : aggregates) {
    char line[128];
    std::snprintf(line, sizeof line, "%-9s mean %.6g  min %.6g  max %.6g\n",
                  std::string(to_string(a.law)).c_str(), a.mean, a.min, a.max);
    os << line;
  }
  os << "\n" << verdict << "\n";
  return os.str();
}

void write_compare(const CompareReport& r, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  write_file(out_dir / "compare.csv", r.combined_csv);
  write_file(out_dir / "compare_report.txt", r.text());
  Summary s;
  s.emplace_back("scenario", r.scenario);
  s.emplace_back("scenario_hash", r.hash);
  s.emplace_back("metric", r.metric);
  for (const auto& row : r.rows) {
    s.emplace_back(std::string(to_string(row.law)) + "." + std::to_string(row.seed),
                   num(row.metric));
  }
  for (const auto& a : r.aggregates) {
    s.emplace_back(std::string(to_string(a.law)) + ".mean", num(a.mean));
  }
  s.emplace_back("rls_wins", std::to_string(r.rls_wins));
  s.emplace_back("seeds_compared", std::to_string(r.seeds_compared));
  s.emplace_back("verdict", r.verdict);
  std::ostringstream os;
  write_summary(os, s);
  write_file(out_dir / "compare_summary.txt", os.str());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  const auto range = text.find("..");
  if (range != std::string_view::npos) {
    const std::uint64_t lo = parse_u64(trim(text.substr(0, range)), text);
    const std::uint64_t hi = parse_u64(trim(text.substr(range + 2)), text);
    if (hi < lo || hi - lo > 100000) {
      throw ValidationError("invalid seed range '" + std::string(text) + "'");
    }
    for (std::uint64_t s = lo; s <= hi; ++s) {
      out.push_back(s);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_u64(trim(piece), text));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

std::vector<AdaptiveLaw> parse_law_list(std::string_view text) {
  std::vector<AdaptiveLaw> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_law(
        trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start))));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("RLSMRAC_PRESET_DIR"); env && *env) {
    return env;
  }
  return RLSMRAC_PRESET_DIR;
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  const auto dir = preset_directory();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ValidationError("preset directory '" + dir.string() + "' not found");
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") {
      continue;
    }
    const Scenario s = load_scenario(entry.path());
    out.push_back({entry.path().stem().string(), s.description, entry.path()});
  }
  std::sort(out.begin(), out.end(),
            [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  return out;
}

std::filesystem::path resolve_config(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    return arg;
  }
  const auto preset = preset_directory() / (arg + ".json");
  if (std::filesystem::is_regular_file(preset, ec)) {
    return preset;
  }
  throw ValidationError("config '" + arg + "' is neither a file nor a shipped preset");
}

}  // namespace rlsmrac
