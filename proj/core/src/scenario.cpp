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

#include "rlsmrac/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rlsmrac/errors.hpp"
#include "rlsmrac/integrator.hpp"

namespace rlsmrac {

namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

/// JSON object view that records which keys were read.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Node child(const std::string& key) {
    if (!has(key)) {
      fail(path(key), "missing section");
    }
    return Node(raw(key), path(key));
  }

  double number(const std::string& key, std::optional<double> fallback = {}) {
    if (!has(key)) {
      if (!fallback) {
        fail(path(key), "missing required number");
      }
      return *fallback;
    }
    const json& v = raw(key);
    if (!v.is_number()) {
      fail(path(key), "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      fail(path(key), "must be finite");
    }
    return d;
  }

  double positive(const std::string& key, std::optional<double> fallback = {}) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) {
      fail(path(key), "must be positive");
    }
    return d;
  }

  double nonnegative(const std::string& key, std::optional<double> fallback = {}) {
    const double d = number(key, fallback);
    if (!(d >= 0.0)) {
      fail(path(key), "must be nonnegative");
    }
    return d;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (v.is_number_unsigned()) {
      return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
      fail(path(key), "must be nonnegative");
    }
    fail(path(key), "expected an integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_boolean()) {
      fail(path(key), "expected true or false");
    }
    return v.get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = {}) {
    if (!has(key)) {
      if (!fallback) {
        fail(path(key), "missing required string");
      }
      return *fallback;
    }
    const json& v = raw(key);
    if (!v.is_string()) {
      fail(path(key), "expected a string");
    }
    return v.get<std::string>();
  }

  /// Array of numbers; a bare number becomes a one-element vector.
  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) {
      fail(path(key), "missing required array");
    }
    const json& v = raw(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
          fail(path(key) + "[" + std::to_string(i) + "]", "expected a number");
        }
        out.push_back(v[i].get<double>());
      }
    } else {
      fail(path(key), "expected a number or an array of numbers");
    }
    for (double d : out) {
      if (!std::isfinite(d)) {
        fail(path(key), "entries must be finite");
      }
    }
    return out;
  }

  Eigen::VectorXd vector(const std::string& key, int size) {
    const std::vector<double> v = numbers(key);
    if (v.size() == 1) {
      return Eigen::VectorXd::Constant(size, v[0]);
    }
    if (static_cast<int>(v.size()) != size) {
      fail(path(key), "expected 1 or " + std::to_string(size) + " entries, got " +
                          std::to_string(v.size()));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), size);
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        fail(path(it.key()), "unknown key");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Polynomial polynomial(Node& n, const std::string& key) {
  const std::vector<double> c = n.numbers(key);
  if (c.empty()) {
    fail(n.path(key), "needs at least one coefficient");
  }
  return Polynomial(c);
}

TransferFunction transfer_function(Node n) {
  const double gain = n.number("gain");
  Polynomial num = polynomial(n, "num");
  Polynomial den = polynomial(n, "den");
  n.finish();
  if (den.is_zero()) {
    fail(n.path("den"), "must not be the zero polynomial");
  }
  try {
    return TransferFunction(gain, std::move(num), std::move(den));
  } catch (const ValidationError& e) {
    fail(n.path("num"), e.what());
  }
}

LeadProfile parse_lead(Node n) {
  const std::string type = n.text("type");
  LeadProfile out;
  if (type == "constant") {
    out = ConstantLead{n.number("speed")};
  } else if (type == "ramp") {
    RampLead r;
    r.from = n.number("from");
    r.to = n.number("to");
    r.start = n.number("start");
    r.end = n.number("end");
    if (!(r.end > r.start)) {
      fail(n.path("end"), "must be greater than start");
    }
    out = r;
  } else if (type == "piecewise") {
    PiecewiseLead p;
    p.times = n.numbers("times");
    p.speeds = n.numbers("speeds");
    p.transition = n.positive("transition", 2.0);
    out = p;
  } else if (type == "sinusoid") {
    SinusoidLead s;
    s.mean = n.number("mean");
    s.amplitude = n.number("amplitude");
    s.period = n.positive("period");
    out = s;
  } else {
    fail(n.path("type"), "unknown lead profile '" + type +
                             "' (constant, ramp, piecewise, sinusoid)");
  }
  n.finish();
  try {
    validate_lead(out);
  } catch (const ValidationError& e) {
    fail(n.path("type"), e.what());
  }
  return out;
}

DisturbanceProfile parse_disturbance(Node n) {
  const std::string type = n.text("type");
  DisturbanceProfile out;
  if (type == "constant") {
    out = ConstantDisturbance{n.number("value", 0.0)};
  } else if (type == "grade_step") {
    GradeStepDisturbance g;
    g.time = n.nonnegative("time");
    g.slope_deg = n.number("slope_deg");
    if (std::abs(g.slope_deg) >= 90.0) {
      fail(n.path("slope_deg"), "must lie strictly between -90 and 90");
    }
    out = g;
  } else {
    fail(n.path("type"), "unknown disturbance '" + type + "' (constant, grade_step)");
  }
  n.finish();
  return out;
}

ReferenceSpec parse_reference(Node n) {
  const std::string type = n.text("type");
  ReferenceSpec out;
  if (type == "constant") {
    out = ConstantReference{n.number("value")};
  } else if (type == "step") {
    StepReference s;
    s.time = n.number("time", 0.0);
    s.before = n.number("before", 0.0);
    s.after = n.number("after", 1.0);
    out = s;
  } else if (type == "sines") {
    SinesReference s;
    s.amplitudes = n.numbers("amplitudes");
    s.frequencies = n.numbers("frequencies");
    if (n.has("phases")) {
      s.phases = n.numbers("phases");
    }
    out = s;
  } else if (type == "square") {
    SquareReference s;
    s.period = n.positive("period");
    s.amplitude = n.number("amplitude", 1.0);
    out = s;
  } else {
    fail(n.path("type"), "unknown reference '" + type +
                             "' (constant, step, sines, square)");
  }
  n.finish();
  try {
    validate_reference(out);
  } catch (const ValidationError& e) {
    fail(n.path("type"), e.what());
  }
  return out;
}

ProjectionBounds parse_bounds(Node n, int size) {
  ProjectionBounds b;
  b.lower = n.vector("lower", size);
  b.upper = n.vector("upper", size);
  n.finish();
  if (!((b.upper - b.lower).array() > 0.0).all()) {
    fail(n.path("upper"), "every upper bound must exceed its lower bound");
  }
  return b;
}

void parse_acc(Node& root, Scenario& s, AdaptiveLaw law, Node& law_node,
               const json* projection) {
  AccConfig& c = s.acc;
  c.law = law;

  {
    Node v = root.child("vehicle");
    if (v.has("mass")) {
      PhysicalVehicle p;
      p.mass = v.positive("mass");
      p.wheel_radius = v.positive("wheel_radius");
      p.wheel_inertia = v.nonnegative("wheel_inertia");
      p.damping = v.positive("damping");
      s.physical_vehicle = p;
      c.problem.vehicle = VehicleModel::from_physical(p.mass, p.wheel_radius,
                                                      p.wheel_inertia, p.damping);
    } else {
      c.problem.vehicle.a = v.positive("a");
      c.problem.vehicle.b = v.positive("b");
    }
    v.finish();
  }
  if (root.has("disturbance")) {
    c.problem.disturbance_profile = parse_disturbance(root.child("disturbance"));
  }
  if (root.has("spacing")) {
    Node sp = root.child("spacing");
    c.problem.spacing.s0 = sp.positive("s0", c.problem.spacing.s0);
    c.problem.spacing.h = sp.positive("h", c.problem.spacing.h);
    sp.finish();
  }
  if (root.has("refmodel")) {
    Node rm = root.child("refmodel");
    c.problem.refmodel.am = rm.positive("am", c.problem.refmodel.am);
    c.problem.refmodel.k = rm.positive("k", c.problem.refmodel.k);
    rm.finish();
  }
  if (root.has("lead")) {
    c.problem.lead = parse_lead(root.child("lead"));
  }

  if (law_node.has("gamma")) {
    c.gamma = law_node.vector("gamma", 3);
    if (!(c.gamma.array() > 0.0).all()) {
      fail(law_node.path("gamma"), "entries must be positive");
    }
  }
  if (law_node.has("p0")) {
    c.rls.p0_diag = law_node.vector("p0", 3);
  }

  if (projection) {
    c.bounds = parse_bounds(Node(*projection, "projection"), 3);
  }

  if (root.has("initial")) {
    Node in = root.child("initial");
    c.v0 = in.number("v", c.v0);
    c.x_r0 = in.positive("x_r", c.x_r0);
    if (in.has("v_m")) {
      c.v_m0 = in.number("v_m");
    }
    if (in.has("k")) {
      c.k0 = in.vector("k", 3);
    }
    in.finish();
  }
  if (!c.bounds.contains(c.k0)) {
    fail("initial.k", "lies outside the projection bounds");
  }
}

void parse_generic(Node& root, Scenario& s, AdaptiveLaw law, Node& law_node,
                   const json* projection) {
  MracConfig& c = s.mrac;
  c.law = law;
  c.plant = transfer_function(root.child("plant"));
  c.refmodel = transfer_function(root.child("refmodel"));
  const int m = 2 * c.plant.order();
  if (root.has("lambda0")) {
    c.lambda0 = polynomial(root, "lambda0");
  }
  c.reference = parse_reference(root.child("reference"));

  if (law_node.has("gamma")) {
    c.gamma_diag = law_node.vector("gamma", m);
    if (!(c.gamma_diag.array() > 0.0).all()) {
      fail(law_node.path("gamma"), "entries must be positive");
    }
  }
  if (law_node.has("p0")) {
    c.rls.p0_diag = law_node.vector("p0", m);
  }
  if (projection) {
    c.projection = parse_bounds(Node(*projection, "projection"), m);
  }

  if (root.has("initial")) {
    Node in = root.child("initial");
    if (in.has("theta")) {
      c.theta0 = in.vector("theta", m);
    }
    c.start_at_ideal = in.boolean("at_ideal", false);
    if (in.has("plant_x")) {
      c.plant_x0 = in.vector("plant_x", c.plant.order());
    }
    in.finish();
  }
}

json to_json(const ProjectionBounds& b) {
  return {{"lower", to_std(b.lower)}, {"upper", to_std(b.upper)}};
}

json to_json(const TransferFunction& tf) {
  return {{"gain", tf.gain()}, {"num", tf.num().coeffs()}, {"den", tf.den().coeffs()}};
}

json to_json(const LeadProfile& lead) {
  return std::visit(
      Overloaded{
          [](const ConstantLead& c) { return json{{"type", "constant"}, {"speed", c.speed}}; },
          [](const RampLead& r) {
            return json{{"type", "ramp"}, {"from", r.from}, {"to", r.to},
                        {"start", r.start}, {"end", r.end}};
          },
          [](const PiecewiseLead& p) {
            return json{{"type", "piecewise"}, {"times", p.times},
                        {"speeds", p.speeds}, {"transition", p.transition}};
          },
          [](const SinusoidLead& s) {
            return json{{"type", "sinusoid"}, {"mean", s.mean},
                        {"amplitude", s.amplitude}, {"period", s.period}};
          },
      },
      lead);
}

json to_json(const DisturbanceProfile& d) {
  return std::visit(
      Overloaded{
          [](const ConstantDisturbance& c) { return json{{"type", "constant"}, {"value", c.value}}; },
          [](const GradeStepDisturbance& g) {
            return json{{"type", "grade_step"}, {"time", g.time}, {"slope_deg", g.slope_deg}};
          },
      },
      d);
}

json to_json(const ReferenceSpec& r) {
  return std::visit(
      Overloaded{
          [](const ConstantReference& c) { return json{{"type", "constant"}, {"value", c.value}}; },
          [](const StepReference& s) {
            return json{{"type", "step"}, {"time", s.time}, {"before", s.before}, {"after", s.after}};
          },
          [](const SinesReference& s) {
            json j{{"type", "sines"}, {"amplitudes", s.amplitudes}, {"frequencies", s.frequencies}};
            if (!s.phases.empty()) {
              j["phases"] = s.phases;
            }
            return j;
          },
          [](const SquareReference& s) {
            return json{{"type", "square"}, {"period", s.period}, {"amplitude", s.amplitude}};
          },
      },
      r);
}

}  // namespace

std::string_view to_string(ScenarioMode mode) {
  return mode == ScenarioMode::kAcc ? "acc" : "generic-mrac";
}

AdaptiveLaw Scenario::law() const {
  return mode == ScenarioMode::kAcc ? acc.law : mrac.law;
}

bool Scenario::analysis_mode() const {
  const RlsMode m = mode == ScenarioMode::kAcc ? acc.mode : mrac.mode;
  return m == RlsMode::kAnalysis;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }

  Node root(doc, "");
  Scenario s;
  s.name = root.text("name");
  s.description = root.text("description", "");
  const std::string mode = root.text("mode");
  if (mode == "acc") {
    s.mode = ScenarioMode::kAcc;
  } else if (mode == "generic-mrac") {
    s.mode = ScenarioMode::kGenericMrac;
  } else {
    fail("mode", "expected 'acc' or 'generic-mrac', got '" + mode + "'");
  }
  const RlsMode rls_mode =
      root.boolean("analysis_mode", false) ? RlsMode::kAnalysis : RlsMode::kRealizable;

  Node law_node = root.child("law");
  AdaptiveLaw law;
  try {
    law = parse_law(law_node.text("type"));
  } catch (const ValidationError& e) {
    fail(law_node.path("type"), e.what());
  }
  RlsSettings rls;
  rls.beta = law_node.nonnegative("beta", rls.beta);
  rls.rho_max = law_node.positive("rho_max", rls.rho_max);
  rls.normalize = law_node.boolean("normalize", false);

  PeSettings pe;
  if (root.has("pe")) {
    Node p = root.child("pe");
    pe.window = p.positive("window", pe.window);
    pe.alpha0 = p.positive("alpha0", pe.alpha0);
    p.finish();
  }

  const json* projection = nullptr;
  if (root.has("projection")) {
    projection = &root.raw("projection");
  }

  if (s.mode == ScenarioMode::kAcc) {
    s.acc.rls = rls;
    parse_acc(root, s, law, law_node, projection);
    s.acc.mode = rls_mode;
    s.acc.pe = pe;
  } else {
    s.mrac.rls = rls;
    parse_generic(root, s, law, law_node, projection);
    s.mrac.mode = rls_mode;
    s.mrac.pe = pe;
  }
  law_node.finish();

  Node sim = root.child("sim");
  const double dt = sim.positive("dt", kDefaultStep);
  const double t_final = sim.positive("t_final", s.mode == ScenarioMode::kAcc ? 60.0 : 50.0);
  if (!(t_final > dt)) {
    fail("sim.t_final", "must exceed sim.dt");
  }
  s.seed = sim.unsigned_integer("seed", 1);
  const double sigma = sim.nonnegative("noise_sigma", 0.0);
  const std::uint64_t every = sim.unsigned_integer("output_every", 10);
  if (every < 1 || every > 1000000) {
    fail("sim.output_every", "must be between 1 and 1000000");
  }
  s.output_every = static_cast<int>(every);
  const double max_abs = sim.positive("max_abs_signal", 1e6);
  const bool composite = sim.boolean("track_composite_error", false);
  sim.finish();

  if (s.mode == ScenarioMode::kAcc) {
    if (composite) {
      fail("sim.track_composite_error", "only available in generic-mrac mode");
    }
    s.acc.dt = dt;
    s.acc.t_final = t_final;
    s.acc.seed = s.seed;
    s.acc.noise_sigma = sigma;
    s.acc.max_abs_signal = max_abs;
  } else {
    if (sigma != 0.0) {
      fail("sim.noise_sigma", "measurement noise is only modelled in acc mode");
    }
    s.mrac.dt = dt;
    s.mrac.t_final = t_final;
    s.mrac.max_abs_signal = max_abs;
    s.mrac.track_composite_error = composite;
  }
  root.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string canonical_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["mode"] = std::string(to_string(s.mode));
  j["analysis_mode"] = s.analysis_mode();

  json law{{"type", std::string(to_string(s.law()))}};
  json sim{{"seed", s.seed}, {"output_every", s.output_every}};
  json pe;

  if (s.mode == ScenarioMode::kAcc) {
    const AccConfig& c = s.acc;
    law["gamma"] = to_std(c.gamma);
    law["beta"] = c.rls.beta;
    law["p0"] = c.rls.p0_diag.size() ? to_std(c.rls.p0_diag) : std::vector<double>{100.0};
    law["rho_max"] = c.rls.rho_max;
    law["normalize"] = c.rls.normalize;
    if (s.physical_vehicle) {
      const PhysicalVehicle& p = *s.physical_vehicle;
      j["vehicle"] = {{"mass", p.mass}, {"wheel_radius", p.wheel_radius},
                      {"wheel_inertia", p.wheel_inertia}, {"damping", p.damping}};
    } else {
      j["vehicle"] = {{"a", c.problem.vehicle.a}, {"b", c.problem.vehicle.b}};
    }
    j["disturbance"] = to_json(c.problem.disturbance_profile);
    j["spacing"] = {{"s0", c.problem.spacing.s0}, {"h", c.problem.spacing.h}};
    j["refmodel"] = {{"am", c.problem.refmodel.am}, {"k", c.problem.refmodel.k}};
    j["lead"] = to_json(c.problem.lead);
    j["projection"] = to_json(c.bounds);
    json initial{{"v", c.v0}, {"x_r", c.x_r0}, {"k", to_std(c.k0)}};
    if (!std::isnan(c.v_m0)) {
      initial["v_m"] = c.v_m0;
    }
    j["initial"] = initial;
    sim["dt"] = c.dt;
    sim["t_final"] = c.t_final;
    sim["noise_sigma"] = c.noise_sigma;
    sim["max_abs_signal"] = c.max_abs_signal;
    pe = {{"window", c.pe.window}, {"alpha0", c.pe.alpha0}};
  } else {
    const MracConfig& c = s.mrac;
    law["gamma"] = to_std(c.gamma_diag);
    law["beta"] = c.rls.beta;
    law["p0"] = c.rls.p0_diag.size() ? to_std(c.rls.p0_diag) : std::vector<double>{100.0};
    law["rho_max"] = c.rls.rho_max;
    law["normalize"] = c.rls.normalize;
    j["plant"] = to_json(c.plant);
    j["refmodel"] = to_json(c.refmodel);
    if (c.lambda0) {
      j["lambda0"] = c.lambda0->coeffs();
    }
    j["reference"] = to_json(c.reference);
    if (c.projection) {
      j["projection"] = to_json(*c.projection);
    }
    json initial{{"at_ideal", c.start_at_ideal}};
    if (c.theta0.size()) {
      initial["theta"] = to_std(c.theta0);
    }
    if (c.plant_x0.size()) {
      initial["plant_x"] = to_std(c.plant_x0);
    }
    j["initial"] = initial;
    sim["dt"] = c.dt;
    sim["t_final"] = c.t_final;
    sim["max_abs_signal"] = c.max_abs_signal;
    sim["track_composite_error"] = c.track_composite_error;
    pe = {{"window", c.pe.window}, {"alpha0", c.pe.alpha0}};
  }
  j["law"] = law;
  j["sim"] = sim;
  j["pe"] = pe;
  return j.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(s))));
  return buf;
}

void apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  if (o.seed) {
    s.seed = *o.seed;
    s.acc.seed = *o.seed;
  }
  if (o.law) {
    s.acc.law = *o.law;
    s.mrac.law = *o.law;
  }
  if (o.analysis_mode) {
    s.acc.mode = RlsMode::kAnalysis;
    s.mrac.mode = RlsMode::kAnalysis;
  }
}

}  // namespace rlsmrac
