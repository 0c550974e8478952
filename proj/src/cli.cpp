#include "dirtyregion/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dirtyregion/figures.hpp"
#include "dirtyregion/ic.hpp"
#include "dirtyregion/mac_helper.hpp"
#include "dirtyregion/mc_oracle.hpp"
#include "dirtyregion/z_ic.hpp"

namespace dirtyregion {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Bad scenario content; maps to the usage exit code.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& param_names(const std::string& model) {
  static const std::vector<std::string> mac{"P0", "P1", "P2", "Q"};
  static const std::vector<std::string> zic{"a", "P1", "P2", "Q1", "Q2", "rho"};
  static const std::vector<std::string> ic{"a", "b", "P1", "P2", "Q1", "Q2", "rho"};
  if (model == "mac_helper") return mac;
  if (model == "zic") return zic;
  if (model == "ic") return ic;
  throw ScenarioError("unknown model '" + model + "' (expected mac_helper, zic or ic)");
}

const std::set<std::string> kAnalyses{"bounds", "classify", "verystrong", "strong", "weak"};

struct Command {
  std::string model;
  std::string analysis;
};

std::optional<Command> command_target(const std::string& name) {
  static const std::map<std::string, Command> table{
      {"mac-bounds", {"mac_helper", "bounds"}},   {"mac-classify", {"mac_helper", "classify"}},
      {"zic-verystrong", {"zic", "verystrong"}},  {"zic-strong", {"zic", "strong"}},
      {"zic-weak", {"zic", "weak"}},              {"ic-verystrong", {"ic", "verystrong"}},
      {"ic-strong", {"ic", "strong"}},            {"ic-weak", {"ic", "weak"}},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool valid_pair(const std::string& model, const std::string& analysis) {
  if (model == "mac_helper") return analysis == "bounds" || analysis == "classify";
  return analysis == "verystrong" || analysis == "strong" || analysis == "weak";
}

// ---------------------------------------------------------------- scenario

struct Scenario {
  std::string model;
  std::map<std::string, double> params;
  std::string analysis;
  json sweep = json::object();
  InnerGridSpec inner;
  std::size_t rho_points = 257;
  SegmentScan scan;
  std::optional<double> p1dd;
  std::uint64_t seed = 0x5EED;
  std::size_t samples = 1000000;
  double tolerance = 0.01;
  std::string out_dir;
};

double number_at(const json& v, const std::string& key) {
  if (!v.is_number()) throw ScenarioError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError("'" + key + "' must be finite");
  return x;
}

std::size_t count_at(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ScenarioError("'" + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

/// Override values are parsed as JSON when possible, else kept as strings.
json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ScenarioError("override '" + spec + "' is not of the form key=value");
  std::string key = spec.substr(0, eq);
  const json value = parse_override_value(spec.substr(eq + 1));
  static const std::set<std::string> top{"model", "analysis", "seed", "samples", "tolerance",
                                         "P1dd"};
  if (key.find('.') == std::string::npos && !top.count(key)) key = "params." + key;
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ScenarioError("override key '" + key + "' is malformed");
    if (!node->is_object()) throw ScenarioError("override '" + key + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  static const std::set<std::string> known{"model", "analysis", "params", "sweep",
                                           "grid",  "seed",     "samples", "tolerance",
                                           "P1dd",  "output"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) throw ScenarioError("unknown scenario key '" + k + "'");

  Scenario s;
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) throw ScenarioError("'model' must be a string");
    s.model = doc["model"].get<std::string>();
    param_names(s.model);
  }
  if (doc.contains("analysis")) {
    if (!doc["analysis"].is_string()) throw ScenarioError("'analysis' must be a string");
    s.analysis = doc["analysis"].get<std::string>();
  }
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw ScenarioError("'params' must be an object");
    for (const auto& [k, v] : doc["params"].items()) s.params[k] = number_at(v, k);
  }
  if (doc.contains("sweep")) {
    if (!doc["sweep"].is_object()) throw ScenarioError("'sweep' must be an object");
    s.sweep = doc["sweep"];
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object()) throw ScenarioError("'grid' must be an object");
    for (const auto& [k, v] : g.items()) {
      if (k == "alpha_points") s.inner.alpha_points = count_at(v, k);
      else if (k == "beta_points") s.inner.beta_points = count_at(v, k);
      else if (k == "r1_points") s.inner.r1_points = count_at(v, k);
      else if (k == "rho_points") s.rho_points = count_at(v, k);
      else if (k == "segment_points") s.scan.points = count_at(v, k);
      else if (k == "refine") {
        if (!v.is_boolean()) throw ScenarioError("'grid.refine' must be a boolean");
        s.inner.refine = v.get<bool>();
      } else throw ScenarioError("unknown grid key '" + k + "'");
    }
    if (s.inner.r1_points < 2 || s.rho_points < 2 || s.scan.points < 2)
      throw ScenarioError("grid sizes must be at least 2");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ScenarioError("'seed' must be a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) s.samples = count_at(doc["samples"], "samples");
  if (doc.contains("tolerance")) {
    s.tolerance = number_at(doc["tolerance"], "tolerance");
    if (s.tolerance <= 0) throw ScenarioError("'tolerance' must be positive");
  }
  if (doc.contains("P1dd")) s.p1dd = number_at(doc["P1dd"], "P1dd");
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) throw ScenarioError("'output' must be an object");
    for (const auto& [k, v] : o.items()) {
      if (k != "dir" || !v.is_string()) throw ScenarioError("'output' only takes a string 'dir'");
      s.out_dir = v.get<std::string>();
    }
  }
  return s;
}

void check_params(const Scenario& s) {
  const auto& names = param_names(s.model);
  for (const auto& [k, v] : s.params)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw ScenarioError("parameter '" + k + "' does not belong to model " + s.model);
  for (const auto& n : names)
    if (n != "rho" && !s.params.count(n))
      throw ScenarioError("missing parameter '" + n + "' for model " + s.model);
}

double param(const std::map<std::string, double>& p, const std::string& k) {
  auto it = p.find(k);
  return it == p.end() ? 0.0 : it->second;
}

MacHelperParams mac_params(const std::map<std::string, double>& p) {
  MacHelperParams m{param(p, "P0"), param(p, "P1"), param(p, "P2"), param(p, "Q")};
  m.validate();
  return m;
}

ZicParams zic_params(const std::map<std::string, double>& p) {
  ZicParams z{param(p, "a"), param(p, "P1"), param(p, "P2"), param(p, "Q1"), param(p, "Q2"),
              param(p, "rho")};
  z.validate();
  return z;
}

IcParams ic_params(const std::map<std::string, double>& p) {
  IcParams c{param(p, "a"),  param(p, "b"),  param(p, "P1"), param(p, "P2"),
             param(p, "Q1"), param(p, "Q2"), param(p, "rho")};
  c.validate();
  return c;
}

// ---------------------------------------------------------------- reports

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json condition_json(const ConditionReport& r) {
  json j;
  j["condition"] = r.condition;
  j["pass"] = r.pass;
  j["margin"] = num(r.margin);
  json w = json::object();
  for (const auto& [k, v] : r.witness) w[k] = num(v);
  j["witness"] = w;
  j["notes"] = r.notes;
  return j;
}

json pentagon_json(const Pentagon& p) {
  return json{{"r1_max", num(p.m1)}, {"r2_max", num(p.m2)}, {"sum_max", num(p.m12)}};
}

json region_json(const RateRegion& r) {
  return json{{"max_r1", num(r.max_r1())},
              {"max_r2", num(r.max_r2())},
              {"max_sum", num(r.max_sum())},
              {"pentagons", r.pentagons.size()}};
}

json segment_json(const StrongSegment& s) {
  json j;
  j["empty"] = s.empty;
  j["p1dd_lo"] = num(s.empty ? NAN : s.p1dd_lo);
  j["p1dd_hi"] = num(s.empty ? NAN : s.p1dd_hi);
  j["from"] = json{{"r1", num(s.empty ? NAN : s.from.r1)}, {"r2", num(s.empty ? NAN : s.from.r2)}};
  j["to"] = json{{"r1", num(s.empty ? NAN : s.to.r1)}, {"r2", num(s.empty ? NAN : s.to.r2)}};
  j["prefix_property"] = s.prefix_property;
  j["swapped"] = s.swapped;
  json iv = json::array();
  for (const auto& i : s.passing) iv.push_back(json::array({i.lo, i.hi}));
  j["passing"] = iv;
  return j;
}

json strong_point_json(const StrongPointResult& r) {
  json j;
  j["P1p"] = r.split.P1p;
  j["P1dd"] = r.split.P1dd;
  j["coefficients"] = json{{"alpha1", r.coefficients.alpha1},
                           {"alpha2", r.coefficients.alpha2},
                           {"beta", r.coefficients.beta}};
  j["rates"] = json{{"r1_layer1", num(r.rates.r1_layer1)}, {"r1_layer2", num(r.rates.r1_layer2)},
                    {"r1", num(r.rates.r1)},               {"r2", num(r.rates.r2)}};
  j["condition"] = condition_json(r.condition);
  j["closed_form_margin"] = num(r.closed_form_margin);
  j["swapped"] = r.swapped;
  return j;
}

struct Outcome {
  json result = json::object();
  std::string status = "ok";
  int code = kExitOk;
};

void fail(Outcome& o, const std::string& status) {
  o.status = status;
  o.code = kExitConditionFailed;
}

// Files written by the bounds analysis when an output directory is set.
struct Artifacts {
  fs::path dir;
  bool convexify = false;
  std::vector<std::string> written;
};

Outcome mac_bounds(const Scenario& s, Artifacts* art) {
  const auto p = mac_params(s.params);
  Outcome o;
  auto outer = outer_envelope(p, s.rho_points, s.inner.r1_points);
  auto inner = inner_envelope(p, s.inner);
  if (art && art->convexify) {
    outer.boundary = concave_envelope(outer.boundary);
    inner.boundary = concave_envelope(inner.boundary);
  }
  o.result["outer"] = region_json(outer);
  o.result["inner"] = region_json(inner);
  o.result["convexified"] = art && art->convexify;
  if (art && !art->dir.empty()) {
    fs::create_directories(art->dir);
    export_csv(outer.boundary, art->dir / "mac_outer.csv");
    export_csv(inner.boundary, art->dir / "mac_inner.csv");
    PlotSpec plot{"MAC with helper: inner and outer bounds", "R1 (bits)", "R2 (bits)",
                  {{"outer bound", outer.boundary.points, false},
                   {"inner bound", inner.boundary.points, false}}};
    export_svg(plot, art->dir / "mac_bounds.svg");
    for (const char* f : {"mac_outer.csv", "mac_inner.csv", "mac_bounds.svg"})
      art->written.push_back((art->dir / f).string());
  }
  return o;
}

Outcome mac_classify(const Scenario& s) {
  const auto p = mac_params(s.params);
  Outcome o;
  const auto seg = capacity_segments(p);
  const auto& c = seg.classification;
  o.result["case_id"] = c.case_id;
  o.result["case_name"] = c.case_name;
  static const char* faces[3] = {"r1", "r2", "sum"};
  json labels;
  for (int k = 0; k < 3; ++k) labels[faces[k]] = std::string(1, label_char(c.index[k].label));
  o.result["labels"] = labels;
  json idx;
  for (int k = 0; k < 3; ++k) {
    const auto& r = c.index[k];
    idx[faces[k]] = json{{"power", r.power},
                         {"rho_star", num(r.rho_star)},
                         {"alpha", num(r.optimizer.alpha)},
                         {"beta", num(r.optimizer.beta)},
                         {"f", num(r.f_value)},
                         {"g", num(r.g_value)},
                         {"c_margin", num(r.c_margin)},
                         {"c_alpha", num(r.c_alpha)}};
  }
  o.result["index"] = idx;
  json segs;
  for (int k = 0; k < 3; ++k)
    segs[faces[k]] = json{{"face", seg.segments[k].face},
                          {"characterized", seg.segments[k].characterized},
                          {"capacity", num(seg.segments[k].value)}};
  o.result["segments"] = segs;
  const auto full = full_capacity_check(p);
  o.result["full_capacity"] = condition_json(full.report);
  if (full.report.pass) o.result["full_capacity"]["region"] = pentagon_json(full.region);
  return o;
}

Outcome zic_verystrong(const Scenario& s) {
  const auto p = zic_params(s.params);
  Outcome o;
  o.result["gate"] = "a^2 > 1 + P1";
  if (!(p.a * p.a > 1.0 + p.P1)) {
    o.result["gate_pass"] = false;
    fail(o, "gate_violation");
    return o;
  }
  o.result["gate_pass"] = true;
  const auto r = zic_vs_capacity(p);
  o.result["coefficients"] = json{{"alpha1", r.coefficients.alpha1},
                                  {"alpha2", r.coefficients.alpha2},
                                  {"beta", r.coefficients.beta}};
  o.result["d"] = r.decomposition.coefficient;
  o.result["condition"] = condition_json(r.condition.report);
  o.result["closed_form_margin"] = num(r.condition.closed_form_margin);
  o.result["corrected_margin"] = num(r.condition.corrected_margin);
  o.result["formula_discrepancy"] = r.condition.formula_discrepancy;
  o.result["rate1"] = num(r.rate1);
  o.result["rate2"] = num(r.rate2);
  o.result["characterized"] = r.characterized;
  if (r.characterized)
    o.result["region"] = pentagon_json(r.region);
  else
    fail(o, "condition_failed");
  return o;
}

Outcome zic_strong(const Scenario& s) {
  const auto p = zic_params(s.params);
  Outcome o;
  o.result["gate"] = "1 <= a^2 < 1 + P1";
  try {
    check_zic_strong_gate(p);
  } catch (const RegimeGateError&) {
    o.result["gate_pass"] = false;
    fail(o, "gate_violation");
    return o;
  }
  o.result["gate_pass"] = true;
  o.result["sum_capacity"] = half_log2(1.0 + p.P1 + p.a * p.a * p.P2);
  if (s.p1dd) {
    const auto r = zic_strong_point(p, *s.p1dd);
    o.result["point"] = strong_point_json(r);
    if (!r.condition.pass) fail(o, "condition_failed");
  } else {
    const auto seg = zic_strong_segment(p, s.scan);
    o.result["segment"] = segment_json(seg);
    if (seg.empty) fail(o, "condition_failed");
  }
  return o;
}

Outcome zic_weak(const Scenario& s) {
  const auto p = zic_params(s.params);
  Outcome o;
  o.result["gate"] = "a^2 <= 1";
  if (!(p.a * p.a <= 1.0)) {
    o.result["gate_pass"] = false;
    fail(o, "gate_violation");
    return o;
  }
  o.result["gate_pass"] = true;
  o.result["sum_capacity"] = zic_weak_sum_capacity(p);
  return o;
}

Outcome ic_verystrong(const Scenario& s) {
  const auto p = ic_params(s.params);
  Outcome o;
  o.result["gate"] = "P1 + a^2 P2 + 1 and b^2 P1 + P2 + 1 exceed (1 + P1)(1 + P2)";
  if (!ic_vs_gate(p)) {
    o.result["gate_pass"] = false;
    fail(o, "gate_violation");
    return o;
  }
  o.result["gate_pass"] = true;
  const auto r = ic_vs_capacity(p);
  const auto& k = r.coefficients;
  o.result["coefficients"] = json{
      {"alpha1", k.alpha1}, {"alpha2", k.alpha2}, {"beta1", k.beta1}, {"beta2", k.beta2}};
  o.result["max_residual"] = std::max({std::abs(r.residuals[0]), std::abs(r.residuals[1]),
                                       std::abs(r.residuals[2]), std::abs(r.residuals[3])});
  o.result["condition1"] = condition_json(r.conditions.first);
  o.result["condition2"] = condition_json(r.conditions.second);
  o.result["rate1"] = num(r.rate1);
  o.result["rate2"] = num(r.rate2);
  o.result["characterized"] = r.characterized;
  if (r.characterized)
    o.result["region"] = pentagon_json(r.region);
  else
    fail(o, "condition_failed");
  return o;
}

Outcome ic_strong(const Scenario& s) {
  const auto p = ic_params(s.params);
  Outcome o;
  o.result["gate"] = "a, b >= 1 and min(P1 + a^2 P2 + 1, b^2 P1 + P2 + 1) <= (1 + P1)(1 + P2)";
  if (!ic_strong_gate(p)) {
    o.result["gate_pass"] = false;
    fail(o, "gate_violation");
    return o;
  }
  o.result["gate_pass"] = true;
  bool swapped = false;
  const auto q = ic_strong_orient(p, swapped);
  o.result["sum_capacity"] = half_log2(1.0 + q.P1 + q.a * q.a * q.P2);
  if (s.p1dd) {
    const auto r = ic_strong_point(p, *s.p1dd);
    o.result["point"] = strong_point_json(r);
    if (!r.condition.pass) fail(o, "condition_failed");
  } else {
    const auto seg = ic_strong_segment(p, s.scan);
    o.result["segment"] = segment_json(seg);
    if (seg.empty) fail(o, "condition_failed");
  }
  return o;
}

Outcome ic_weak(const Scenario& s) {
  const auto p = ic_params(s.params);
  Outcome o;
  const auto gate = ic_weak_gate(p);
  o.result["gate"] = gate.condition;
  o.result["gate_pass"] = gate.pass;
  o.result["gate_margin"] = num(gate.margin);
  if (!gate.pass) {
    fail(o, "gate_violation");
    return o;
  }
  o.result["sum_capacity"] = ic_weak_sum_capacity(p);
  return o;
}

Outcome analyze(const Scenario& s, const std::string& analysis, Artifacts* art) {
  if (s.model == "mac_helper") {
    if (analysis == "bounds") return mac_bounds(s, art);
    if (analysis == "classify") return mac_classify(s);
  } else if (s.model == "zic") {
    if (analysis == "verystrong") return zic_verystrong(s);
    if (analysis == "strong") return zic_strong(s);
    if (analysis == "weak") return zic_weak(s);
  } else if (s.model == "ic") {
    if (analysis == "verystrong") return ic_verystrong(s);
    if (analysis == "strong") return ic_strong(s);
    if (analysis == "weak") return ic_weak(s);
  }
  throw ScenarioError("analysis '" + analysis + "' is not available for model " + s.model);
}

json params_json(const Scenario& s) {
  json j;
  for (const auto& n : param_names(s.model)) j[n] = param(s.params, n);
  return j;
}

json envelope(const std::string& command, const Scenario& s, const Outcome& o) {
  json j;
  j["command"] = command;
  j["model"] = s.model;
  j["units"] = "bits";
  j["params"] = params_json(s);
  j["status"] = o.status;
  j["result"] = o.result;
  return j;
}

// ---------------------------------------------------------------- sweep

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char ch : v) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void flatten(const json& j, const std::string& prefix, std::vector<std::string>& keys,
             std::map<std::string, std::string>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, keys, out);
      continue;
    }
    if (v.is_array()) continue;
    std::string text;
    if (v.is_null()) text = "nan";
    else if (v.is_boolean()) text = v.get<bool>() ? "true" : "false";
    else if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number_float()) text = format_number(v.get<double>());
    else text = v.dump();
    keys.push_back(key);
    out[key] = text;
  }
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

std::vector<Axis> sweep_axes(const Scenario& s) {
  if (!s.sweep.contains("axes") || !s.sweep["axes"].is_array())
    throw ScenarioError("sweep needs an 'axes' array");
  const auto& arr = s.sweep["axes"];
  if (arr.empty() || arr.size() > 2) throw ScenarioError("sweep takes one or two axes");
  const auto& names = param_names(s.model);
  std::vector<Axis> axes;
  for (const auto& a : arr) {
    if (!a.is_object() || !a.contains("param") || !a["param"].is_string())
      throw ScenarioError("each sweep axis needs a 'param' name");
    Axis ax;
    ax.name = a["param"].get<std::string>();
    if (std::find(names.begin(), names.end(), ax.name) == names.end())
      throw ScenarioError("sweep axis '" + ax.name + "' is not a parameter of " + s.model);
    for (const auto& [k, v] : a.items())
      if (k != "param" && k != "lo" && k != "hi" && k != "steps")
        throw ScenarioError("unknown sweep axis key '" + k + "'");
    if (!a.contains("lo") || !a.contains("steps"))
      throw ScenarioError("sweep axis '" + ax.name + "' needs lo and steps");
    const double lo = number_at(a["lo"], "lo");
    const std::size_t steps = count_at(a["steps"], "steps");
    const double hi = a.contains("hi") ? number_at(a["hi"], "hi") : lo;
    if (steps == 1) {
      if (hi != lo) throw ScenarioError("a one-step axis needs hi == lo");
      ax.values = {lo};
    } else {
      if (!(hi > lo)) throw ScenarioError("sweep axis '" + ax.name + "' needs hi > lo");
      ax.values = linspace({lo, hi}, steps);
    }
    axes.push_back(std::move(ax));
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name)
    throw ScenarioError("sweep axes must name different parameters");
  return axes;
}

struct SweepRow {
  std::vector<std::string> keys;
  std::map<std::string, std::string> values;
};

SweepRow sweep_point(const Scenario& base, const std::string& analysis,
                     const std::vector<std::pair<std::string, double>>& point) {
  Scenario s = base;
  for (const auto& [k, v] : point) s.params[k] = v;
  SweepRow row;
  std::string status;
  int code = kExitOk;
  json result = json::object();
  try {
    const auto o = analyze(s, analysis, nullptr);
    status = o.status;
    code = o.code;
    result = o.result;
  } catch (const NumericError&) {
    status = "numeric_error";
    code = kExitNumeric;
  } catch (const SingularCovarianceError&) {
    status = "numeric_error";
    code = kExitNumeric;
  } catch (const SingularCoefficientError&) {
    status = "numeric_error";
    code = kExitNumeric;
  } catch (const std::invalid_argument&) {
    status = "invalid_parameters";
    code = kExitUsage;
  } catch (const RegimeGateError&) {
    status = "gate_violation";
    code = kExitConditionFailed;
  }
  row.keys = {"status", "exit_code"};
  row.values["status"] = status;
  row.values["exit_code"] = std::to_string(code);
  flatten(result, "", row.keys, row.values);
  return row;
}

Table run_sweep(const Scenario& s, const std::string& analysis) {
  const auto axes = sweep_axes(s);
  std::vector<std::vector<std::pair<std::string, double>>> points;
  if (axes.size() == 1) {
    for (double x : axes[0].values) points.push_back({{axes[0].name, x}});
  } else {
    for (double x : axes[0].values)
      for (double y : axes[1].values) points.push_back({{axes[0].name, x}, {axes[1].name, y}});
  }

  std::vector<SweepRow> rows(points.size());
  const long long n = static_cast<long long>(points.size());
  const int jobs = parallel_jobs();
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (long long i = 0; i < n; ++i) rows[i] = sweep_point(s, analysis, points[i]);

  Table t;
  for (const auto& a : axes) t.header.push_back(a.name);
  std::set<std::string> seen;
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (const auto& k : r.keys)
      if (seen.insert(k).second) cols.push_back(k);
  for (const auto& c : cols) t.header.push_back(csv_field(c));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> line;
    for (const auto& [k, v] : points[i]) line.push_back(format_number(v));
    for (const auto& c : cols) {
      auto it = rows[i].values.find(c);
      line.push_back(it == rows[i].values.end() ? "" : csv_field(it->second));
    }
    t.rows.push_back(std::move(line));
  }
  return t;
}

std::string table_text(const Table& t) {
  std::string s;
  auto join = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += '\n';
  };
  join(t.header);
  for (const auto& r : t.rows) join(r);
  return s;
}

// ---------------------------------------------------------------- verify

struct MiTerm {
  std::string label;
  VarList a, b, c;
};

struct VerifySystem {
  std::string design;
  LinearGaussianSystem sys;
  std::vector<MiTerm> terms;
};

std::vector<VerifySystem> verify_systems(const Scenario& s) {
  std::vector<VerifySystem> out;
  if (s.model == "mac_helper") {
    const auto p = mac_params(s.params);
    const auto k = optimal_coefficients(p, p.P1);
    out.push_back({"dpc_optimizer",
                   build_mac_helper(p, k.alpha, k.beta),
                   {{"I(U;S)", {"U"}, {"S"}, {}},
                    {"I(U,X1;Y|X2)", {"U", "X1"}, {"Y"}, {"X2"}},
                    {"I(X1;Y|X2,U)", {"X1"}, {"Y"}, {"X2", "U"}},
                    {"I(X1,X2;Y|U)", {"X1", "X2"}, {"Y"}, {"U"}}}});
    return out;
  }
  if (s.model == "zic") {
    const auto p = zic_params(s.params);
    out.push_back({"very_strong_dpc",
                   build_zic_verystrong(p, zic_vs_coefficients(p)),
                   {{"I(V;Y1)", {"V"}, {"Y1"}, {}},
                    {"I(V;Y2)", {"V"}, {"Y2"}, {}},
                    {"I(U;V,Y1)", {"U"}, {"V", "Y1"}, {}},
                    {"I(S1p,S2;U)", {"S1p", "S2"}, {"U"}, {}}}});
    IcParams q{p.a, 0.0, p.P1, p.P2, p.Q1, p.Q2, p.rho};
    const auto split = make_split(p.P1, 0.5 * p.P1);
    out.push_back({"strong_layered",
                   build_strong_layered(q, split, strong_coefficients(p.a, p.P1, p.P2, split),
                                        StrongModel::zic),
                   {{"I(V;Y2)", {"V"}, {"Y2"}, {}},
                    {"I(V;U1,Y1)", {"V"}, {"U1", "Y1"}, {}},
                    {"I(U2;Y1|U1)", {"U2"}, {"Y1"}, {"U1"}}}});
    return out;
  }
  const auto p = ic_params(s.params);
  if (std::abs(ic_vs_determinant(p)) > 1e-12)
    out.push_back({"very_strong_dpc",
                   build_ic_verystrong(p, ic_vs_coefficients(p)),
                   {{"I(U;Y2)", {"U"}, {"Y2"}, {}},
                    {"I(S1p,S2;U)", {"S1p", "S2"}, {"U"}, {}},
                    {"I(V;Y1)", {"V"}, {"Y1"}, {}}}});
  const auto split = make_split(p.P1, 0.5 * p.P1);
  out.push_back({"strong_layered",
                 build_strong_layered(p, split, strong_coefficients(p.a, p.P1, p.P2, split),
                                      StrongModel::ic),
                 {{"I(U1;Y2)", {"U1"}, {"Y2"}, {}},
                  {"I(U2;V,Y2|U1)", {"U2"}, {"V", "Y2"}, {"U1"}},
                  {"I(V;U1,Y2)", {"V"}, {"U1", "Y2"}, {}}}});
  return out;
}

Outcome run_verify(const Scenario& s) {
  Outcome o;
  SampleConfig cfg;
  cfg.samples = s.samples;
  cfg.seed = s.seed;
  o.result["samples"] = s.samples;
  o.result["seed"] = s.seed;
  o.result["tolerance"] = s.tolerance;
  json checks = json::array();
  bool all = true;
  double worst = 0.0;
  for (const auto& v : verify_systems(s)) {
    for (const auto& t : v.terms) {
      const double exact = model_mi(v.sys, t.a, t.b, t.c);
      const double est = t.c.empty() ? mi_estimate(v.sys, t.a, t.b, cfg)
                                     : cond_mi_estimate(v.sys, t.a, t.b, t.c, cfg);
      const double diff = std::abs(exact - est);
      const bool pass = diff <= s.tolerance;
      all = all && pass;
      worst = std::max(worst, diff);
      checks.push_back(json{{"design", v.design},
                            {"term", t.label},
                            {"closed_form", exact},
                            {"estimate", est},
                            {"abs_diff", diff},
                            {"pass", pass}});
    }
  }
  o.result["max_abs_diff"] = worst;
  o.result["all_pass"] = all;
  o.result["checks"] = checks;
  if (!all) fail(o, "check_failed");
  return o;
}

// ---------------------------------------------------------------- driver

struct Options {
  std::string scenario;
  std::string out;
  std::vector<std::string> overrides;
  int jobs = 0;
  bool convexify = false;
  std::string figure;
};

int default_jobs() {
  if (const char* env = std::getenv("DIRTY_REGION_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 100000) return static_cast<int>(v);
  }
  return 0;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ExportError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw ExportError("failed writing " + path.string());
}

json load_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ScenarioError("cannot read scenario file " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
}

int execute(const std::string& command, const Options& opt, std::ostream& out) {
  if (command == "fig") {
    if (!is_figure(opt.figure)) {
      std::string names;
      for (const auto& n : figure_names()) names += " " + n;
      throw ScenarioError("unknown figure '" + opt.figure + "'; available:" + names);
    }
    const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
    const auto files = write_figure(opt.figure, dir);
    json j;
    j["command"] = "fig";
    j["figure"] = opt.figure;
    j["units"] = "bits";
    j["status"] = "ok";
    j["files"] = json::array();
    for (const auto& f : files) j["files"].push_back(f.string());
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  json doc = load_json(opt.scenario);
  for (const auto& o : opt.overrides) apply_override(doc, o);
  Scenario s = parse_scenario(doc);
  const std::string out_dir = opt.out.empty() ? s.out_dir : opt.out;

  std::string analysis;
  if (auto target = command_target(command)) {
    if (!s.model.empty() && s.model != target->model)
      throw ScenarioError("command " + command + " needs model " + target->model +
                          ", scenario has " + s.model);
    s.model = target->model;
    analysis = target->analysis;
  } else {
    if (s.model.empty()) throw ScenarioError("scenario must name a model for " + command);
    if (command == "sweep") {
      analysis = s.sweep.contains("analysis") && s.sweep["analysis"].is_string()
                     ? s.sweep["analysis"].get<std::string>()
                     : s.analysis;
      if (!kAnalyses.count(analysis) || !valid_pair(s.model, analysis))
        throw ScenarioError("sweep analysis '" + analysis + "' is not available for model " +
                            s.model);
    }
  }
  check_params(s);

  if (command == "sweep") {
    const Table t = run_sweep(s, analysis);
    if (out_dir.empty()) {
      out << table_text(t);
    } else {
      const fs::path path = fs::path(out_dir) / "sweep.csv";
      write_text(path, table_text(t));
      json j;
      j["command"] = "sweep";
      j["model"] = s.model;
      j["analysis"] = analysis;
      j["units"] = "bits";
      j["status"] = "ok";
      j["rows"] = t.rows.size();
      j["files"] = json::array({path.string()});
      out << j.dump(2) << "\n";
    }
    return kExitOk;
  }

  Outcome o;
  Artifacts art;
  art.dir = out_dir;
  art.convexify = opt.convexify;
  if (command == "verify")
    o = run_verify(s);
  else
    o = analyze(s, analysis, &art);
  json report = envelope(command, s, o);
  if (!art.written.empty()) report["files"] = art.written;
  const std::string text = report.dump(2) + "\n";
  if (!out_dir.empty()) write_text(fs::path(out_dir) / (command + ".json"), text);
  out << text;
  return o.code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity bounds and regime conditions for state-dependent Gaussian channels",
               "dirty-region"};
  app.require_subcommand(1, 1);
  Options opt;

  struct Spec {
    const char* name;
    const char* help;
  };
  static const Spec commands[] = {
      {"mac-bounds", "inner and outer bounds of the MAC with a helper"},
      {"mac-classify", "segment labels and capacity results for the MAC with a helper"},
      {"zic-verystrong", "Z-interference channel, very strong interference"},
      {"zic-strong", "Z-interference channel, strong interference"},
      {"zic-weak", "Z-interference channel, weak interference"},
      {"ic-verystrong", "interference channel, very strong interference"},
      {"ic-strong", "interference channel, strong interference"},
      {"ic-weak", "interference channel, weak interference"},
      {"sweep", "evaluate an analysis on a one- or two-axis parameter grid"},
      {"verify", "compare closed-form terms with Monte-Carlo estimates"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--scenario", opt.scenario, "scenario JSON file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--override", opt.overrides, "key=value, repeatable")->take_all();
    sub->add_option("--jobs", opt.jobs, "worker threads (default DIRTY_REGION_JOBS)");
    sub->add_flag("--convexify", opt.convexify, "time-share exported boundaries");
  }
  auto* fig = app.add_subcommand("fig", "reproduce a named figure preset");
  fig->add_option("name", opt.figure, "figure name")->required();
  fig->add_option("--out", opt.out, "output directory (default .)");
  fig->add_option("--jobs", opt.jobs, "worker threads (default DIRTY_REGION_JOBS)");

  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args[0];
    if (!known) {
      err << "error: unknown command '" << args[0] << "'\n" << app.help();
      return kExitUsage;
    }
  }

  std::vector<std::string> storage{"dirty-region"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (opt.jobs < 0) {
    err << "error: --jobs must be nonnegative\n";
    return kExitUsage;
  }
  set_parallel_jobs(opt.jobs > 0 ? opt.jobs : default_jobs());

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, opt, out);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SingularCovarianceError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SingularCoefficientError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ExportError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    // ScenarioError, ParameterError, PowerViolationError, EmptyRegionError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dirtyregion
