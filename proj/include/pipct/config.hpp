#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pipct/adaptive.hpp"
#include "pipct/error.hpp"
#include "pipct/functions.hpp"
#include "pipct/interval.hpp"

namespace pipct {

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"table1",  "table2", "profile", "badcells",
                                              "adaptive", "degrees", "poles",  "timing"};
  return names;
}

struct OutputPaths {
  std::string csv;          ///< empty: stdout
  std::string trace;        ///< adaptive refinement trace (JSON)
  std::string approximant;  ///< approximant document (JSON)
  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct ExperimentConfig {
  std::string experiment = "table1";
  FunctionSpec function = FunctionSpec::named("jump_kink");
  double a = -1.0;
  double b = 1.0;
  double region_a = -1.0;
  double region_b = 1.0;
  std::vector<int> N{2, 8, 32, 128, 256, 512};
  int n = 200;
  int n_p = 20;
  int n_q = 20;
  /// Truncation degree of the piecewise Chebyshev comparison column.
  int chebyshev_degree = 40;
  int samples_per_cell = 2048;
  /// Badcell probes always use `n` nodes; adaptive.badcell.n is ignored.
  AdaptiveParams adaptive;
  /// PiPCT cell count the adaptive demo compares against; also the
  /// reporting resolution of error profiles.
  int reference_N = 512;
  int points_per_cell = 40;
  double window = 0.05;
  int collar_points = 2;
  /// Error profile: when > 0, each N uses total_nodes / N nodes per cell.
  int total_nodes = 0;
  int repetitions = 3;
  std::vector<int> pole_degrees{20, 30, 40};
  double pole_x = -0.4;
  /// 0 selects the function-scaled default.
  double residue_tol = 0.0;
  double pair_tol = 1e-8;
  OutputPaths output;

  Interval interval() const { return Interval(a, b); }
  Interval region() const { return Interval(region_a, region_b); }

  void validate() const {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
      throw ConfigError("unknown experiment '" + experiment + "'");
    }
    try {
      Interval iv(a, b);
      Interval rg(region_a, region_b);
      if (rg.a() < iv.a() || rg.b() > iv.b()) {
        throw ConfigError("region must lie within the interval");
      }
      adaptive.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (N.empty()) throw ConfigError("N sweep must be nonempty");
    for (int v : N) {
      if (v < 1) throw ConfigError("N values must be >= 1");
    }
    if (n < 1) throw ConfigError("n must be >= 1");
    if (n_q < 1 || n_p < n_q) throw ConfigError("degrees must satisfy n_p >= n_q >= 1");
    if (chebyshev_degree < 0) throw ConfigError("chebyshev_degree must be >= 0");
    if (samples_per_cell < 16) throw ConfigError("samples_per_cell must be >= 16");
    if (reference_N < 1) throw ConfigError("reference_N must be >= 1");
    if (points_per_cell < 1) throw ConfigError("points_per_cell must be >= 1");
    if (!(window > 0.0)) throw ConfigError("window must be > 0");
    if (collar_points < 0) throw ConfigError("collar_points must be >= 0");
    if (total_nodes < 0) throw ConfigError("total_nodes must be >= 0");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (pole_degrees.empty()) throw ConfigError("pole_degrees must be nonempty");
    for (int d : pole_degrees) {
      if (d < 1) throw ConfigError("pole_degrees must be >= 1");
    }
    if (residue_tol < 0.0) throw ConfigError("residue_tol must be >= 0");
    if (!(pair_tol > 0.0)) throw ConfigError("pair_tol must be > 0");
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Defaults reproducing each experiment's reference setup.
inline ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "table1") {
    c.region_a = 0.2;
  } else if (experiment == "table2") {
    c.function = FunctionSpec::named("x_abs_x");
    c.N = {2, 4, 8, 16};
    c.n_p = c.n_q = 2;
    c.chebyshev_degree = 4;
  } else if (experiment == "profile") {
    c.N = {1, 8, 64, 512};
    c.total_nodes = 102400;
  } else if (experiment == "badcells") {
    c.N = {512};
  } else if (experiment == "adaptive") {
    c.n = 100;
    c.N = {512};
  } else if (experiment == "degrees") {
    c.N = {104, 208, 312, 416};
  } else if (experiment == "poles") {
    c.N = {512};
  } else if (experiment == "timing") {
    c.n = 100;
    c.N = {104, 208, 312, 416};
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  return c;
}

namespace detail {

inline nlohmann::json function_to_json(const FunctionSpec& spec) {
  using nlohmann::json;
  if (const auto* named = std::get_if<FunctionSpec::Named>(&spec.source)) {
    return json{{"name", named->name}};
  }
  if (const auto* pieces = std::get_if<FunctionSpec::Pieces>(&spec.source)) {
    json arr = json::array();
    for (const auto& p : pieces->pieces) {
      arr.push_back(json{{"interval", {p.a, p.b}}, {"expr", p.expr}});
    }
    return json{{"pieces", std::move(arr)}};
  }
  return json{{"samples", std::get<FunctionSpec::Samples>(spec.source).path}};
}

inline FunctionSpec function_from_json(const nlohmann::json& j) {
  if (j.is_string()) return FunctionSpec::named(j.get<std::string>());
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError("'function' must be a name or an object with one of "
                      "'name', 'pieces', 'samples'");
  }
  if (j.contains("name")) return FunctionSpec::named(j.at("name").get<std::string>());
  if (j.contains("samples")) {
    return FunctionSpec{FunctionSpec::Samples{j.at("samples").get<std::string>()}};
  }
  if (j.contains("pieces")) {
    FunctionSpec::Pieces pieces;
    for (const auto& p : j.at("pieces")) {
      const auto iv = p.at("interval").get<std::vector<double>>();
      if (iv.size() != 2) throw ConfigError("piece 'interval' must have two entries");
      pieces.pieces.push_back({iv[0], iv[1], p.at("expr").get<std::string>()});
    }
    // Parse now so malformed expressions surface as config errors.
    try {
      PiecewiseExpressionFunction check(pieces.pieces);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    return FunctionSpec{std::move(pieces)};
  }
  throw ConfigError("'function' object needs 'name', 'pieces' or 'samples'");
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

}  // namespace detail

inline nlohmann::json emit_config(const ExperimentConfig& c) {
  using nlohmann::json;
  return json{
      {"experiment", c.experiment},
      {"function", detail::function_to_json(c.function)},
      {"interval", {c.a, c.b}},
      {"region", {c.region_a, c.region_b}},
      {"N", c.N},
      {"n", c.n},
      {"n_p", c.n_p},
      {"n_q", c.n_q},
      {"chebyshev_degree", c.chebyshev_degree},
      {"samples_per_cell", c.samples_per_cell},
      {"adaptive",
       {{"epsilon", c.adaptive.badcell.epsilon},
        {"m", c.adaptive.badcell.m},
        {"circle_samples", c.adaptive.badcell.circle_samples},
        {"tau", c.adaptive.tau},
        {"max_rounds", c.adaptive.max_rounds}}},
      {"reference_N", c.reference_N},
      {"points_per_cell", c.points_per_cell},
      {"window", c.window},
      {"collar_points", c.collar_points},
      {"total_nodes", c.total_nodes},
      {"repetitions", c.repetitions},
      {"pole_degrees", c.pole_degrees},
      {"pole_x", c.pole_x},
      {"residue_tol", c.residue_tol},
      {"pair_tol", c.pair_tol},
      {"output",
       {{"csv", c.output.csv}, {"trace", c.output.trace}, {"approximant", c.output.approximant}}}};
}

/// Starts from default_config(experiment) and applies the keys present.
/// Unknown keys are rejected.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::reject_unknown(
        j,
        {"experiment", "function", "interval", "region", "N", "n", "n_p", "n_q",
         "chebyshev_degree", "samples_per_cell", "adaptive", "reference_N", "points_per_cell",
         "window", "collar_points", "total_nodes", "repetitions", "pole_degrees", "pole_x",
         "residue_tol", "pair_tol", "output"},
        "config");
    if (!j.contains("experiment")) throw ConfigError("config needs 'experiment'");
    ExperimentConfig c = default_config(j.at("experiment").get<std::string>());
    auto pair = [&](const char* key, double& lo, double& hi) {
      if (!j.contains(key)) return;
      const auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError(std::string("'") + key + "' must have two entries");
      lo = v[0];
      hi = v[1];
    };
    auto get = [](const nlohmann::json& obj, const char* key, auto& field) {
      if (obj.contains(key)) obj.at(key).get_to(field);
    };
    if (j.contains("function")) c.function = detail::function_from_json(j.at("function"));
    pair("interval", c.a, c.b);
    if (j.contains("interval") && !j.contains("region")) {
      c.region_a = c.a;
      c.region_b = c.b;
    }
    pair("region", c.region_a, c.region_b);
    get(j, "N", c.N);
    get(j, "n", c.n);
    get(j, "n_p", c.n_p);
    get(j, "n_q", c.n_q);
    get(j, "chebyshev_degree", c.chebyshev_degree);
    get(j, "samples_per_cell", c.samples_per_cell);
    if (j.contains("adaptive")) {
      const auto& ad = j.at("adaptive");
      detail::reject_unknown(ad, {"epsilon", "m", "circle_samples", "tau",
                                  "max_rounds"},
                             "adaptive");
      get(ad, "epsilon", c.adaptive.badcell.epsilon);
      get(ad, "m", c.adaptive.badcell.m);
      get(ad, "circle_samples", c.adaptive.badcell.circle_samples);
      get(ad, "tau", c.adaptive.tau);
      get(ad, "max_rounds", c.adaptive.max_rounds);
    }
    get(j, "reference_N", c.reference_N);
    get(j, "points_per_cell", c.points_per_cell);
    get(j, "window", c.window);
    get(j, "collar_points", c.collar_points);
    get(j, "total_nodes", c.total_nodes);
    get(j, "repetitions", c.repetitions);
    get(j, "pole_degrees", c.pole_degrees);
    get(j, "pole_x", c.pole_x);
    get(j, "residue_tol", c.residue_tol);
    get(j, "pair_tol", c.pair_tol);
    if (j.contains("output")) {
      const auto& out = j.at("output");
      detail::reject_unknown(out, {"csv", "trace", "approximant"}, "output");
      get(out, "csv", c.output.csv);
      get(out, "trace", c.output.trace);
      get(out, "approximant", c.output.approximant);
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace pipct
