#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pipct/adaptive.hpp"
#include "pipct/error.hpp"
#include "pipct/interval.hpp"
#include "pipct/pade.hpp"
#include "pipct/piecewise.hpp"

namespace pipct {

using Json = nlohmann::json;

inline constexpr const char* kApproximantFormat = "pipct-approximant";
inline constexpr int kApproximantFormatVersion = 1;

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("JSON: missing key '") + key + "'");
  }
  return j.at(key);
}

inline std::vector<double> finite_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string("JSON: '") + what + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw InvalidArgument(std::string("JSON: '") + what + "' must contain numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

inline Json finite_to_json(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidArgument(std::string("JSON: non-finite value in '") + what + "'");
    }
  }
  return Json(v);
}

}  // namespace detail

inline Json to_json(const Partition& p) {
  return Json{{"breakpoints", detail::finite_to_json(p.breakpoints(), "breakpoints")}};
}

inline Partition partition_from_json(const Json& j) {
  return Partition(detail::finite_array(detail::require(j, "breakpoints"), "breakpoints"));
}

inline Json to_json(const PadeChebyshevApproximant& r) {
  const std::vector<double> p(r.p().begin(), r.p().end());
  const std::vector<double> q(r.q().begin(), r.q().end());
  return Json{{"interval", {r.interval().a(), r.interval().b()}},
              {"n", r.nodes()},
              {"n_p", r.n_p()},
              {"n_q", r.n_q()},
              {"p", detail::finite_to_json(p, "p")},
              {"q", detail::finite_to_json(q, "q")},
              {"nullspace_dim", r.nullspace_dim()}};
}

inline PadeChebyshevApproximant pct_from_json(const Json& j) {
  const auto iv = detail::finite_array(detail::require(j, "interval"), "interval");
  if (iv.size() != 2) throw InvalidArgument("JSON: 'interval' must have two entries");
  auto p = detail::finite_array(detail::require(j, "p"), "p");
  auto q = detail::finite_array(detail::require(j, "q"), "q");
  const int n_p = detail::require(j, "n_p").get<int>();
  const int n_q = detail::require(j, "n_q").get<int>();
  if (static_cast<int>(p.size()) != n_p + 1 || static_cast<int>(q.size()) != n_q + 1) {
    throw InvalidArgument("JSON: coefficient vector lengths disagree with n_p/n_q");
  }
  const int dim = j.value("nullspace_dim", 1);
  return PadeChebyshevApproximant(Interval(iv[0], iv[1]), detail::require(j, "n").get<int>(),
                                  std::move(p), std::move(q), dim);
}

/// Approximant document; a failed cell is written as null.
inline Json to_json(const PiecewiseApproximant& r) {
  Json pieces = Json::array();
  for (const auto& piece : r.pieces) pieces.push_back(piece ? to_json(*piece) : Json(nullptr));
  return Json{{"format", kApproximantFormat},
              {"version", kApproximantFormatVersion},
              {"n", r.n},
              {"breakpoints", detail::finite_to_json(r.partition.breakpoints(), "breakpoints")},
              {"pieces", std::move(pieces)}};
}

inline PiecewiseApproximant approximant_from_json(const Json& j) {
  if (j.value("format", std::string()) != kApproximantFormat) {
    throw InvalidArgument("JSON: not a pipct-approximant document");
  }
  if (j.value("version", 0) != kApproximantFormatVersion) {
    throw InvalidArgument("JSON: unsupported approximant document version");
  }
  PiecewiseApproximant r{partition_from_json(j), {}, detail::require(j, "n").get<int>()};
  const auto& pieces = detail::require(j, "pieces");
  if (!pieces.is_array() || pieces.size() != r.partition.cells()) {
    throw InvalidArgument("JSON: 'pieces' must have one entry per cell");
  }
  for (std::size_t c = 0; c < pieces.size(); ++c) {
    if (pieces[c].is_null()) {
      r.pieces.emplace_back(std::nullopt);
      continue;
    }
    auto piece = pct_from_json(pieces[c]);
    if (!(piece.interval() == r.partition.cell(c))) {
      throw InvalidArgument("JSON: piece interval does not match its cell");
    }
    r.pieces.emplace_back(std::move(piece));
  }
  return r;
}

inline Json to_json(const CellProbe& c) {
  Json j{{"cell", c.cell},       {"a", c.a},
         {"b", c.b},             {"min_q", c.min_q},
         {"argmin_theta", c.argmin_theta}, {"badcell", c.is_badcell},
         {"degenerate", c.degenerate},     {"failed", c.failed}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json to_json(const BadcellReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  return Json{{"cells", std::move(cells)}, {"flagged", r.flagged()}};
}

/// Per round: the partition in force, each examined cell with its flag and
/// min |Q| on the unit circle.
inline Json to_json(const RefinementTrace& t) {
  Json rounds = Json::array();
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    Json examined = Json::array();
    for (const auto& c : t.rounds[i].examined) examined.push_back(to_json(c));
    rounds.push_back(Json{{"round", i},
                          {"breakpoints", t.rounds[i].partition.breakpoints()},
                          {"examined", std::move(examined)}});
  }
  return Json{{"rounds", std::move(rounds)},
              {"final_breakpoints", t.final_partition.breakpoints()},
              {"cells", t.final_partition.cells()},
              {"stop_reason", t.stop_reason}};
}

}  // namespace pipct
