#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pipct/chebyshev.hpp"
#include "pipct/error.hpp"
#include "pipct/interval.hpp"
#include "pipct/pade.hpp"
#include "pipct/piecewise.hpp"

namespace pipct {

/// Probe settings for the epsilon-badcell test.
struct BadcellParams {
  double epsilon = 1e-2;    ///< threshold on min |Q_m| over the unit circle
  int m = 20;               ///< probe degree, [m/m]
  int circle_samples = 512;
  int n = 200;              ///< quadrature nodes for the probe

  void validate() const {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (m < 1) throw InvalidArgument("probe degree m must be >= 1");
    if (circle_samples < 64) throw InvalidArgument("circle_samples must be >= 64");
    if (n < 1) throw InvalidArgument("probe node count must be >= 1");
  }
  friend bool operator==(const BadcellParams&, const BadcellParams&) = default;
};

struct AdaptiveParams {
  BadcellParams badcell;
  double tau = 1.0 / 256.0;  ///< stop once the smallest cell is narrower
  int max_rounds = 40;

  void validate() const {
    badcell.validate();
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (max_rounds < 1) throw InvalidArgument("max_rounds must be >= 1");
  }
  friend bool operator==(const AdaptiveParams&, const AdaptiveParams&) = default;
};

/// Outcome of probing one cell.
struct CellProbe {
  std::size_t cell = 0;
  double a = 0.0;
  double b = 0.0;
  double min_q = 0.0;
  double argmin_theta = 0.0;
  bool is_badcell = false;
  /// Probe denominator came from a numerically multi-dimensional null space.
  bool degenerate = false;
  /// Probe construction threw; the cell is flagged conservatively.
  bool failed = false;
  std::string note;
};

struct BadcellReport {
  std::vector<CellProbe> cells;

  std::vector<std::size_t> flagged() const {
    std::vector<std::size_t> out;
    for (const auto& c : cells) {
      if (c.is_badcell) out.push_back(c.cell);
    }
    return out;
  }
  std::size_t count() const { return flagged().size(); }
};

template <RealFunction F>
CellProbe probe_cell(const F& f, const Interval& cell, std::size_t index,
                     const BadcellParams& params) {
  CellProbe probe;
  probe.cell = index;
  probe.a = cell.a();
  probe.b = cell.b();
  try {
    const auto r = build_pct(f, cell, params.n, params.m, params.m);
    const auto circle = denominator_min_on_circle(r, params.circle_samples, true);
    probe.min_q = circle.min_magnitude;
    probe.argmin_theta = circle.argmin_theta;
    probe.is_badcell = circle.min_magnitude < params.epsilon;
    probe.degenerate = r.degenerate();
    if (probe.degenerate) {
      std::ostringstream os;
      os << "degenerate Toeplitz system (null space dimension "
         << r.nullspace_dim() << ")";
      probe.note = os.str();
    }
  } catch (const std::exception& e) {
    probe.failed = true;
    probe.is_badcell = true;
    probe.min_q = 0.0;
    probe.note = std::string("probe construction failed: ") + e.what();
  }
  return probe;
}

/// Flags cells whose [m/m] probe denominator drops below epsilon on the unit
/// circle. The whole circle maps onto the cell, so only its minimum matters.
template <RealFunction F>
BadcellReport detect_badcells(const F& f, const Partition& partition,
                              const BadcellParams& params) {
  params.validate();
  BadcellReport report;
  report.cells.reserve(partition.cells());
  for (std::size_t j = 0; j < partition.cells(); ++j) {
    report.cells.push_back(probe_cell(f, partition.cell(j), j, params));
  }
  return report;
}

struct RefinementRound {
  /// Partition in force when the round started.
  Partition partition;
  /// Cells examined this round (indices refer to `partition`).
  std::vector<CellProbe> examined;
};

struct RefinementTrace {
  std::vector<RefinementRound> rounds;
  Partition final_partition;
  std::string stop_reason;
};

/// Bisection refinement driven by the badcell test.
///
/// Starts from {a, (a+b)/2, b}; each round probes the cells produced by the
/// previous round's bisections, bisects the badcells and merges the new
/// midpoints. Stops when no badcell is found, when the smallest cell becomes
/// narrower than tau, or after max_rounds.
template <RealFunction F>
RefinementTrace refine_partition_traced(const F& f, const Interval& interval,
                                        const AdaptiveParams& params) {
  params.validate();
  Partition current({interval.a(), interval.midpoint(), interval.b()});
  std::vector<Interval> to_examine{current.cell(0), current.cell(1)};
  RefinementTrace trace{{}, current, "max_rounds reached"};
  for (int round = 0; round < params.max_rounds; ++round) {
    RefinementRound record{current, {}};
    std::vector<Interval> flagged;
    for (const auto& cell : to_examine) {
      auto probe = probe_cell(f, cell, current.locate(cell.midpoint()),
                              params.badcell);
      if (probe.is_badcell) flagged.push_back(cell);
      record.examined.push_back(std::move(probe));
    }
    trace.rounds.push_back(std::move(record));
    if (flagged.empty()) {
      trace.stop_reason = "no badcells";
      break;
    }
    std::vector<double> bp = current.breakpoints();
    for (const auto& cell : flagged) bp.push_back(cell.midpoint());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    current = Partition(std::move(bp));
    if (current.min_width() < params.tau) {
      trace.stop_reason = "min width below tau";
      break;
    }
    to_examine.clear();
    for (const auto& cell : flagged) {
      to_examine.emplace_back(cell.a(), cell.midpoint());
      to_examine.emplace_back(cell.midpoint(), cell.b());
    }
  }
  trace.final_partition = current;
  return trace;
}

template <RealFunction F>
Partition refine_partition(const F& f, const Interval& interval,
                           const AdaptiveParams& params) {
  return refine_partition_traced(f, interval, params).final_partition;
}

struct AdaptiveBuild {
  PiecewiseBuild build;
  DegreePlan plan;
  /// Badcell test on the final partition; drives the degree plan.
  BadcellReport final_report;
  RefinementTrace trace;

  const PiecewiseApproximant& approximant() const { return build.approximant; }
};

/// Adaptive PiPCT: refine, then use [n/m] on badcells and [m/m] elsewhere.
template <RealFunction F>
AdaptiveBuild build_apipct(const F& f, const Interval& interval,
                           const AdaptiveParams& params, int n) {
  const int m = params.badcell.m;
  validate_degrees(n, m);
  auto trace = refine_partition_traced(f, interval, params);
  const Partition& partition = trace.final_partition;
  auto report = detect_badcells(f, partition, params.badcell);
  DegreePlan plan(partition.cells(), DegreePair{m, m});
  for (const auto& probe : report.cells) {
    if (probe.is_badcell) plan[probe.cell] = DegreePair{n, m};
  }
  auto build = build_pipct(f, partition, plan, n);
  return AdaptiveBuild{std::move(build), std::move(plan), std::move(report),
                       std::move(trace)};
}

}  // namespace pipct
