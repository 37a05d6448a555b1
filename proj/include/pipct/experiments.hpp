#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pipct/adaptive.hpp"
#include "pipct/config.hpp"
#include "pipct/error.hpp"
#include "pipct/functions.hpp"
#include "pipct/json_io.hpp"
#include "pipct/pade.hpp"
#include "pipct/piecewise.hpp"
#include "pipct/poles.hpp"

namespace pipct {

// ---------------------------------------------------------------- CSV

using CsvValue = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvValue>> rows;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const CsvValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  const auto& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

inline void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

inline std::string to_csv_string(const CsvTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

namespace detail {

inline CsvValue optional_value(const std::optional<double>& v) {
  if (v) return *v;
  return std::string();
}

inline long long as_ll(std::size_t v) { return static_cast<long long>(v); }

/// Cell-midpoint grid: `count` points at (i + 1/2) spacing inside [lo, hi].
inline std::vector<double> cell_grid(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  const double h = (hi - lo) / count;
  for (int i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
  return xs;
}

/// |f(x) - r(x)|, or |f(x)| when r cannot be evaluated at x.
template <class Approx>
double pointwise_error(const Approx& r, const Function& f, std::size_t cell, double x) {
  const double fx = f(x);
  try {
    return std::abs(fx - evaluate_in_cell(r, cell, x));
  } catch (const EvaluationError&) {
    return std::abs(fx);
  } catch (const PoleError&) {
    return std::abs(fx);
  }
}

inline bool near_jump(const std::vector<Singularity>& sing, double x, double collar) {
  for (const auto& s : sing) {
    if (s.kind == SingularityKind::kJump && std::abs(x - s.x) < collar) return true;
  }
  return false;
}

inline AdaptiveParams adaptive_params(const ExperimentConfig& c) {
  AdaptiveParams p = c.adaptive;
  p.badcell.n = c.n;
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------- tables

struct ErrorTableRow {
  int N = 0;
  double chebyshev_l1 = 0.0;
  std::optional<double> chebyshev_order;
  double pct_l1 = 0.0;
  std::optional<double> pct_order;
  std::size_t pole_samples = 0;
  std::size_t failed_cells = 0;
};

/// Rows of (N, piecewise Chebyshev L1, order, PiPCT L1, order). Orders use
/// the previous row and are left empty when an error is not positive.
inline std::vector<ErrorTableRow> run_error_table(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  std::vector<ErrorTableRow> rows;
  for (int N : c.N) {
    const auto partition = uniform_partition(c.interval(), N);
    ErrorTableRow row;
    row.N = N;
    const auto cheb = build_piecewise_chebyshev(fn.f, partition, c.n, c.chebyshev_degree);
    row.chebyshev_l1 = l1_error(cheb, fn.f, c.region(), c.samples_per_cell).value;
    const auto build =
        build_pipct(fn.f, partition, uniform_plan(partition.cells(), c.n_p, c.n_q), c.n);
    const auto l1 = l1_error(build.approximant, fn.f, c.region(), c.samples_per_cell);
    row.pct_l1 = l1.value;
    row.pole_samples = l1.pole_samples;
    row.failed_cells = build.failures.size();
    rows.push_back(row);
  }
  auto order = [&](double e0, double e1, int N0, int N1) -> std::optional<double> {
    if (!(e0 > 0.0) || !(e1 > 0.0) || N1 == N0) return std::nullopt;
    return std::log(e0 / e1) / std::log(static_cast<double>(N1) / N0);
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].chebyshev_order =
        order(rows[i - 1].chebyshev_l1, rows[i].chebyshev_l1, rows[i - 1].N, rows[i].N);
    rows[i].pct_order = order(rows[i - 1].pct_l1, rows[i].pct_l1, rows[i - 1].N, rows[i].N);
  }
  return rows;
}

inline std::vector<ErrorTableRow> run_table1(const ExperimentConfig& c) {
  return run_error_table(c);
}
inline std::vector<ErrorTableRow> run_table2(const ExperimentConfig& c) {
  return run_error_table(c);
}

inline CsvTable to_csv(const std::vector<ErrorTableRow>& rows) {
  CsvTable t{{"N", "chebyshev_l1", "chebyshev_order", "pipct_l1", "pipct_order",
              "pole_samples", "failed_cells"},
             {}};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.N), r.chebyshev_l1,
                      detail::optional_value(r.chebyshev_order), r.pct_l1,
                      detail::optional_value(r.pct_order), detail::as_ll(r.pole_samples),
                      detail::as_ll(r.failed_cells)});
  }
  return t;
}

// ---------------------------------------------------------------- profiles

struct ProfileRow {
  int N = 0;
  int nodes = 0;
  std::size_t cell = 0;  ///< reporting cell
  double a = 0.0;
  double b = 0.0;
  double x_peak = 0.0;
  double peak_error = 0.0;
};

/// Peak of |f - R| per reporting cell for each N. Reporting cells are the
/// uniform partition into max(N, reference_N) cells, each sampled at
/// points_per_cell midpoints, so coarse and fine approximants line up.
inline std::vector<ProfileRow> run_error_profile(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  std::vector<ProfileRow> rows;
  for (int N : c.N) {
    const int nodes = c.total_nodes > 0 ? std::max(1, c.total_nodes / N) : c.n;
    const auto partition = uniform_partition(c.interval(), N);
    const auto build =
        build_pipct(fn.f, partition, uniform_plan(partition.cells(), c.n_p, c.n_q), nodes);
    const auto report = uniform_partition(c.interval(), std::max(N, c.reference_N));
    for (std::size_t j = 0; j < report.cells(); ++j) {
      const auto cell = report.cell(j);
      ProfileRow row{N, nodes, j, cell.a(), cell.b(), cell.midpoint(), -1.0};
      for (double x : detail::cell_grid(cell.a(), cell.b(), c.points_per_cell)) {
        const double e =
            detail::pointwise_error(build.approximant, fn.f, partition.locate(x), x);
        if (e > row.peak_error) {
          row.peak_error = e;
          row.x_peak = x;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline CsvTable to_csv(const std::vector<ProfileRow>& rows) {
  CsvTable t{{"N", "nodes", "cell", "a", "b", "x_peak", "peak_error"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.N), static_cast<long long>(r.nodes),
                      detail::as_ll(r.cell), r.a, r.b, r.x_peak, r.peak_error});
  }
  return t;
}

// ---------------------------------------------------------------- badcells

struct BadcellSweep {
  int N = 0;
  BadcellReport report;
};

inline std::vector<BadcellSweep> run_badcells(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  const auto params = detail::adaptive_params(c).badcell;
  std::vector<BadcellSweep> out;
  for (int N : c.N) {
    out.push_back({N, detect_badcells(fn.f, uniform_partition(c.interval(), N), params)});
  }
  return out;
}

inline CsvTable to_csv(const std::vector<BadcellSweep>& sweeps) {
  CsvTable t{{"N", "cell", "a", "b", "midpoint", "min_q", "argmin_theta", "badcell",
              "degenerate", "failed"},
             {}};
  for (const auto& s : sweeps) {
    for (const auto& p : s.report.cells) {
      t.rows.push_back({static_cast<long long>(s.N), detail::as_ll(p.cell), p.a, p.b,
                        0.5 * (p.a + p.b), p.min_q, p.argmin_theta,
                        static_cast<long long>(p.is_badcell),
                        static_cast<long long>(p.degenerate),
                        static_cast<long long>(p.failed)});
    }
  }
  return t;
}

// ---------------------------------------------------------------- adaptive

struct ComparisonRow {
  double x = 0.0;
  double f = 0.0;
  double error_apipct = 0.0;
  double error_pipct = 0.0;
  std::size_t cell = 0;  ///< APiPCT cell
  bool badcell = false;
  bool near_jump = false;
};

struct BadcellComparison {
  std::size_t cell = 0;
  double a = 0.0;
  double b = 0.0;
  DegreePair degrees;
  double max_error_apipct = 0.0;
  double max_error_pipct = 0.0;
  std::size_t points = 0;
};

struct AdaptiveDemo {
  AdaptiveBuild adaptive;
  PiecewiseBuild reference;  ///< uniform PiPCT with reference_N cells
  std::vector<ComparisonRow> rows;
  std::vector<BadcellComparison> badcells;
};

/// APiPCT against uniform PiPCT at matched points. Each APiPCT cell gets
/// points_per_cell midpoints per reference cell width it spans (at least
/// points_per_cell); points within collar_points grid spacings of a jump are
/// marked and left out of the per-badcell maxima.
inline AdaptiveDemo run_adaptive_demo(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  const auto ref_partition = uniform_partition(c.interval(), c.reference_N);
  AdaptiveDemo demo{
      build_apipct(fn.f, c.interval(), detail::adaptive_params(c), c.n),
      build_pipct(fn.f, ref_partition, uniform_plan(ref_partition.cells(), c.n_p, c.n_q), c.n),
      {},
      {}};
  const auto& partition = demo.adaptive.approximant().partition;
  const double h_ref = c.interval().width() / c.reference_N;
  for (std::size_t j = 0; j < partition.cells(); ++j) {
    const auto cell = partition.cell(j);
    const bool bad = demo.adaptive.final_report.cells[j].is_badcell;
    const int count = c.points_per_cell *
                      std::max(1, static_cast<int>(std::ceil(cell.width() / h_ref - 1e-9)));
    const double collar = c.collar_points * cell.width() / count;
    BadcellComparison summary{j, cell.a(), cell.b(), demo.adaptive.plan[j], 0.0, 0.0, 0};
    for (double x : detail::cell_grid(cell.a(), cell.b(), count)) {
      ComparisonRow row;
      row.x = x;
      row.f = fn.f(x);
      row.cell = j;
      row.badcell = bad;
      row.near_jump = detail::near_jump(fn.singularities, x, collar);
      row.error_apipct = detail::pointwise_error(demo.adaptive.approximant(), fn.f, j, x);
      row.error_pipct =
          detail::pointwise_error(demo.reference.approximant, fn.f, ref_partition.locate(x), x);
      if (bad && !row.near_jump) {
        summary.max_error_apipct = std::max(summary.max_error_apipct, row.error_apipct);
        summary.max_error_pipct = std::max(summary.max_error_pipct, row.error_pipct);
        ++summary.points;
      }
      demo.rows.push_back(row);
    }
    if (bad) demo.badcells.push_back(summary);
  }
  return demo;
}

inline CsvTable to_csv(const AdaptiveDemo& demo) {
  CsvTable t{{"x", "f", "error_apipct", "error_pipct", "cell", "badcell", "near_jump"}, {}};
  for (const auto& r : demo.rows) {
    t.rows.push_back({r.x, r.f, r.error_apipct, r.error_pipct, detail::as_ll(r.cell),
                      static_cast<long long>(r.badcell), static_cast<long long>(r.near_jump)});
  }
  return t;
}

inline CsvTable badcell_summary_csv(const AdaptiveDemo& demo) {
  CsvTable t{{"cell", "a", "b", "n_p", "n_q", "max_error_apipct", "max_error_pipct", "points"},
             {}};
  for (const auto& s : demo.badcells) {
    t.rows.push_back({detail::as_ll(s.cell), s.a, s.b, static_cast<long long>(s.degrees.n_p),
                      static_cast<long long>(s.degrees.n_q), s.max_error_apipct,
                      s.max_error_pipct, detail::as_ll(s.points)});
  }
  return t;
}

// ---------------------------------------------------------------- timing

struct TimingRow {
  int N = 0;
  double pipct_seconds = 0.0;
  double apipct_seconds = 0.0;
};

namespace detail {

template <class Fn>
double median_seconds(int repetitions, Fn&& fn) {
  std::vector<double> times;
  for (int r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  return times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

}  // namespace detail

/// Median wall time of a uniform PiPCT build with N cells and of an APiPCT
/// build (tau from the config, so independent of N).
inline std::vector<TimingRow> run_timing(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  const auto params = detail::adaptive_params(c);
  std::vector<TimingRow> rows;
  for (int N : c.N) {
    TimingRow row{N, 0.0, 0.0};
    const auto partition = uniform_partition(c.interval(), N);
    const auto plan = uniform_plan(partition.cells(), c.n_p, c.n_q);
    std::size_t sink = 0;
    row.pipct_seconds = detail::median_seconds(c.repetitions, [&] {
      sink += build_pipct(fn.f, partition, plan, c.n).failures.size();
    });
    row.apipct_seconds = detail::median_seconds(c.repetitions, [&] {
      sink += build_apipct(fn.f, c.interval(), params, c.n).plan.size();
    });
    if (sink == std::numeric_limits<std::size_t>::max()) row.N = -1;
    rows.push_back(row);
  }
  return rows;
}

inline CsvTable to_csv(const std::vector<TimingRow>& rows) {
  CsvTable t{{"N", "pipct_seconds", "apipct_seconds"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.N), r.pipct_seconds, r.apipct_seconds});
  }
  return t;
}

// ---------------------------------------------------------------- degrees

struct DegreeSweepRow {
  int N = 0;
  std::string placement;
  int n_p = 0;
  int n_q = 0;
  double singularity = 0.0;
  double max_error = 0.0;
  std::size_t failed_cells = 0;
};

/// Max |f - R| in [s - window, s + window] around each singularity s for
/// n_p in {n_q, n, 2n - n_q - 1}, using only the cells meeting the window.
inline std::vector<DegreeSweepRow> run_degree_sweep(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  if (fn.singularities.empty()) {
    throw ConfigError("degree sweep needs a function with known singularities");
  }
  const int nq = c.n_q;
  const std::vector<std::pair<std::string, int>> placements{
      {"n_q", nq}, {"n", c.n}, {"2n-n_q-1", 2 * c.n - nq - 1}};
  std::vector<DegreeSweepRow> rows;
  for (int N : c.N) {
    const auto partition = uniform_partition(c.interval(), N);
    for (const auto& [label, np] : placements) {
      validate_degrees(np, nq);
      for (const auto& s : fn.singularities) {
        DegreeSweepRow row{N, label, np, nq, s.x, 0.0, 0};
        const double lo = std::max(c.a, s.x - c.window);
        const double hi = std::min(c.b, s.x + c.window);
        const std::size_t first = partition.locate(lo);
        const std::size_t last = partition.locate(hi);
        for (std::size_t j = first; j <= last; ++j) {
          const auto cell = partition.cell(j);
          const double collar = c.collar_points * cell.width() / c.points_per_cell;
          std::optional<PadeChebyshevApproximant> r;
          try {
            r = build_pct(fn.f, cell, c.n, np, nq);
          } catch (const std::exception&) {
            ++row.failed_cells;
          }
          for (double x : detail::cell_grid(cell.a(), cell.b(), c.points_per_cell)) {
            if (x < lo || x > hi) continue;
            if (s.kind == SingularityKind::kJump && std::abs(x - s.x) < collar) continue;
            const double fx = fn.f(x);
            double e = std::abs(fx);
            if (r) {
              try {
                e = std::abs(fx - evaluate_pct(*r, x));
              } catch (const PoleError&) {
              }
            }
            row.max_error = std::max(row.max_error, e);
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline CsvTable to_csv(const std::vector<DegreeSweepRow>& rows) {
  CsvTable t{{"N", "placement", "n_p", "n_q", "singularity", "max_error", "failed_cells"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.N), r.placement, static_cast<long long>(r.n_p),
                      static_cast<long long>(r.n_q), r.singularity, r.max_error,
                      detail::as_ll(r.failed_cells)});
  }
  return t;
}

// ---------------------------------------------------------------- poles

struct PoleSweep {
  int N = 0;
  int n_p = 0;
  int n_q = 0;
  double residue_tol = 0.0;
  PoleReport report;
};

/// Poles of [d/d] for each d in pole_degrees on the cell of uniform(N)
/// holding pole_x.
inline std::vector<PoleSweep> run_poles(const ExperimentConfig& c) {
  c.validate();
  const auto fn = resolve(c.function);
  std::vector<PoleSweep> out;
  for (int N : c.N) {
    const auto partition = uniform_partition(c.interval(), N);
    const std::size_t j = partition.locate(c.pole_x);
    const auto cell = partition.cell(j);
    const double tol =
        c.residue_tol > 0.0 ? c.residue_tol : default_residue_tolerance(fn.f, cell, c.n);
    for (int d : c.pole_degrees) {
      const auto r = build_pct(fn.f, cell, c.n, d, d);
      out.push_back({N, d, d, tol, classify_froissart(r, tol, c.pair_tol, j)});
    }
  }
  return out;
}

inline CsvTable to_csv(const std::vector<PoleSweep>& sweeps) {
  CsvTable t{{"N", "n_p", "n_q", "cell", "re", "im", "residue", "nearest_zero_distance",
              "spurious"},
             {}};
  for (const auto& s : sweeps) {
    for (const auto& p : s.report.poles) {
      t.rows.push_back({static_cast<long long>(s.N), static_cast<long long>(s.n_p),
                        static_cast<long long>(s.n_q), detail::as_ll(s.report.cell),
                        p.location.real(), p.location.imag(), p.residue_magnitude,
                        p.nearest_zero_distance, static_cast<long long>(p.spurious)});
    }
  }
  return t;
}

// ---------------------------------------------------------------- dispatch

struct ExperimentOutput {
  CsvTable table;
  std::optional<Json> trace;
  std::optional<Json> approximant;
  /// Human-readable summary lines for stderr.
  std::vector<std::string> notes;
};

inline ExperimentOutput run_experiment(const ExperimentConfig& c) {
  ExperimentOutput out;
  const auto& e = c.experiment;
  if (e == "table1" || e == "table2") {
    const auto rows = run_error_table(c);
    out.table = to_csv(rows);
    for (const auto& r : rows) {
      if (r.failed_cells > 0 || r.pole_samples > 0) {
        out.notes.push_back("N=" + std::to_string(r.N) + ": " +
                            std::to_string(r.failed_cells) + " failed cells, " +
                            std::to_string(r.pole_samples) + " pole samples");
      }
    }
  } else if (e == "profile") {
    out.table = to_csv(run_error_profile(c));
  } else if (e == "badcells") {
    const auto sweeps = run_badcells(c);
    out.table = to_csv(sweeps);
    for (const auto& s : sweeps) {
      out.notes.push_back("N=" + std::to_string(s.N) + ": " + std::to_string(s.report.count()) +
                          " badcells");
    }
  } else if (e == "adaptive") {
    const auto demo = run_adaptive_demo(c);
    out.table = to_csv(demo);
    out.trace = to_json(demo.adaptive.trace);
    (*out.trace)["final_badcells"] = to_json(demo.adaptive.final_report);
    out.approximant = to_json(demo.adaptive.approximant());
    out.notes.push_back("cells: " + std::to_string(demo.adaptive.plan.size()) + ", rounds: " +
                        std::to_string(demo.adaptive.trace.rounds.size()) + " (" +
                        demo.adaptive.trace.stop_reason + ")");
    for (const auto& s : demo.badcells) {
      out.notes.push_back("badcell [" + format_double(s.a) + ", " + format_double(s.b) +
                          "]: max error APiPCT " + format_double(s.max_error_apipct) +
                          ", PiPCT " + format_double(s.max_error_pipct));
    }
  } else if (e == "degrees") {
    out.table = to_csv(run_degree_sweep(c));
  } else if (e == "poles") {
    const auto sweeps = run_poles(c);
    out.table = to_csv(sweeps);
    for (const auto& s : sweeps) {
      out.notes.push_back("[" + std::to_string(s.n_p) + "/" + std::to_string(s.n_q) +
                          "] cell " + std::to_string(s.report.cell) + ": " +
                          std::to_string(s.report.spurious_count()) + " spurious of " +
                          std::to_string(s.report.poles.size()) + " poles");
    }
  } else if (e == "timing") {
    out.table = to_csv(run_timing(c));
  } else {
    throw ConfigError("unknown experiment '" + e + "'");
  }
  return out;
}

}  // namespace pipct
