#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pipct/chebyshev.hpp"
#include "pipct/error.hpp"
#include "pipct/interval.hpp"
#include "pipct/pade.hpp"

namespace pipct {

/// Strictly increasing breakpoints a_0 < ... < a_N. Cell j is [a_j, a_{j+1})
/// and the last cell is closed.
class Partition {
 public:
  explicit Partition(std::vector<double> breakpoints)
      : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.size() < 2) {
      throw InvalidArgument("partition needs at least two breakpoints");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (!std::isfinite(breakpoints_[i])) {
        throw InvalidArgument("partition breakpoints must be finite");
      }
      if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
        throw InvalidArgument("partition breakpoints must be strictly increasing");
      }
    }
  }

  std::size_t cells() const noexcept { return breakpoints_.size() - 1; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  Interval cell(std::size_t j) const {
    return Interval(breakpoints_.at(j), breakpoints_.at(j + 1));
  }
  Interval domain() const { return Interval(breakpoints_.front(), breakpoints_.back()); }
  double min_width() const {
    double w = breakpoints_[1] - breakpoints_[0];
    for (std::size_t j = 1; j < cells(); ++j) {
      w = std::min(w, breakpoints_[j + 1] - breakpoints_[j]);
    }
    return w;
  }

  /// Index of the cell holding x; throws outside [a, b].
  std::size_t locate(double x) const {
    if (!(x >= breakpoints_.front() && x <= breakpoints_.back())) {
      std::ostringstream os;
      os << "x = " << x << " outside partition [" << breakpoints_.front()
         << ", " << breakpoints_.back() << "]";
      throw InvalidArgument(os.str());
    }
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
    return std::min(idx, breakpoints_.size() - 1) - 1;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<double> breakpoints_;
};

inline Partition uniform_partition(const Interval& interval, int N) {
  if (N < 1) throw InvalidArgument("uniform_partition requires N >= 1");
  std::vector<double> bp(static_cast<std::size_t>(N) + 1);
  const double h = interval.width() / N;
  for (int j = 0; j <= N; ++j) bp[static_cast<std::size_t>(j)] = interval.a() + j * h;
  bp.front() = interval.a();
  bp.back() = interval.b();
  return Partition(std::move(bp));
}

struct DegreePair {
  int n_p = 1;
  int n_q = 1;
  friend bool operator==(const DegreePair&, const DegreePair&) = default;
};

/// Per-cell numerator/denominator degrees.
using DegreePlan = std::vector<DegreePair>;

inline DegreePlan uniform_plan(std::size_t cells, int n_p, int n_q) {
  validate_degrees(n_p, n_q);
  return DegreePlan(cells, DegreePair{n_p, n_q});
}

/// One PCT per partition cell. A cell whose construction failed holds no piece.
struct PiecewiseApproximant {
  Partition partition;
  std::vector<std::optional<PadeChebyshevApproximant>> pieces;
  int n = 0;

  friend bool operator==(const PiecewiseApproximant&,
                         const PiecewiseApproximant&) = default;
};

struct CellFailure {
  std::size_t cell = 0;
  std::string message;
};

struct PiecewiseBuild {
  PiecewiseApproximant approximant;
  std::vector<CellFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

template <RealFunction F>
PiecewiseBuild build_pipct(const F& f, const Partition& partition,
                           const DegreePlan& plan, int n) {
  if (plan.size() != partition.cells()) {
    std::ostringstream os;
    os << "degree plan has " << plan.size() << " entries for "
       << partition.cells() << " cells";
    throw InvalidArgument(os.str());
  }
  if (n < 1) throw InvalidArgument("node count n must be >= 1");
  PiecewiseBuild out{PiecewiseApproximant{partition, {}, n}, {}};
  out.approximant.pieces.reserve(partition.cells());
  for (std::size_t j = 0; j < partition.cells(); ++j) {
    try {
      out.approximant.pieces.emplace_back(
          build_pct(f, partition.cell(j), n, plan[j].n_p, plan[j].n_q));
    } catch (const std::exception& e) {
      out.approximant.pieces.emplace_back(std::nullopt);
      out.failures.push_back({j, e.what()});
    }
  }
  return out;
}

/// Evaluates the piece of cell j at x, which must lie in that cell.
inline double evaluate_in_cell(const PiecewiseApproximant& r, std::size_t j,
                               double x) {
  const auto& piece = r.pieces.at(j);
  if (!piece) {
    std::ostringstream os;
    os << "no approximant in cell " << j << " (construction failed)";
    throw EvaluationError(os.str(), x);
  }
  return evaluate_pct(*piece, x);
}

inline double evaluate_piecewise(const PiecewiseApproximant& r, double x) {
  return evaluate_in_cell(r, r.partition.locate(x), x);
}

/// Piecewise truncated Chebyshev series, one per cell.
struct PiecewiseChebyshev {
  Partition partition;
  std::vector<ChebyshevSeries> pieces;
};

template <RealFunction F>
PiecewiseChebyshev build_piecewise_chebyshev(const F& f,
                                             const Partition& partition,
                                             int n, int d) {
  PiecewiseChebyshev out{partition, {}};
  out.pieces.reserve(partition.cells());
  for (std::size_t j = 0; j < partition.cells(); ++j) {
    out.pieces.push_back(compute_coefficients(f, partition.cell(j), n, d));
  }
  return out;
}

inline double evaluate_in_cell(const PiecewiseChebyshev& r, std::size_t j,
                               double x) {
  return evaluate_series(r.pieces.at(j), x);
}

inline double evaluate_piecewise(const PiecewiseChebyshev& r, double x) {
  return evaluate_in_cell(r, r.partition.locate(x), x);
}

struct L1Result {
  double value = 0.0;
  /// Samples where the approximant could not be evaluated; |f| was used.
  std::size_t pole_samples = 0;
};

/// Default panel count per cell for the L1 quadrature.
inline constexpr int kDefaultSamplesPerCell = 2048;

/// Composite midpoint integral of |f - r| over `region`.
///
/// Panels are laid out per cell over cell ∩ region, so no panel straddles a
/// breakpoint or the region boundary.
template <class Approx, RealFunction F>
L1Result l1_error(const Approx& r, const F& f, const Interval& region,
                  int samples_per_cell = kDefaultSamplesPerCell) {
  const Partition& partition = r.partition;
  const Interval dom = partition.domain();
  if (region.a() < dom.a() || region.b() > dom.b()) {
    throw InvalidArgument("l1_error: region must lie inside the partition");
  }
  if (samples_per_cell < 16) {
    throw InvalidArgument("l1_error: samples_per_cell must be >= 16");
  }
  L1Result out;
  const auto& bp = partition.breakpoints();
  for (std::size_t j = 0; j < partition.cells(); ++j) {
    const double lo = std::max(bp[j], region.a());
    const double hi = std::min(bp[j + 1], region.b());
    if (!(hi > lo)) continue;
    const double w = (hi - lo) / samples_per_cell;
    double cell_sum = 0.0;
    for (int i = 0; i < samples_per_cell; ++i) {
      const double x = lo + (i + 0.5) * w;
      const double fx = static_cast<double>(f(x));
      double err;
      try {
        err = std::abs(fx - evaluate_in_cell(r, j, x));
      } catch (const PoleError&) {
        err = std::abs(fx);
        ++out.pole_samples;
      } catch (const EvaluationError&) {
        err = std::abs(fx);
        ++out.pole_samples;
      }
      cell_sum += err;
    }
    out.value += cell_sum * w;
  }
  return out;
}

struct OrderSample {
  double N = 0.0;
  double error = 0.0;
};

/// log(e_i / e_{i+1}) / log(N_{i+1} / N_i) for consecutive rows.
inline std::vector<double> convergence_order(const std::vector<OrderSample>& rows) {
  if (rows.size() < 2) throw InvalidArgument("convergence_order needs >= 2 rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].error > 0.0)) {
      throw InvalidArgument("convergence_order needs positive errors");
    }
    if (i > 0 && !(rows[i].N > rows[i - 1].N)) {
      throw InvalidArgument("convergence_order needs strictly increasing N");
    }
  }
  std::vector<double> orders;
  orders.reserve(rows.size() - 1);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    orders.push_back(std::log(rows[i].error / rows[i + 1].error) /
                     std::log(rows[i + 1].N / rows[i].N));
  }
  return orders;
}

}  // namespace pipct
