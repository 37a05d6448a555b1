#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "pipct/chebyshev.hpp"
#include "pipct/error.hpp"
#include "pipct/interval.hpp"
#include "pipct/svd.hpp"

namespace pipct {

/// Homogeneous Toeplitz system A q = 0 for the [n_p / n_q] denominator.
///
/// entries(i - 1, k) = c_{n_p + i - k} for i = 1 .. n_q, k = 0 .. n_q.
struct ToeplitzSystem {
  int n_p = 0;
  int n_q = 0;
  DenseMatrix entries;
  /// max |c_k| over k = 0 .. n_p + n_q; sets the noise floor for ties.
  double coefficient_scale = 0.0;
};

inline ToeplitzSystem build_toeplitz(const ChebyshevSeries& series, int n_p,
                                     int n_q) {
  if (n_p < 0 || n_q < 1) {
    throw InvalidArgument("build_toeplitz requires n_p >= 0 and n_q >= 1");
  }
  const int required = n_p + n_q + 1;
  if (series.degree() + 1 < required) {
    std::ostringstream os;
    os << "build_toeplitz: [" << n_p << "/" << n_q << "] needs " << required
       << " coefficients, series holds " << series.degree() + 1;
    throw InvalidArgument(os.str());
  }
  const auto c = series.coeffs();
  ToeplitzSystem system;
  system.n_p = n_p;
  system.n_q = n_q;
  system.entries = DenseMatrix(static_cast<std::size_t>(n_q),
                               static_cast<std::size_t>(n_q) + 1);
  for (int i = 1; i <= n_q; ++i) {
    for (int k = 0; k <= n_q; ++k) {
      // c_{-m} = c_m for the cosine series.
      const int idx = std::abs(n_p + i - k);
      system.entries(static_cast<std::size_t>(i - 1),
                     static_cast<std::size_t>(k)) = c[static_cast<std::size_t>(idx)];
    }
  }
  for (int k = 0; k < required; ++k) {
    system.coefficient_scale =
        std::max(system.coefficient_scale, std::abs(c[static_cast<std::size_t>(k)]));
  }
  return system;
}

struct DenominatorSolution {
  std::vector<double> q;
  /// Descending; has n_q + 1 entries (the last is the structural zero).
  std::vector<double> singular_values;
  /// Number of singular values tied with the smallest one.
  int nullspace_dim = 1;
};

/// Relative tie threshold for singular values at the bottom of the spectrum.
inline constexpr double kSingularTieTolerance = 1e-12;

namespace detail {

inline void canonical_sign(std::vector<double>& q) {
  std::size_t big = 0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (std::abs(q[i]) > std::abs(q[big])) big = i;
  }
  if (q[big] < 0.0) {
    for (double& v : q) v = -v;
  }
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// Unit-norm null vector of the Toeplitz system.
///
/// When the smallest singular value is isolated the result is its right
/// singular vector. When several tie within kSingularTieTolerance times the
/// coefficient scale, the null space is numerically multi-dimensional and the
/// result is the normalized projection of e_0 onto it (falling back to e_1,
/// e_2, ... if e_0 is orthogonal to it). This picks Q = 1 whenever the
/// system is pure roundoff, independent of the SVD's basis choice.
inline DenominatorSolution solve_denominator_detailed(
    const ToeplitzSystem& system) {
  const auto svd = jacobi_svd(system.entries);
  const std::size_t cols = svd.singular_values.size();
  DenominatorSolution out;
  out.singular_values = svd.singular_values;
  const double smallest = svd.singular_values.back();
  const double tie = smallest + kSingularTieTolerance * system.coefficient_scale;
  std::size_t first_tied = cols - 1;
  while (first_tied > 0 && svd.singular_values[first_tied - 1] <= tie) {
    --first_tied;
  }
  out.nullspace_dim = static_cast<int>(cols - first_tied);
  if (out.nullspace_dim == 1) {
    out.q = svd.right_vectors.back();
  } else {
    std::vector<double> q(cols, 0.0);
    for (std::size_t unit = 0; unit < cols; ++unit) {
      std::fill(q.begin(), q.end(), 0.0);
      for (std::size_t i = first_tied; i < cols; ++i) {
        const auto& v = svd.right_vectors[i];
        for (std::size_t j = 0; j < cols; ++j) q[j] += v[unit] * v[j];
      }
      if (detail::norm2(q) > 1e-8) break;
    }
    out.q = std::move(q);
  }
  const double nrm = detail::norm2(out.q);
  for (double& v : out.q) v /= nrm;
  detail::canonical_sign(out.q);
  return out;
}

inline std::vector<double> solve_denominator(const ToeplitzSystem& system) {
  return solve_denominator_detailed(system).q;
}

/// p_i = sum_{k=0}^{min(i, n_q)} c*_{i-k} q_k with c*_0 = c_0 / 2.
inline std::vector<double> compute_numerator(const ChebyshevSeries& series,
                                             std::span<const double> q,
                                             int n_p, int n_q) {
  if (n_p < 0 || n_q < 0) throw InvalidArgument("degrees must be >= 0");
  if (q.size() != static_cast<std::size_t>(n_q) + 1) {
    std::ostringstream os;
    os << "compute_numerator: q has length " << q.size() << ", expected "
       << n_q + 1;
    throw InvalidArgument(os.str());
  }
  if (series.degree() < n_p) {
    std::ostringstream os;
    os << "compute_numerator: needs " << n_p + 1 << " coefficients, series holds "
       << series.degree() + 1;
    throw InvalidArgument(os.str());
  }
  const auto c = series.coeffs();
  std::vector<double> p(static_cast<std::size_t>(n_p) + 1, 0.0);
  for (int i = 0; i <= n_p; ++i) {
    double sum = 0.0;
    for (int k = 0; k <= std::min(i, n_q); ++k) {
      const double ck = (i == k) ? 0.5 * c[0] : c[static_cast<std::size_t>(i - k)];
      sum += ck * q[static_cast<std::size_t>(k)];
    }
    p[static_cast<std::size_t>(i)] = sum;
  }
  return p;
}

/// Complex Horner evaluation of sum_k coeffs[k] z^k.
inline std::complex<double> horner(std::span<const double> coeffs,
                                   std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

/// Rational P(z) / Q(z) whose real part on the unit circle approximates f.
class PadeChebyshevApproximant {
 public:
  PadeChebyshevApproximant(Interval interval, int n, std::vector<double> p,
                           std::vector<double> q, int nullspace_dim = 1)
      : interval_(interval),
        n_(n),
        p_(std::move(p)),
        q_(std::move(q)),
        nullspace_dim_(nullspace_dim) {
    if (n_ < 1) throw InvalidArgument("approximant node count must be >= 1");
    if (q_.size() < 2 || p_.size() < q_.size()) {
      throw InvalidArgument("approximant requires n_p >= n_q >= 1");
    }
    for (double v : p_) {
      if (!std::isfinite(v)) throw InvalidArgument("numerator not finite");
    }
    for (double v : q_) {
      if (!std::isfinite(v)) throw InvalidArgument("denominator not finite");
    }
    if (std::abs(detail::norm2(q_) - 1.0) > 1e-12) {
      throw InvalidArgument("denominator must have unit 2-norm");
    }
  }

  const Interval& interval() const noexcept { return interval_; }
  int nodes() const noexcept { return n_; }
  int n_p() const noexcept { return static_cast<int>(p_.size()) - 1; }
  int n_q() const noexcept { return static_cast<int>(q_.size()) - 1; }
  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> q() const noexcept { return q_; }
  /// > 1 when the denominator came from a numerically degenerate system.
  int nullspace_dim() const noexcept { return nullspace_dim_; }
  bool degenerate() const noexcept { return nullspace_dim_ > 1; }

  std::complex<double> numerator_at(std::complex<double> z) const {
    return horner(p_, z);
  }
  std::complex<double> denominator_at(std::complex<double> z) const {
    return horner(q_, z);
  }

  friend bool operator==(const PadeChebyshevApproximant&,
                         const PadeChebyshevApproximant&) = default;

 private:
  Interval interval_;
  int n_;
  std::vector<double> p_;
  std::vector<double> q_;
  int nullspace_dim_;
};

inline void validate_degrees(int n_p, int n_q) {
  if (!(n_p >= n_q && n_q >= 1)) {
    std::ostringstream os;
    os << "degrees must satisfy n_p >= n_q >= 1, got [" << n_p << "/" << n_q
       << "]";
    throw InvalidArgument(os.str());
  }
}

/// PCT from an existing series holding coefficients up to n_p + n_q.
inline PadeChebyshevApproximant build_pct_from_series(
    const ChebyshevSeries& series, int n_p, int n_q) {
  validate_degrees(n_p, n_q);
  const auto system = build_toeplitz(series, n_p, n_q);
  auto solution = solve_denominator_detailed(system);
  auto p = compute_numerator(series, solution.q, n_p, n_q);
  return PadeChebyshevApproximant(series.interval(), series.nodes(),
                                  std::move(p), std::move(solution.q),
                                  solution.nullspace_dim);
}

template <RealFunction F>
PadeChebyshevApproximant build_pct(const F& f, const Interval& interval, int n,
                                   int n_p, int n_q) {
  validate_degrees(n_p, n_q);
  return build_pct_from_series(compute_coefficients(f, interval, n, n_p + n_q),
                               n_p, n_q);
}

/// Threshold below which |Q(z)| counts as a pole at the evaluation point.
inline constexpr double kPoleThreshold = 1e-300;

inline double evaluate_pct(const PadeChebyshevApproximant& r, double x) {
  const double y = map_to_reference(r.interval(), x);
  const std::complex<double> z = std::polar(1.0, std::acos(y));
  const auto den = r.denominator_at(z);
  if (std::abs(den) < kPoleThreshold) {
    std::ostringstream os;
    os << "denominator vanishes at x = " << x;
    throw PoleError(os.str(), x);
  }
  return (r.numerator_at(z) / den).real();
}

struct CircleMinimum {
  double min_magnitude = 0.0;
  double argmin_theta = 0.0;  ///< in [0, pi]
};

/// min |Q(e^{i theta})| over theta in [0, pi].
///
/// Scans `samples` uniform angles (endpoints included). With `refine`, a
/// golden-section search on the bracket around the discrete minimum follows.
inline CircleMinimum denominator_min_on_circle(
    const PadeChebyshevApproximant& r, int samples, bool refine = false) {
  if (samples < 2) throw InvalidArgument("circle scan needs >= 2 samples");
  const double pi = std::numbers::pi;
  const double step = pi / (samples - 1);
  auto magnitude = [&](double theta) {
    return std::abs(r.denominator_at(std::polar(1.0, theta)));
  };
  CircleMinimum best{magnitude(0.0), 0.0};
  int best_index = 0;
  for (int i = 1; i < samples; ++i) {
    const double theta = (i == samples - 1) ? pi : i * step;
    const double m = magnitude(theta);
    if (m < best.min_magnitude) {
      best = {m, theta};
      best_index = i;
    }
  }
  if (refine) {
    double lo = std::max(0.0, (best_index - 1) * step);
    double hi = std::min(pi, (best_index + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = magnitude(x1);
    double f2 = magnitude(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = magnitude(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = magnitude(x2);
      }
    }
    if (f1 < best.min_magnitude) best = {f1, x1};
    if (f2 < best.min_magnitude) best = {f2, x2};
  }
  return best;
}

}  // namespace pipct
