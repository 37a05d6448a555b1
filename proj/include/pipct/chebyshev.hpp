#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "pipct/error.hpp"
#include "pipct/interval.hpp"

namespace pipct {

template <class F>
concept RealFunction = std::invocable<const F&, double> &&
    std::convertible_to<std::invoke_result_t<const F&, double>, double>;

namespace detail {

/// Table of cos(m * pi / (2n)) for m = 0 .. 4n-1.
///
/// Every entry is derived from the first quadrant so that the symmetries
/// cos(pi - a) = -cos(a) and cos(2 pi - a) = cos(a) hold bit-exactly, and
/// cos(pi / 2) is exactly zero. The quadrature identities on the node set
/// then hold up to summation roundoff only.
inline std::vector<double> quarter_wave_table(std::size_t n) {
  const std::size_t period = 4 * n;
  std::vector<double> first(n + 1);
  const double step = std::numbers::pi / (2.0 * static_cast<double>(n));
  for (std::size_t r = 0; r <= n; ++r) {
    if (r == n) {
      first[r] = 0.0;
    } else if (2 * r <= n) {
      first[r] = std::cos(static_cast<double>(r) * step);
    } else {
      first[r] = std::sin(static_cast<double>(n - r) * step);
    }
  }
  std::vector<double> table(period);
  for (std::size_t m = 0; m < period; ++m) {
    std::size_t r = m > 2 * n ? period - m : m;
    table[m] = r > n ? -first[2 * n - r] : first[r];
  }
  return table;
}

}  // namespace detail

/// First-kind Chebyshev nodes cos((l + 1/2) pi / n), l = 0 .. n-1.
inline std::vector<double> chebyshev_points(int n) {
  if (n < 1) throw InvalidArgument("chebyshev_points requires n >= 1");
  const auto table = detail::quarter_wave_table(static_cast<std::size_t>(n));
  std::vector<double> points(static_cast<std::size_t>(n));
  for (std::size_t l = 0; l < points.size(); ++l) points[l] = table[2 * l + 1];
  return points;
}

/// Truncated Chebyshev series with quadrature-approximated coefficients.
///
/// coeffs[0] is stored unhalved; evaluation applies the c_0 / 2 convention.
class ChebyshevSeries {
 public:
  ChebyshevSeries(Interval interval, int n, std::vector<double> coeffs)
      : interval_(interval), n_(n), coeffs_(std::move(coeffs)) {
    if (n_ < 1) throw InvalidArgument("series node count must be >= 1");
    if (coeffs_.empty()) throw InvalidArgument("series needs >= 1 coefficient");
    for (double c : coeffs_) {
      if (!std::isfinite(c)) {
        throw InvalidArgument("series coefficients must be finite");
      }
    }
  }

  const Interval& interval() const noexcept { return interval_; }
  int nodes() const noexcept { return n_; }
  /// Highest stored coefficient index d.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_.at(k); }

 private:
  Interval interval_;
  int n_;
  std::vector<double> coeffs_;
};

/// f evaluated at the n Chebyshev nodes mapped onto `interval`, in node order.
template <RealFunction F>
std::vector<double> sample_at_nodes(const F& f, const Interval& interval,
                                    int n) {
  const auto nodes = chebyshev_points(n);
  std::vector<double> values(nodes.size());
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    const double x = map_to_interval(interval, nodes[l]);
    const double v = static_cast<double>(f(x));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "function is not finite at node x = " << x;
      throw EvaluationError(os.str(), x);
    }
    values[l] = v;
  }
  return values;
}

/// c_{k,n} = (2/n) sum_l f(t_l) T_k(t_l), k = 0 .. d, from node values.
inline std::vector<double> coefficients_from_values(
    std::span<const double> values, int d) {
  if (values.empty()) throw InvalidArgument("need at least one node value");
  if (d < 0) throw InvalidArgument("series degree must be >= 0");
  const std::size_t n = values.size();
  const std::size_t period = 4 * n;
  const auto table = detail::quarter_wave_table(n);
  std::vector<double> coeffs(static_cast<std::size_t>(d) + 1);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const std::size_t kk = k % period;
    double sum = 0.0;
    // T_k(t_l) = cos(k (2l+1) pi / 2n); the angle index advances by 2k.
    std::size_t m = kk;
    const std::size_t stride = (2 * kk) % period;
    for (std::size_t l = 0; l < n; ++l) {
      sum += values[l] * table[m];
      m += stride;
      if (m >= period) m -= period;
    }
    coeffs[k] = scale * sum;
  }
  return coeffs;
}

template <RealFunction F>
ChebyshevSeries compute_coefficients(const F& f, const Interval& interval,
                                     int n, int d) {
  const auto values = sample_at_nodes(f, interval, n);
  return ChebyshevSeries(interval, n, coefficients_from_values(values, d));
}

/// Sum' c_k T_k(y) for y in [-1, 1] by backward recurrence.
inline double clenshaw(std::span<const double> coeffs, double y) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
    const double b0 = coeffs[k] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return 0.5 * coeffs[0] + y * b1 - b2;
}

inline double evaluate_series(const ChebyshevSeries& series, double x) {
  return clenshaw(series.coeffs(), map_to_reference(series.interval(), x));
}

/// Smoothness data for the algebraic coefficient decay bounds.
struct DecayBoundParams {
  int k = 0;          ///< f^(k-1) absolutely continuous, f^(k) of bounded variation
  double V_k = 0.0;   ///< weighted total variation of f^(k)
  Interval interval{-1.0, 1.0};
};

struct AnalyticBoundParams {
  double rho = 2.0;  ///< Bernstein ellipse parameter, > 1
  double C = 1.0;    ///< bound on |f| inside the ellipse
};

namespace detail {

inline void validate(const DecayBoundParams& p) {
  if (p.k < 0) throw InvalidArgument("smoothness order k must be >= 0");
  if (!(p.V_k >= 0.0) || !std::isfinite(p.V_k)) {
    throw InvalidArgument("V_k must be finite and >= 0");
  }
}

/// prod_{i=lo}^{hi} (base + 2 i), with `base` already carrying any offset.
inline double stride_two_product(double base, int lo, int hi) {
  double prod = 1.0;
  for (int i = lo; i <= hi; ++i) prod *= base + 2.0 * i;
  return prod;
}

}  // namespace detail

/// Upper bound on |c_index| for f with k-1 absolutely continuous derivatives
/// and f^(k) of bounded variation V_k. Valid for index >= k + 1.
inline double coefficient_decay_bound(const DecayBoundParams& params,
                                      int index) {
  detail::validate(params);
  if (index <= params.k) {
    throw InvalidArgument("decay bound needs index >= k + 1");
  }
  const double half_width = 0.5 * params.interval.width();
  const double n = static_cast<double>(index);
  const int s = params.k / 2;
  if (params.k % 2 == 0) {
    return std::pow(half_width, 2 * s + 1) * 2.0 * params.V_k /
           (std::numbers::pi * detail::stride_two_product(n, -s, s));
  }
  return std::pow(half_width, 2 * s + 2) * 2.0 * params.V_k /
         (std::numbers::pi * detail::stride_two_product(n - 1.0, -s, s + 1));
}

/// L1 bound C_{d,n} on f - C_{d,n}[f] under the decay-bound hypotheses.
///
/// Both branches are implemented as printed: for d <= n the products run
/// over n + l (+1) with factor 4, for d > n over n - l with factor 6.
inline double truncation_error_bound(const DecayBoundParams& params, int n,
                                     int d) {
  detail::validate(params);
  const int k = params.k;
  if (k < 1 || n - 1 < k) {
    throw InvalidArgument("truncation bound requires n - 1 >= k >= 1");
  }
  if (d < 0) throw InvalidArgument("truncation bound requires d >= 0");
  const int l = d - n;
  const int s = k / 2;
  const double half_width = 0.5 * params.interval.width();
  const double kk = static_cast<double>(k);
  const double pi = std::numbers::pi;
  double sum = 0.0;
  double factor = 0.0;
  int power = 0;
  if (l <= 0) {
    const double base = static_cast<double>(n + l);
    factor = 4.0;
    if (k % 2 == 0) {
      power = 2 * s + 2;
      sum = 1.0 / detail::stride_two_product(base + 1.0, -s, s - 1) +
            1.0 / detail::stride_two_product(base + 1.0, -s + 1, s);
    } else {
      power = 2 * s + 3;
      sum = 1.0 / detail::stride_two_product(base, -s, s) +
            1.0 / detail::stride_two_product(base + 1.0, -s, s);
    }
  } else {
    const double base = static_cast<double>(n - l);
    factor = 6.0;
    if (k % 2 == 0) {
      power = 2 * s + 2;
      sum = 1.0 / detail::stride_two_product(base, -s, s - 1) +
            1.0 / detail::stride_two_product(base, -s + 1, s);
    } else {
      power = 2 * s + 3;
      sum = 1.0 / detail::stride_two_product(base - 1.0, -s, s) +
            1.0 / detail::stride_two_product(base, -s, s);
    }
  }
  return std::pow(half_width, power) * factor * params.V_k / (kk * pi) * sum;
}

/// |c_j| < 2 C / rho^j for f analytic inside the Bernstein ellipse rho.
inline double analytic_decay_bound(const AnalyticBoundParams& params, int j) {
  if (!(params.rho > 1.0)) throw InvalidArgument("rho must exceed 1");
  if (!(params.C > 0.0)) throw InvalidArgument("C must be positive");
  if (j < 0) throw InvalidArgument("coefficient index must be >= 0");
  return 2.0 * params.C / std::pow(params.rho, j);
}

}  // namespace pipct
