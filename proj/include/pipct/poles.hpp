#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pipct/chebyshev.hpp"
#include "pipct/error.hpp"
#include "pipct/pade.hpp"

namespace pipct {

using Complex = std::complex<double>;

/// Degree after dropping leading coefficients below 1e-14 * max |coeff|.
inline int effective_degree(std::span<const double> coeffs) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return -1;
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && std::abs(coeffs[static_cast<std::size_t>(d)]) <= 1e-14 * scale) --d;
  return d;
}

namespace detail {

// Greedy power-of-two diagonal scaling of row/column pairs.
inline void balance(Eigen::MatrixXd& m) {
  const Eigen::Index size = m.rows();
  Eigen::MatrixXd off = m;
  off.diagonal().setZero();
  constexpr double gamma = 0.9;
  bool changed = true;
  for (int pass = 0; changed && pass < 100; ++pass) {
    changed = false;
    for (Eigen::Index i = 0; i < size; ++i) {
      const double row = off.row(i).lpNorm<1>();
      const double col = off.col(i).lpNorm<1>();
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double new_col = std::ldexp(col, exponent);
      const double new_row = std::ldexp(row, -exponent);
      if (new_col + new_row < gamma * (col + row)) {
        changed = true;
        off.row(i) *= std::ldexp(1.0, -exponent);
        off.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
  off.diagonal() = m.diagonal();
  m = off;
}

inline Complex polyval(std::span<const double> c, Complex z) { return horner(c, z); }

inline Complex polyder_val(std::span<const double> c, Complex z) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace detail

/// Roots of sum_k coeffs[k] z^k, sorted by nondecreasing modulus.
///
/// Companion-matrix eigenvalues of the monic polynomial (after balancing),
/// each polished by one Newton step when that lowers the residual.
inline std::vector<Complex> polynomial_roots(std::span<const double> coeffs) {
  const int d = effective_degree(coeffs);
  if (d < 0) throw InvalidArgument("polynomial_roots: all coefficients are zero");
  std::vector<Complex> roots;
  if (d == 0) return roots;
  const auto used = coeffs.first(static_cast<std::size_t>(d) + 1);
  const double lead = used[static_cast<std::size_t>(d)];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -used[static_cast<std::size_t>(i)] / lead;
  detail::balance(companion);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("polynomial_roots: eigenvalue iteration failed");
  }
  const auto& ev = solver.eigenvalues();
  roots.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    Complex z = ev(i);
    const Complex deriv = detail::polyder_val(used, z);
    if (std::abs(deriv) > 0.0) {
      const Complex polished = z - detail::polyval(used, z) / deriv;
      if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) &&
          std::abs(detail::polyval(used, polished)) < std::abs(detail::polyval(used, z))) {
        z = polished;
      }
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
    if (std::arg(x) != std::arg(y)) return std::arg(x) < std::arg(y);
    return x.real() < y.real();
  });
  return roots;
}

struct PoleInfo {
  Complex location;
  /// |P(zeta) / Q'(zeta)|; +infinity when zeta is a repeated root of Q.
  double residue_magnitude = 0.0;
  /// Distance to the nearest zero of P; +infinity when P has no zeros.
  double nearest_zero_distance = 0.0;
  bool spurious = false;
};

struct PoleReport {
  std::vector<PoleInfo> poles;
  std::vector<Complex> zeros;
  std::size_t cell = 0;

  std::size_t spurious_count() const {
    return static_cast<std::size_t>(std::count_if(
        poles.begin(), poles.end(), [](const PoleInfo& p) { return p.spurious; }));
  }
};

inline constexpr double kDefaultPairTolerance = 1e-8;

/// Residue threshold scaled to the function: 1e-10 * max |f| over the nodes.
template <RealFunction F>
double default_residue_tolerance(const F& f, const Interval& interval, int n) {
  double peak = 0.0;
  for (double v : sample_at_nodes(f, interval, n)) peak = std::max(peak, std::abs(v));
  return 1e-10 * (peak > 0.0 ? peak : 1.0);
}

/// Poles and zeros of P/Q in the z-plane with Froissart-doublet flags.
///
/// A pole is spurious when its residue magnitude is below residue_tol or a
/// zero of P lies within pair_tol of it.
inline PoleReport classify_froissart(const PadeChebyshevApproximant& r,
                                     double residue_tol, double pair_tol,
                                     std::size_t cell = 0) {
  if (!(residue_tol > 0.0) || !(pair_tol > 0.0)) {
    throw InvalidArgument("classify_froissart: tolerances must be positive");
  }
  PoleReport report;
  report.cell = cell;
  if (effective_degree(r.p()) >= 0) report.zeros = polynomial_roots(r.p());
  const auto q = r.q();
  double q_scale = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q_scale = std::max(q_scale, static_cast<double>(k) * std::abs(q[k]));
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (const Complex& zeta : polynomial_roots(q)) {
    PoleInfo info;
    info.location = zeta;
    const Complex dq = detail::polyder_val(q, zeta);
    const double zscale = std::max(1.0, std::pow(std::abs(zeta), static_cast<double>(q.size()) - 2.0));
    const bool repeated = std::abs(dq) < 1e-12 * q_scale * zscale;
    info.residue_magnitude = repeated ? inf : std::abs(r.numerator_at(zeta) / dq);
    info.nearest_zero_distance = inf;
    for (const Complex& z : report.zeros) {
      info.nearest_zero_distance = std::min(info.nearest_zero_distance, std::abs(z - zeta));
    }
    info.spurious = (!repeated && info.residue_magnitude < residue_tol) ||
                    info.nearest_zero_distance < pair_tol;
    report.poles.push_back(info);
  }
  return report;
}

}  // namespace pipct
