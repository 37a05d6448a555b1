#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "pipct/error.hpp"

namespace pipct {

/// Closed interval [a, b] with a < b.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
      std::ostringstream os;
      os << "interval requires finite a < b, got [" << a << ", " << b << "]";
      throw InvalidArgument(os.str());
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }
  double midpoint() const noexcept { return 0.5 * (a_ + b_); }
  bool contains(double x) const noexcept { return a_ <= x && x <= b_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Affine map from the reference interval [-1, 1] onto `interval`.
inline double map_to_interval(const Interval& interval, double y) {
  if (!(y >= -1.0 && y <= 1.0)) {
    throw InvalidArgument("reference coordinate must lie in [-1, 1]");
  }
  if (y == -1.0) return interval.a();
  if (y == 1.0) return interval.b();
  return interval.a() + interval.width() * (y + 1.0) * 0.5;
}

/// Inverse of map_to_interval. Results are clamped to [-1, 1] so that
/// roundoff at the endpoints never leaves the reference interval.
inline double map_to_reference(const Interval& interval, double x) {
  if (!interval.contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << interval.a() << ", " << interval.b()
       << "]";
    throw InvalidArgument(os.str());
  }
  if (x == interval.a()) return -1.0;
  if (x == interval.b()) return 1.0;
  const double y = 2.0 * (x - interval.a()) / interval.width() - 1.0;
  return y < -1.0 ? -1.0 : (y > 1.0 ? 1.0 : y);
}

}  // namespace pipct
