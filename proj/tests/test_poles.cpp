#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pipct/functions.hpp"
#include "pipct/piecewise.hpp"
#include "pipct/poles.hpp"

using namespace pipct;

namespace {

double poly_abs(std::span<const double> c, Complex z) { return std::abs(horner(c, z)); }

void expect_conjugate_closed(const std::vector<Complex>& roots) {
  for (const auto& z : roots) {
    double best = INFINITY;
    for (const auto& w : roots) best = std::min(best, std::abs(w - std::conj(z)));
    EXPECT_LE(best, 1e-10 * std::max(1.0, std::abs(z)));
  }
}

PadeChebyshevApproximant badcell_pct(int d) {
  const auto& f = registry_lookup("jump_kink").f;
  const auto p = uniform_partition(Interval(-1, 1), 512);
  return build_pct(f, p.cell(p.locate(-0.4)), 200, d, d);
}

}  // namespace

TEST(Roots, Examples) {
  const std::vector<double> z2m1{-1.0, 0.0, 1.0};
  const auto r = polynomial_roots(z2m1);
  ASSERT_EQ(r.size(), 2u);
  std::vector<double> re{r[0].real(), r[1].real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-12);
  EXPECT_NEAR(re[1], 1.0, 1e-12);
  const double k = 0.37;
  const std::vector<double> lin{1.0, -k};
  const auto one = polynomial_roots(lin);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].real(), 1.0 / k, 1e-12);
  EXPECT_NEAR(one[0].imag(), 0.0, 1e-12);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(polynomial_roots(zero), InvalidArgument);
}

TEST(Roots, TrimsNegligibleLeadingCoefficients) {
  const std::vector<double> c{-2.0, 1.0, 1e-17};
  const auto r = polynomial_roots(c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].real(), 2.0, 1e-12);
}

TEST(Roots, RandomResidualsAndOrdering) {
  auto gen = oracle::rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 15;
    std::vector<double> c(static_cast<std::size_t>(d) + 1);
    for (auto& v : c) v = g(gen);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const auto roots = polynomial_roots(c);
    ASSERT_EQ(roots.size(), static_cast<std::size_t>(d));
    double total = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const double zs = std::max(1.0, std::pow(std::abs(roots[i]), d));
      total += poly_abs(c, roots[i]) / zs;
      if (i > 0) EXPECT_LE(std::abs(roots[i - 1]), std::abs(roots[i]));
    }
    EXPECT_LE(total, 1e-8 * scale * d);
    expect_conjugate_closed(roots);
  }
}

TEST(Froissart, IdentityHasNoPoles) {
  for (int m : {1, 3, 6}) {
    const auto r = build_pct([](double x) { return x; }, Interval(-1, 1), 32, m, m);
    const auto rep = classify_froissart(r, 1e-10, 1e-8);
    EXPECT_TRUE(rep.poles.empty()) << m;
  }
}

TEST(Froissart, ToleranceValidation) {
  const auto r = build_pct([](double x) { return x; }, Interval(-1, 1), 16, 1, 1);
  EXPECT_THROW(classify_froissart(r, 0.0, 1e-8), InvalidArgument);
  EXPECT_THROW(classify_froissart(r, 1e-10, -1.0), InvalidArgument);
}

TEST(Froissart, GenuinePoleNearJump) {
  const auto r = badcell_pct(20);
  const auto tol = default_residue_tolerance(registry_lookup("jump_kink").f, r.interval(), 200);
  const auto rep = classify_froissart(r, tol, kDefaultPairTolerance);
  ASSERT_FALSE(rep.poles.empty());
  const double y = map_to_reference(r.interval(), -0.4);
  const double theta = std::acos(y);
  bool found = false;
  for (const auto& p : rep.poles) {
    if (p.spurious) continue;
    const double ang = std::abs(std::arg(p.location));
    found |= std::abs(std::abs(p.location) - 1.0) <= 0.1 && std::abs(ang - theta) <= 0.3;
  }
  EXPECT_TRUE(found);
}

TEST(Froissart, ExpPolesSpuriousOrFar) {
  const auto r = build_pct([](double x) { return std::exp(x); }, Interval(-1, 1), 200, 20, 20);
  const auto tol = default_residue_tolerance([](double x) { return std::exp(x); }, r.interval(), 200);
  const auto rep = classify_froissart(r, tol, kDefaultPairTolerance);
  for (const auto& p : rep.poles) {
    const double m = std::abs(p.location);
    EXPECT_TRUE(p.spurious || m < 0.8 || m > 1.25) << p.location;
  }
}

TEST(Froissart, ReportInvariants) {
  for (int d : {20, 30, 40}) {
    const auto r = badcell_pct(d);
    const auto rep = classify_froissart(r, 1e-10, 1e-8);
    EXPECT_LE(rep.poles.size(), static_cast<std::size_t>(r.n_q()));
    EXPECT_LE(rep.zeros.size(), static_cast<std::size_t>(r.n_p()));
    double qs = 0.0, ps = 0.0;
    for (double v : r.q()) qs = std::max(qs, std::abs(v));
    for (double v : r.p()) ps = std::max(ps, std::abs(v));
    std::vector<Complex> poles;
    for (const auto& p : rep.poles) {
      poles.push_back(p.location);
      const double zs = std::max(1.0, std::pow(std::abs(p.location), r.n_q()));
      EXPECT_LE(poly_abs(r.q(), p.location) / zs, 1e-8 * r.n_q() * qs);
      const bool rule = (std::isfinite(p.residue_magnitude) && p.residue_magnitude < 1e-10) ||
                        p.nearest_zero_distance < 1e-8;
      EXPECT_EQ(p.spurious, rule);
    }
    for (const auto& z : rep.zeros) {
      const double zs = std::max(1.0, std::pow(std::abs(z), r.n_p()));
      EXPECT_LE(poly_abs(r.p(), z) / zs, 1e-8 * r.n_p() * ps);
    }
    expect_conjugate_closed(poles);
    expect_conjugate_closed(rep.zeros);
  }
}

TEST(Froissart, SpuriousCountGrowsWithDegreeOnJumpBadcell) {
  const auto& f = registry_lookup("jump_kink").f;
  const auto r20 = badcell_pct(20);
  const auto r40 = badcell_pct(40);
  const double tol = default_residue_tolerance(f, r20.interval(), 200);
  EXPECT_GE(classify_froissart(r40, tol, kDefaultPairTolerance).spurious_count(),
            classify_froissart(r20, tol, kDefaultPairTolerance).spurious_count());
}

TEST(Froissart, RepeatedRootGetsInfiniteResidue) {
  // Q = (1 - z)^2 / norm has a double root at z = 1.
  const double s = std::sqrt(6.0);
  const PadeChebyshevApproximant r(Interval(-1, 1), 8, {1.0, 0.0, 0.0},
                                   {1.0 / s, -2.0 / s, 1.0 / s});
  const auto rep = classify_froissart(r, 1e-10, 1e-8);
  ASSERT_EQ(rep.poles.size(), 2u);
  int infinite = 0;
  for (const auto& p : rep.poles) {
    if (std::isinf(p.residue_magnitude)) {
      ++infinite;
      EXPECT_FALSE(p.spurious);
    }
  }
  EXPECT_GE(infinite, 1);
}
