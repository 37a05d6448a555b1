#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pipct/adaptive.hpp"
#include "pipct/functions.hpp"

using namespace pipct;

namespace {

const Function& jump_kink() { return registry_lookup("jump_kink").f; }

bool near_singularity(double x, double tol) {
  return std::abs(x + 0.4) <= tol || std::abs(x - 0.4) <= tol;
}

}  // namespace

TEST(BadcellParams, Validation) {
  BadcellParams p;
  EXPECT_NO_THROW(p.validate());
  p.epsilon = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  AdaptiveParams a;
  a.tau = -1.0;
  EXPECT_THROW(a.validate(), InvalidArgument);
}

TEST(Badcells, SmoothFunctionHasNone) {
  const auto r = detect_badcells([](double x) { return std::exp(x); },
                                 uniform_partition(Interval(-1, 1), 16), BadcellParams{});
  EXPECT_EQ(r.count(), 0u);
  for (const auto& c : r.cells) EXPECT_GT(c.min_q, 1e-2);
}

TEST(Badcells, LocalizeJumpKinkSingularities) {
  const auto p = uniform_partition(Interval(-1, 1), 512);
  const auto r = detect_badcells(jump_kink(), p, BadcellParams{});
  ASSERT_GT(r.count(), 0u);
  bool covers_left = false, covers_right = false;
  for (auto j : r.flagged()) {
    const auto c = p.cell(j);
    EXPECT_TRUE(near_singularity(c.midpoint(), 0.05)) << c.midpoint();
    covers_left |= c.a() <= -0.4 && -0.4 <= c.b();
    covers_right |= c.a() <= 0.4 && 0.4 <= c.b();
  }
  EXPECT_TRUE(covers_left);
  EXPECT_TRUE(covers_right);
}

TEST(Badcells, FailedProbeIsFlagged) {
  auto f = [](double x) { return x > 0.0 ? std::nan("") : x; };
  const auto r = detect_badcells(f, uniform_partition(Interval(-1, 1), 2), BadcellParams{});
  EXPECT_FALSE(r.cells[0].is_badcell);
  EXPECT_TRUE(r.cells[1].is_badcell);
  EXPECT_TRUE(r.cells[1].failed);
  EXPECT_FALSE(r.cells[1].note.empty());
}

TEST(Refinement, SmoothFunctionSingleRound) {
  const auto t = refine_partition_traced([](double x) { return std::exp(x); }, Interval(-1, 1),
                                         AdaptiveParams{});
  EXPECT_EQ(t.rounds.size(), 1u);
  EXPECT_EQ(t.final_partition.cells(), 2u);
  EXPECT_EQ(t.stop_reason, "no badcells");
}

TEST(Refinement, TraceIsNestedAndLocal) {
  AdaptiveParams params;
  params.badcell.n = 100;
  const auto t = refine_partition_traced(jump_kink(), Interval(-1, 1), params);
  ASSERT_GE(t.rounds.size(), 2u);
  const int bound = static_cast<int>(std::ceil(std::log2(2.0 / params.tau))) + 1;
  EXPECT_LE(static_cast<int>(t.rounds.size()), bound);
  for (std::size_t r = 0; r + 1 <= t.rounds.size(); ++r) {
    const auto& before = t.rounds[r].partition.breakpoints();
    const auto& after =
        r + 1 < t.rounds.size() ? t.rounds[r + 1].partition.breakpoints()
                                : t.final_partition.breakpoints();
    // Nested: every old breakpoint survives.
    for (double x : before) {
      EXPECT_TRUE(std::binary_search(after.begin(), after.end(), x));
    }
    // Local: every new breakpoint is the midpoint of a cell flagged this round.
    for (double x : after) {
      if (std::binary_search(before.begin(), before.end(), x)) continue;
      bool inside = false;
      for (const auto& probe : t.rounds[r].examined) {
        inside |= probe.is_badcell && 0.5 * (probe.a + probe.b) == x;
      }
      EXPECT_TRUE(inside) << "round " << r << " x=" << x;
    }
  }
  for (const auto& round : t.rounds) {
    for (const auto& probe : round.examined) {
      if (probe.is_badcell) EXPECT_TRUE(near_singularity(0.5 * (probe.a + probe.b), 0.5));
    }
  }
  EXPECT_LT(t.final_partition.min_width(), params.tau);
}

TEST(Refinement, MaxRoundsCap) {
  AdaptiveParams params;
  params.max_rounds = 2;
  params.tau = 1e-9;
  const auto t = refine_partition_traced(jump_kink(), Interval(-1, 1), params);
  EXPECT_EQ(t.rounds.size(), 2u);
  EXPECT_EQ(t.stop_reason, "max_rounds reached");
}

TEST(Apipct, DegreesFollowFinalBadcells) {
  AdaptiveParams params;
  params.badcell.n = 100;
  const auto a = build_apipct(jump_kink(), Interval(-1, 1), params, 100);
  const auto cells = a.approximant().partition.cells();
  EXPECT_GE(cells, 12u);
  EXPECT_LE(cells, 30u);
  ASSERT_EQ(a.plan.size(), cells);
  std::size_t raised = 0;
  for (std::size_t j = 0; j < cells; ++j) {
    const bool bad = a.final_report.cells[j].is_badcell;
    EXPECT_EQ(a.plan[j], bad ? (DegreePair{100, 20}) : (DegreePair{20, 20}));
    raised += bad;
    ASSERT_TRUE(a.approximant().pieces[j].has_value());
    EXPECT_EQ(a.approximant().pieces[j]->n_p(), a.plan[j].n_p);
  }
  EXPECT_GE(raised, 2u);
}

TEST(Apipct, Deterministic) {
  AdaptiveParams params;
  params.badcell.n = 100;
  const auto a = build_apipct(jump_kink(), Interval(-1, 1), params, 100);
  const auto b = build_apipct(jump_kink(), Interval(-1, 1), params, 100);
  EXPECT_EQ(a.approximant(), b.approximant());
}
