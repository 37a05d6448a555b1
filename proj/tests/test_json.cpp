#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pipct/adaptive.hpp"
#include "pipct/functions.hpp"
#include "pipct/json_io.hpp"

using namespace pipct;

namespace {

PiecewiseApproximant sample_approximant() {
  const auto& f = registry_lookup("jump_kink").f;
  const auto p = uniform_partition(Interval(-1, 1), 7);
  DegreePlan plan = uniform_plan(7, 6, 4);
  plan[3] = {12, 4};
  return build_pipct(f, p, plan, 64).approximant;
}

}  // namespace

TEST(Json, ApproximantRoundTripIsExact) {
  const auto r = sample_approximant();
  const auto text = to_json(r).dump();
  const auto back = approximant_from_json(Json::parse(text));
  EXPECT_EQ(back, r);
  for (int i = 0; i <= 70; ++i) {
    const double x = -1.0 + i / 35.0;
    EXPECT_EQ(evaluate_piecewise(back, x), evaluate_piecewise(r, x));
  }
}

TEST(Json, ApproximantDocumentShape) {
  const auto j = to_json(sample_approximant());
  EXPECT_EQ(j.at("format"), "pipct-approximant");
  EXPECT_EQ(j.at("version"), 1);
  EXPECT_EQ(j.at("n"), 64);
  EXPECT_EQ(j.at("breakpoints").size(), 8u);
  EXPECT_EQ(j.at("pieces")[3].at("n_p"), 12);
  EXPECT_EQ(j.at("pieces")[3].at("p").size(), 13u);
}

TEST(Json, FailedCellsSerializeAsNull) {
  auto r = sample_approximant();
  r.pieces[2].reset();
  const auto j = to_json(r);
  EXPECT_TRUE(j.at("pieces")[2].is_null());
  EXPECT_EQ(approximant_from_json(j), r);
}

TEST(Json, AwkwardDoublesRoundTrip) {
  const Partition p({-1.0, std::nextafter(-1.0, 0.0), 1e-300, std::nextafter(1e-300, 1.0), 0.1, 1.0 / 3.0,
                     std::numeric_limits<double>::max()});
  EXPECT_EQ(partition_from_json(Json::parse(to_json(p).dump())), p);
}

TEST(Json, RejectsMalformedDocuments) {
  auto j = to_json(sample_approximant());
  auto bad_format = j;
  bad_format["format"] = "other";
  EXPECT_THROW(approximant_from_json(bad_format), InvalidArgument);
  auto bad_len = j;
  bad_len["pieces"][0]["p"].erase(0);
  EXPECT_THROW(approximant_from_json(bad_len), InvalidArgument);
  auto bad_cells = j;
  bad_cells["pieces"].erase(0);
  EXPECT_THROW(approximant_from_json(bad_cells), InvalidArgument);
  auto bad_interval = j;
  bad_interval["pieces"][1]["interval"][0] = -0.9;
  EXPECT_THROW(approximant_from_json(bad_interval), InvalidArgument);
  auto missing = j;
  missing.erase("breakpoints");
  EXPECT_THROW(approximant_from_json(missing), InvalidArgument);
}

TEST(Json, TraceCarriesRoundsFlagsAndMinQ) {
  AdaptiveParams params;
  params.badcell.n = 100;
  const auto t = refine_partition_traced(registry_lookup("jump_kink").f, Interval(-1, 1), params);
  const auto j = to_json(t);
  ASSERT_EQ(j.at("rounds").size(), t.rounds.size());
  EXPECT_EQ(j.at("cells"), t.final_partition.cells());
  EXPECT_EQ(j.at("stop_reason"), t.stop_reason);
  const auto& first = j.at("rounds")[0];
  EXPECT_EQ(first.at("breakpoints").size(), 3u);
  EXPECT_EQ(first.at("examined").size(), 2u);
  EXPECT_TRUE(first.at("examined")[0].contains("min_q"));
  EXPECT_TRUE(first.at("examined")[0].contains("badcell"));
}
