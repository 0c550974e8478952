#include <gtest/gtest.h>

#include <cstring>

#include "dirtyregion/kernels.hpp"
#include "dirtyregion/mac_helper.hpp"
#include "dirtyregion/region.hpp"
#include "dirtyregion/search.hpp"

using namespace dirtyregion;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { set_parallel_jobs(GetParam()); }
  void TearDown() override { set_parallel_jobs(0); }
};

const MacHelperParams kMac{5.0, 2.5, 2.5, 12.0};

}  // namespace

TEST_P(ThreadCounts, MapIndicesMatchesSerial) {
  auto f = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)) / (1.0 + i); };
  const auto s = map_indices(1001, f, ExecPolicy::serial);
  const auto p = map_indices(1001, f, ExecPolicy::parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_TRUE(same_bits(s[i], p[i]));
}

TEST_P(ThreadCounts, PentagonGridMatchesSerial) {
  const auto as = linspace({-0.6, 2.6}, 33), bs = linspace({-0.6, 0.6}, 17);
  auto make = [](double a, double b) { return inner_pentagon(kMac, a, b); };
  const auto s = pentagon_grid_serial(as, bs, make);
  const auto p = pentagon_grid_parallel(as, bs, make);
  ASSERT_EQ(s.size(), as.size() * bs.size());
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_TRUE(same_bits(s[i].m1, p[i].m1));
    EXPECT_TRUE(same_bits(s[i].m2, p[i].m2));
    EXPECT_TRUE(same_bits(s[i].m12, p[i].m12));
  }
  // Row-major over alpha.
  const auto p01 = inner_pentagon(kMac, as[0], bs[1]);
  EXPECT_TRUE(same_bits(s[1].m12, p01.m12));
}

TEST_P(ThreadCounts, EnvelopeMatchesSerial) {
  const auto ps = inner_pentagons(kMac, {65, 33, 129, false});
  const auto grid = linspace({0.0, 1.8}, 257);
  const auto s = envelope_serial(ps, grid), p = envelope_parallel(ps, grid);
  ASSERT_EQ(s.points.size(), p.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    EXPECT_TRUE(same_bits(s.points[i].r2, p.points[i].r2));
    EXPECT_EQ(s.binding[i], p.binding[i]);
  }
}

TEST_P(ThreadCounts, MomentsMatchSerial) {
  const std::vector<std::vector<double>> rows{{1, 0, 0}, {1, 2, 0}, {0.5, -1, 1}};
  const std::vector<double> vars{1.0, 0.5, 3.0};
  // Not a multiple of the shard size, so the last shard is partial.
  const std::size_t n = 3 * kShardSize + 1234;
  const auto s = sample_moments_serial(rows, vars, n, 99);
  const auto p = sample_moments_parallel(rows, vars, n, 99);
  EXPECT_EQ(s.count, n);
  EXPECT_EQ(p.count, n);
  for (std::size_t i = 0; i < s.sum.size(); ++i) EXPECT_TRUE(same_bits(s.sum[i], p.sum[i]));
  for (std::size_t i = 0; i < s.sum_sq.size(); ++i)
    EXPECT_TRUE(same_bits(s.sum_sq[i], p.sum_sq[i]));
}

INSTANTIATE_TEST_SUITE_P(Jobs, ThreadCounts, ::testing::Values(1, 2, 4, 7));

TEST(Kernels, ExceptionsPropagateFromParallelLoop) {
  auto f = [](std::size_t i) -> double {
    if (i == 37 || i == 80) throw std::runtime_error("boom " + std::to_string(i));
    return 0.0;
  };
  set_parallel_jobs(4);
  try {
    map_indices(100, f, ExecPolicy::parallel);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom 37");
  }
  set_parallel_jobs(0);
}

TEST(Kernels, MomentsDependOnSeed) {
  const std::vector<std::vector<double>> rows{{1}};
  const auto a = sample_moments_serial(rows, {1.0}, 1000, 1);
  const auto b = sample_moments_serial(rows, {1.0}, 1000, 2);
  EXPECT_NE(a.sum[0], b.sum[0]);
}
