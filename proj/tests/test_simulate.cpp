#include <gtest/gtest.h>

#include "ciber/simulate.hpp"

using namespace ciber;

TEST(GenSegments, SingleRowPerClassExactRelation) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    SegmentSpec spec;
    spec.n_per_class = 1;
    spec.seed = seed;
    const auto ds = gen_segments(spec);
    ASSERT_EQ(ds.rows(), 2u);
    EXPECT_EQ(ds.labels(), (std::vector<int>{0, 1}));
    EXPECT_EQ(ds.at(0, 1) - ds.at(0, 0), 20.0);
    EXPECT_EQ(ds.at(1, 1) - ds.at(1, 0), -20.0);
  }
}

TEST(GenSegments, DefaultShapeAndRanges) {
  SegmentSpec spec;
  spec.seed = 3;
  const auto ds = gen_segments(spec);
  EXPECT_EQ(ds.rows(), 10000u);
  EXPECT_EQ(ds.features(), 2u);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{5000, 5000}));
  EXPECT_EQ(ds.column_names(), (std::vector<std::string>{"x0", "x1"}));
  EXPECT_EQ(ds.class_names(), (std::vector<std::string>{"0", "1"}));
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const double x0 = ds.at(r, 0), x1 = ds.at(r, 1);
    if (ds.labels()[r] == 0) {
      EXPECT_GE(x0, 0.0);
      EXPECT_LE(x0, 100.0);
      EXPECT_NEAR(x1 - x0, 20.0, 1e-12);
    } else {
      EXPECT_GE(x0, 20.0);
      EXPECT_LE(x0, 120.0);
      EXPECT_NEAR(x1 - x0, -20.0, 1e-12);
    }
  }
}

TEST(GenSegments, SeveralPairs) {
  SegmentSpec spec;
  spec.pairs = 3;
  spec.n_per_class = 200;
  const auto ds = gen_segments(spec);
  EXPECT_EQ(ds.features(), 6u);
  EXPECT_EQ(ds.column_names().back(), "x5");
  for (std::size_t r = 0; r < ds.rows(); ++r)
    for (std::size_t p = 0; p < 3; ++p)
      EXPECT_NEAR(ds.at(r, 2 * p + 1) - ds.at(r, 2 * p), ds.labels()[r] == 0 ? 20.0 : -20.0, 1e-12);
  // pairs draw independent bases
  EXPECT_NE(ds.column(0), ds.column(2));
}

TEST(GenSegments, DeterministicPerSeed) {
  SegmentSpec a;
  a.n_per_class = 300;
  a.pairs = 2;
  a.seed = 11;
  auto b = a;
  EXPECT_TRUE(gen_segments(a) == gen_segments(b));
  b.seed = 12;
  EXPECT_FALSE(gen_segments(a) == gen_segments(b));
}

TEST(GenSegments, NoiseOnlyMovesDependentCoordinate) {
  SegmentSpec spec;
  spec.n_per_class = 500;
  spec.noise = 2.0;
  const auto noisy = gen_segments(spec);
  spec.noise = 0.0;
  const auto clean = gen_segments(spec);
  EXPECT_EQ(noisy.column(0), clean.column(0));
  EXPECT_NE(noisy.column(1), clean.column(1));
}

TEST(GenSegments, InvalidSpecs) {
  SegmentSpec s;
  s.n_per_class = 0;
  EXPECT_THROW(gen_segments(s), Error);
  s = {};
  s.pairs = 0;
  EXPECT_THROW(gen_segments(s), Error);
  s = {};
  s.class0_hi = -1;
  EXPECT_THROW(gen_segments(s), Error);
  s = {};
  s.noise = -0.5;
  EXPECT_THROW(gen_segments(s), Error);
}
