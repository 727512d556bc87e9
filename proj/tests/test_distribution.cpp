#include <gtest/gtest.h>

#include <cmath>

#include "ciber/distribution.hpp"
#include "ciber/rng.hpp"

using namespace ciber;

namespace {

// 10 bins, 10 rows per bin for every class and feature.
ConditionalTable uniform_table(double alpha, std::size_t classes = 2, std::size_t features = 2) {
  std::vector<std::vector<std::vector<std::size_t>>> c(
      classes, std::vector<std::vector<std::size_t>>(features, std::vector<std::size_t>(10, 10)));
  return ConditionalTable(c, alpha);
}

ConditionalTable random_table(Rng& rng, double alpha) {
  const std::size_t classes = 2 + uniform_index(rng, 2), d = 1 + uniform_index(rng, 3);
  std::vector<std::size_t> bins(d);
  for (auto& k : bins) k = 1 + uniform_index(rng, 8);
  std::vector<std::vector<std::vector<std::size_t>>> c(classes);
  for (auto& per_class : c) {
    const std::size_t total = 1 + uniform_index(rng, 40);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<std::size_t> counts(bins[i], 0);
      for (std::size_t r = 0; r < total; ++r) ++counts[uniform_index(rng, bins[i])];
      per_class.push_back(counts);
    }
  }
  return ConditionalTable(c, alpha);
}

}  // namespace

TEST(Ecdf, Examples) {
  const Ecdf e({3, 1, 2});
  EXPECT_DOUBLE_EQ(ecdf_eval(e, 2), 2.0 / 3.0);
  EXPECT_EQ(ecdf_eval(e, 0), 0.0);
  EXPECT_EQ(ecdf_eval(e, 3), 1.0);
  EXPECT_THROW(Ecdf({}), Error);
}

TEST(Ecdf, StepFunctionProperty) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s;
    for (int i = 0; i < 1 + static_cast<int>(uniform_index(rng, 30)); ++i)
      s.push_back(static_cast<double>(uniform_index(rng, 10)));
    const Ecdf e(s);
    auto sorted = e.sorted_samples();
    EXPECT_EQ(e(sorted.back()), 1.0);
    double prev = 0.0;
    for (double x = -1; x <= 11; x += 0.25) {
      const double f = e(x);
      EXPECT_GE(f, prev);
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
      std::size_t brute = 0;
      for (double v : s) brute += v <= x;
      EXPECT_EQ(f, static_cast<double>(brute) / static_cast<double>(s.size()));
      prev = f;
    }
    // constant strictly between adjacent samples
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i] < sorted[i + 1]) {
        EXPECT_EQ(e(sorted[i]), e(sorted[i] + (sorted[i + 1] - sorted[i]) / 2));
      }
  }
}

TEST(ConditionalProb, Examples) {
  EXPECT_DOUBLE_EQ(conditional_prob(uniform_table(1.0), 0, 0, 3), 0.1);
  EXPECT_DOUBLE_EQ(conditional_prob(uniform_table(0.0), 1, 1, 9), 0.1);
  std::vector<std::vector<std::vector<std::size_t>>> c{{{0, 100, 0, 0, 0, 0, 0, 0, 0, 0}}};
  const ConditionalTable t(c, 1.0);
  EXPECT_DOUBLE_EQ(t.prob(0, 0, 0), 1.0 / 110.0);
  EXPECT_GT(t.prob(0, 0, 0), 0.0);
  EXPECT_THROW(conditional_prob(t, 1, 0, 0), Error);
  try {
    conditional_prob(t, 4, 0, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownClass);
  }
}

TEST(CdfInterval, Examples) {
  const auto t = uniform_table(0.0);
  auto iv = conditional_cdf_interval(t, 0, 0, 0);
  EXPECT_NEAR(iv.lo, 0.0, 1e-15);
  EXPECT_NEAR(iv.hi, 0.1, 1e-15);
  iv = conditional_cdf_interval(t, 0, 0, 3);
  EXPECT_NEAR(iv.lo, 0.3, 1e-15);
  EXPECT_NEAR(iv.hi, 0.4, 1e-15);
  EXPECT_EQ(conditional_cdf_interval(t, 1, 1, 9).hi, 1.0);
  EXPECT_THROW(conditional_cdf_interval(t, 2, 0, 0), Error);
}

TEST(ConditionalTable, SumsToOneAndIntervalsTileProperty) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const double alpha = t % 3 == 0 ? 0.0 : uniform(rng, 0.1, 3.0);
    const auto table = random_table(rng, alpha);
    for (std::size_t y = 0; y < table.classes(); ++y)
      for (std::size_t i = 0; i < table.features(); ++i) {
        double sum = 0.0, edge = 0.0;
        for (std::size_t b = 0; b < table.bin_count(i); ++b) {
          const double p = table.prob(y, i, b);
          if (alpha > 0) {
            EXPECT_GT(p, 0.0);
          }
          sum += p;
          const auto iv = table.cdf_interval(y, i, b);
          EXPECT_NEAR(iv.lo, edge, 1e-12);
          EXPECT_NEAR(iv.hi - iv.lo, p, 1e-12);
          EXPECT_LE(0.0, iv.lo);
          EXPECT_LE(iv.lo, iv.hi);
          EXPECT_LE(iv.hi, 1.0 + 1e-12);
          edge = iv.hi;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_NEAR(edge, 1.0, 1e-12);
      }
  }
}

TEST(ConditionalTable, UnsmoothedMatchesBruteForceFrequency) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 5 + uniform_index(rng, 60), K = 2 + uniform_index(rng, 6);
    std::vector<int> labels(n);
    std::vector<std::vector<int>> codes(2, std::vector<int>(n));
    for (std::size_t r = 0; r < n; ++r) {
      labels[r] = static_cast<int>(uniform_index(rng, 2));
      codes[0][r] = static_cast<int>(uniform_index(rng, K));
      codes[1][r] = static_cast<int>(uniform_index(rng, K));
    }
    labels[0] = 0;
    labels[1] = 1;
    const auto table = ConditionalTable::from_codes(codes, labels, {K, K}, 2, 0.0);
    for (int y = 0; y < 2; ++y)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t b = 0; b < K; ++b) {
          double hit = 0, total = 0;
          for (std::size_t r = 0; r < n; ++r) {
            if (labels[r] != y) continue;
            ++total;
            hit += codes[i][r] == static_cast<int>(b);
          }
          EXPECT_DOUBLE_EQ(table.prob(static_cast<std::size_t>(y), i, b), hit / total);
        }
  }
}

TEST(ConditionalTable, ShapeErrors) {
  EXPECT_THROW(ConditionalTable({}, 1.0), Error);
  EXPECT_THROW(ConditionalTable({{{1, 2}}, {{1, 2, 3}}}, 1.0), Error);
  EXPECT_THROW(ConditionalTable({{{1, 2}}}, -1.0), Error);
}
