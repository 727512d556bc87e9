#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>

#include "ciber/bench.hpp"

using namespace ciber;

namespace {

// Values with mean m and sample standard deviation s for r = 10.
std::vector<double> with_moments(double m, double s) {
  std::vector<double> v;
  const double a = s * std::sqrt(9.0 / 10.0);
  for (int k = 0; k < 5; ++k) {
    v.push_back(m + a);
    v.push_back(m - a);
  }
  return v;
}

Dataset separable(std::size_t n, std::uint64_t seed) {
  SegmentSpec spec;
  spec.n_per_class = n;
  spec.seed = seed;
  return gen_segments(spec);
}

// Remembers every training row; falls back to class 0 for unseen rows.
ModelSpec memorizer() {
  return {"memo", [](const Dataset& train, std::uint64_t) -> Predictor {
            std::map<std::vector<double>, int> seen;
            for (std::size_t r = 0; r < train.rows(); ++r) seen[train.row(r)] = train.labels()[r];
            return [seen](const Dataset& test) {
              std::vector<int> out;
              for (std::size_t r = 0; r < test.rows(); ++r) {
                auto it = seen.find(test.row(r));
                out.push_back(it == seen.end() ? 0 : it->second);
              }
              return out;
            };
          }};
}

}  // namespace

TEST(TCi, Examples) {
  const auto ci = t_ci(with_moments(0.5, 0.1));
  EXPECT_NEAR(ci.mean, 0.5, 1e-12);
  EXPECT_NEAR(ci.std, 0.1, 1e-12);
  EXPECT_NEAR(ci.half_width, 0.07153, 1e-4);
  EXPECT_NEAR(ci.half_width, 2.262 * 0.1 / std::sqrt(10.0), 1e-4);
  EXPECT_NEAR(ci.half_width, 2.2622 * 0.1 / std::sqrt(10.0), 1e-12);
  EXPECT_EQ(ci.repeats, 10u);
  EXPECT_NEAR(ci.low(), 0.5 - ci.half_width, 1e-15);

  EXPECT_EQ(t_ci(std::vector<double>(10, 0.3)).half_width, 0.0);
  try {
    t_ci({0.4});
    ADD_FAILURE() << "expected TooFewRepeats";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewRepeats);
  }
}

TEST(TCi, TableAgreesWithExactQuantile) {
  EXPECT_EQ(t_critical_95(9), 2.2622);
  for (std::size_t df = 1; df <= 60; ++df) {
    boost::math::students_t dist(static_cast<double>(df));
    EXPECT_NEAR(t_critical_95(df), boost::math::quantile(dist, 0.975), 6e-5) << "df " << df;
  }
  EXPECT_THROW(t_critical_95(0), Error);
}

TEST(TCi, ShrinksWithSpread) {
  double prev = 1e9;
  for (double s = 0.5; s >= 0.0; s -= 0.05) {
    const auto ci = t_ci(with_moments(0.2, std::max(s, 0.0)));
    EXPECT_LE(ci.half_width, prev);
    prev = ci.half_width;
  }
}

TEST(LinearFit, ExactAndNoisyLines) {
  const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_LT(linear_fit({1, 2, 3, 4}, {1, 3, 1, 3}).r2, 0.5);
  EXPECT_THROW(linear_fit({1, 1}, {1, 2}), Error);
}

TEST(Score, ErrorPlusAccuracyIsOne) {
  const auto s = score({0, 1, 1, 0}, {0, 1, 0, 0});
  EXPECT_DOUBLE_EQ(s.error_rate, 0.25);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.75);
  EXPECT_THROW(score({0}, {0, 1}), Error);
}

TEST(ErrorCurve, FullFractionHasNoVariation) {
  const auto [train, test] = stratified_split(separable(200, 1), 0.2, 5);
  const auto pts = error_curve(train, test, {naive_bayes_model_spec()}, {1.0}, 10, 3);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].error.repeats, 10u);
  EXPECT_EQ(pts[0].error.half_width, 0.0);
  for (double e : pts[0].error_rates) EXPECT_EQ(e, pts[0].error_rates[0]);
  EXPECT_NEAR(pts[0].mean_accuracy, 1.0 - pts[0].error.mean, 1e-12);
}

TEST(ErrorCurve, MemorizerIsPerfectOnItsTrainingRows) {
  const auto data = separable(100, 2);
  const auto pts = error_curve(data, data, {memorizer()}, {1.0}, 3, 0);
  EXPECT_EQ(pts[0].error.mean, 0.0);
}

TEST(ErrorCurve, CiberBeatsNaiveBayesOnSegments) {
  const auto [train, test] = stratified_split(separable(2000, 4), 0.2, 9);
  FitConfig cfg;
  cfg.bins = 1000;
  const auto pts = error_curve(train, test, {ciber_model_spec(cfg), naive_bayes_model_spec(cfg)}, {0.5, 1.0}, 3, 1);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[2].model, "ciber");
  EXPECT_EQ(pts[3].model, "naive_bayes");
  EXPECT_LT(pts[2].error.mean + 0.1, pts[3].error.mean);
}

TEST(ErrorCurve, DeterministicPerSeed) {
  const auto [train, test] = stratified_split(separable(300, 5), 0.25, 1);
  const std::vector<ModelSpec> models{ciber_model_spec(), naive_bayes_model_spec()};
  const auto a = error_curve(train, test, models, {0.3, 0.6, 1.0}, 4, 21);
  const auto b = error_curve(train, test, models, {0.3, 0.6, 1.0}, 4, 21);
  EXPECT_EQ(curve_csv(a), curve_csv(b));
  EXPECT_EQ(curve_json(a), curve_json(b));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].error_rates, b[i].error_rates);
}

TEST(ErrorCurve, Errors) {
  const auto d = separable(20, 1);
  EXPECT_THROW(error_curve(d, d, {memorizer()}, {1.0}, 1, 0), Error);
  EXPECT_THROW(error_curve(d, d, {memorizer()}, {0.5, 0.4}, 2, 0), Error);
  EXPECT_THROW(error_curve(d, d, {memorizer()}, {1.5}, 2, 0), Error);
  EXPECT_THROW(error_curve(d, d, {}, {1.0}, 2, 0), Error);
}

TEST(TimeRatio, IdenticalStubTimersGiveUnitRatio) {
  SegmentSpec spec;
  spec.n_per_class = 50;
  TimeRatioOptions opt;
  const auto pts = time_ratio({spec}, opt, [](const std::function<void()>& work) {
    work();
    return 0.25;
  });
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].fit_ratio.mean, 1.0);
  EXPECT_EQ(pts[0].fit_ratio.half_width, 0.0);
  EXPECT_EQ(pts[0].predict_ratio.mean, 1.0);
  EXPECT_EQ(pts[0].fit_ratio.repeats, 10u);
}

TEST(TimeRatio, TenRepeatsUseTableMultiplier) {
  SegmentSpec spec;
  spec.n_per_class = 30;
  int call = 0;
  // CIBer fit alternates 1 and 3 seconds against a 1 second NB fit
  const auto pts = time_ratio({spec}, {}, [&](const std::function<void()>& work) {
    work();
    const int phase = call++ % 4;
    if (phase == 0) return (call / 4) % 2 == 0 ? 1.0 : 3.0;
    return 1.0;
  });
  const auto& ci = pts[0].fit_ratio;
  EXPECT_NEAR(ci.half_width, 2.2622 * ci.std / std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(ci.mean, 2.0, 1e-12);
}

TEST(TimeRatio, OutputFormats) {
  SegmentSpec spec;
  spec.n_per_class = 20;
  std::vector<SegmentSpec> specs{spec, spec};
  specs[1].pairs = 2;
  TimeRatioOptions opt;
  opt.repeats = 2;
  const auto pts = time_ratio(specs, opt);
  const auto csv = timing_csv(pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,model,mean,std,ci_low,ci_high,repeats");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto j = timing_json(pts);
  EXPECT_EQ(j["points"].size(), 2u);
  EXPECT_TRUE(j.contains("fit_ratio_trend"));
  opt.repeats = 1;
  EXPECT_THROW(time_ratio(specs, opt), Error);
}
