#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

#include "ciber/classifier.hpp"
#include "ciber/data.hpp"
#include "ciber/error.hpp"
#include "ciber/rng.hpp"
#include "ciber/simulate.hpp"

namespace ciber {

/// Two-tailed 95% Student t critical value t_{0.975, df}. Degrees of freedom
/// 1..29 come from the usual 4-decimal table; larger df fall back to the
/// exact quantile.
inline double t_critical_95(std::size_t df) {
  static constexpr std::array<double, 29> table = {
      12.7062, 4.3027, 3.1824, 2.7764, 2.5706, 2.4469, 2.3646, 2.3060, 2.2622, 2.2281,
      2.2010,  2.1788, 2.1604, 2.1448, 2.1314, 2.1199, 2.1098, 2.1009, 2.0930, 2.0860,
      2.0796,  2.0739, 2.0687, 2.0639, 2.0595, 2.0555, 2.0518, 2.0484, 2.0452};
  if (df == 0) throw Error(ErrorCode::TooFewRepeats, "t quantile needs df >= 1");
  if (df <= table.size()) return table[df - 1];
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

struct ConfidenceInterval {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation (divisor r - 1)
  double half_width = 0.0;
  std::size_t repeats = 0;

  double low() const noexcept { return mean - half_width; }
  double high() const noexcept { return mean + half_width; }
};

/// mean +- t_{0.975, r-1} * s / sqrt(r).
inline ConfidenceInterval t_ci(const std::vector<double>& values) {
  const std::size_t r = values.size();
  if (r < 2) throw Error(ErrorCode::TooFewRepeats, "confidence interval needs at least two repeats");
  const double n = static_cast<double>(r);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return {*lo, 0.0, 0.0, r};  // the rounded mean would leave a spurious spread
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, sd, t_critical_95(r - 1) * sd / std::sqrt(n), r};
}

/// Ordinary least squares y = slope * x + intercept with coefficient of
/// determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "linear fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::ZeroVariance, "x values are constant");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    sse += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Generic model adapter

/// Predicts class codes for every row of a dataset.
using Predictor = std::function<std::vector<int>(const Dataset&)>;
/// Fits on a training set; the seed is for models with internal randomness.
using Trainer = std::function<Predictor(const Dataset&, std::uint64_t)>;

struct ModelSpec {
  std::string name;
  Trainer train;
};

inline ModelSpec ciber_model_spec(FitConfig cfg = {}, std::string name = "ciber") {
  return {std::move(name), [cfg](const Dataset& train, std::uint64_t seed) -> Predictor {
            auto c = cfg;
            c.seed = seed;
            auto model = std::make_shared<const CiberModel>(fit(train, c));
            return [model](const Dataset& test) { return predict_all(*model, test); };
          }};
}

inline ModelSpec naive_bayes_model_spec(FitConfig cfg = {}, std::string name = "naive_bayes") {
  return {std::move(name), [cfg](const Dataset& train, std::uint64_t seed) -> Predictor {
            auto c = cfg;
            c.seed = seed;
            auto model = std::make_shared<const CiberModel>(fit_naive_bayes(train, c));
            return [model](const Dataset& test) { return predict_all(*model, test); };
          }};
}

// ---------------------------------------------------------------------------
// Error-rate curves

struct CurvePoint {
  double train_fraction = 1.0;
  std::string model;
  ConfidenceInterval error;       ///< over repeats of misclassified / total
  double mean_accuracy = 0.0;     ///< mean of correct / total, counted separately
  std::vector<double> error_rates;
};

struct Scores {
  double error_rate;
  double accuracy;
};

inline Scores score(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw Error(ErrorCode::DimensionMismatch, "prediction count differs from test rows");
  std::size_t wrong = 0, right = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] != truth[i]) ++wrong;
    if (predicted[i] == truth[i]) ++right;
  }
  const double n = static_cast<double>(truth.size());
  return {static_cast<double>(wrong) / n, static_cast<double>(right) / n};
}

/// For each training fraction and repeat: stratified subsample, fit every
/// model, score on the fixed test set. Repeat k at fraction index f uses
/// sub-seed derive_seed(seed, f, k) for both sampling and fitting.
inline std::vector<CurvePoint> error_curve(const Dataset& train, const Dataset& test, const std::vector<ModelSpec>& models,
                                           const std::vector<double>& fractions, std::size_t repeats,
                                           std::uint64_t seed) {
  if (repeats < 2) throw Error(ErrorCode::TooFewRepeats, "error curve needs at least two repeats");
  if (models.empty()) throw Error(ErrorCode::InvalidArgument, "no models to evaluate");
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    if (!(fractions[f] > 0.0 && fractions[f] <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction outside (0, 1]");
    if (f > 0 && !(fractions[f] > fractions[f - 1])) throw Error(ErrorCode::InvalidArgument, "fractions must ascend");
  }
  std::vector<CurvePoint> out;
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    std::vector<std::vector<double>> errors(models.size()), accuracies(models.size());
    for (std::size_t k = 0; k < repeats; ++k) {
      const auto sub_seed = derive_seed(seed, f, k);
      const auto sub = subsample_fraction(train, fractions[f], sub_seed);
      for (std::size_t m = 0; m < models.size(); ++m) {
        const auto predictor = models[m].train(sub, derive_seed(sub_seed, "fit"));
        const auto s = score(predictor(test), test.labels());
        errors[m].push_back(s.error_rate);
        accuracies[m].push_back(s.accuracy);
      }
    }
    for (std::size_t m = 0; m < models.size(); ++m) {
      CurvePoint p;
      p.train_fraction = fractions[f];
      p.model = models[m].name;
      p.error = t_ci(errors[m]);
      p.mean_accuracy = std::accumulate(accuracies[m].begin(), accuracies[m].end(), 0.0) / double(repeats);
      p.error_rates = std::move(errors[m]);
      out.push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running-time ratios

/// Measures one call in seconds.
using Stopwatch = std::function<double(const std::function<void()>&)>;

inline double steady_seconds(const std::function<void()>& work) {
  const auto start = std::chrono::steady_clock::now();
  work();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

struct TimingPoint {
  std::size_t pairs = 0;
  ConfidenceInterval fit_ratio;
  ConfidenceInterval predict_ratio;
  std::vector<double> fit_ratios;
  std::vector<double> predict_ratios;
};

struct TimeRatioOptions {
  std::size_t repeats = 10;
  double test_fraction = 0.2;
  FitConfig fit;  ///< shared by both models (bins, alpha, threshold)
  std::uint64_t seed = 0;
};

/// CIBer / Naive Bayes wall-clock ratios for fitting and for predicting the
/// held-out split, per segment spec (one spec per pair count). Runs serially.
inline std::vector<TimingPoint> time_ratio(const std::vector<SegmentSpec>& specs, const TimeRatioOptions& opt,
                                           const Stopwatch& stopwatch = steady_seconds) {
  if (opt.repeats < 2) throw Error(ErrorCode::TooFewRepeats, "timing needs at least two repeats");
  std::vector<TimingPoint> out;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    TimingPoint tp;
    tp.pairs = specs[s].pairs;
    for (std::size_t k = 0; k < opt.repeats; ++k) {
      auto spec = specs[s];
      spec.seed = derive_seed(opt.seed, s, k);
      const auto data = gen_segments(spec);
      const auto [train, test] = stratified_split(data, opt.test_fraction, derive_seed(spec.seed, "split"));
      CiberModel ciber_model, nb_model;
      const double t_fit_c = stopwatch([&] { ciber_model = fit(train, opt.fit); });
      const double t_fit_n = stopwatch([&] { nb_model = fit_naive_bayes(train, opt.fit); });
      std::vector<int> sink;
      const double t_pred_c = stopwatch([&] { sink = predict_all(ciber_model, test); });
      const double t_pred_n = stopwatch([&] { sink = predict_all(nb_model, test); });
      tp.fit_ratios.push_back(t_fit_c / t_fit_n);
      tp.predict_ratios.push_back(t_pred_c / t_pred_n);
    }
    tp.fit_ratio = t_ci(tp.fit_ratios);
    tp.predict_ratio = t_ci(tp.predict_ratios);
    out.push_back(std::move(tp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result files

inline std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::string out = "fraction,model,mean,std,ci_low,ci_high,repeats\n";
  for (const auto& p : points) {
    out += format_double(p.train_fraction) + "," + csv_escape(p.model) + "," + format_double(p.error.mean) + "," +
           format_double(p.error.std) + "," + format_double(p.error.low()) + "," + format_double(p.error.high()) + "," +
           std::to_string(p.error.repeats) + "\n";
  }
  return out;
}

inline nlohmann::json curve_json(const std::vector<CurvePoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : points)
    arr.push_back({{"fraction", p.train_fraction},
                   {"model", p.model},
                   {"mean_error", p.error.mean},
                   {"std_error", p.error.std},
                   {"ci_half_width", p.error.half_width},
                   {"mean_accuracy", p.mean_accuracy},
                   {"repeats", p.error.repeats},
                   {"error_rates", p.error_rates}});
  return {{"experiment", "error_curve"}, {"points", arr}};
}

inline std::string timing_csv(const std::vector<TimingPoint>& points) {
  std::string out = "lambda,model,mean,std,ci_low,ci_high,repeats\n";
  for (const auto& p : points) {
    for (const auto& [name, ci] : {std::pair{"fit_ratio", p.fit_ratio}, std::pair{"predict_ratio", p.predict_ratio}}) {
      out += std::to_string(p.pairs) + "," + name + "," + format_double(ci.mean) + "," + format_double(ci.std) + "," +
             format_double(ci.low()) + "," + format_double(ci.high()) + "," + std::to_string(ci.repeats) + "\n";
    }
  }
  return out;
}

inline nlohmann::json timing_json(const std::vector<TimingPoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    arr.push_back({{"lambda", p.pairs},
                   {"fit_ratio_mean", p.fit_ratio.mean},
                   {"fit_ratio_half_width", p.fit_ratio.half_width},
                   {"predict_ratio_mean", p.predict_ratio.mean},
                   {"predict_ratio_half_width", p.predict_ratio.half_width},
                   {"fit_ratios", p.fit_ratios},
                   {"predict_ratios", p.predict_ratios}});
    xs.push_back(static_cast<double>(p.pairs));
    ys.push_back(p.fit_ratio.mean);
  }
  nlohmann::json j = {{"experiment", "time_ratio"}, {"points", arr}};
  if (xs.size() >= 2) {
    try {
      const auto f = linear_fit(xs, ys);
      j["fit_ratio_trend"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
    } catch (const Error&) {
    }
  }
  return j;
}

}  // namespace ciber
