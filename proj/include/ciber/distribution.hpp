#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ciber/error.hpp"

namespace ciber {

/// Empirical distribution function: F(x) = #{samples <= x} / n.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw Error(ErrorCode::EmptyData, "ECDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
  }

  double operator()(double x) const noexcept {
    const auto below = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(below) / static_cast<double>(sorted_.size());
  }

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

inline double ecdf_eval(const Ecdf& e, double x) { return e(x); }

/// Closed interval [lo, hi] of a conditional CDF.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-class, per-feature bin counts with Laplace smoothing.
///
/// Counts are integers; cumulative counts are built once so every lookup is
/// O(1). The smoothed probability of bin b is (count + alpha) / (N_y +
/// alpha * K_i).
class ConditionalTable {
 public:
  ConditionalTable() = default;

  /// counts[y][i][b]: training rows of class y whose feature i falls in bin b.
  ConditionalTable(std::vector<std::vector<std::vector<std::size_t>>> counts, double alpha)
      : counts_(std::move(counts)), alpha_(alpha) {
    if (counts_.empty()) throw Error(ErrorCode::EmptyData, "table has no classes");
    if (!(alpha_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing alpha must be >= 0");
    const std::size_t d = counts_.front().size();
    for (const auto& per_class : counts_)
      if (per_class.size() != d) throw Error(ErrorCode::NonRectangular, "feature count differs between classes");
    bins_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      bins_[i] = counts_.front()[i].size();
      if (bins_[i] == 0) throw Error(ErrorCode::InvalidArgument, "feature with zero bins");
      for (const auto& per_class : counts_)
        if (per_class[i].size() != bins_[i]) throw Error(ErrorCode::NonRectangular, "bin count differs between classes");
    }
    totals_.assign(counts_.size(), 0);
    prefix_.resize(counts_.size());
    for (std::size_t y = 0; y < counts_.size(); ++y) {
      prefix_[y].resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        auto& p = prefix_[y][i];
        p.assign(bins_[i] + 1, 0);
        for (std::size_t b = 0; b < bins_[i]; ++b) p[b + 1] = p[b] + counts_[y][i][b];
        if (i == 0) totals_[y] = p.back();
        else if (p.back() != totals_[y]) throw Error(ErrorCode::NonRectangular, "class totals differ across features");
      }
    }
  }

  /// Counts from already-binned columns (codes[i][r]) and labels.
  static ConditionalTable from_codes(const std::vector<std::vector<int>>& codes, std::span<const int> labels,
                                     const std::vector<std::size_t>& bin_counts, std::size_t n_classes, double alpha) {
    std::vector<std::vector<std::vector<std::size_t>>> counts(n_classes);
    for (auto& per_class : counts) {
      per_class.resize(codes.size());
      for (std::size_t i = 0; i < codes.size(); ++i) per_class[i].assign(bin_counts[i], 0);
    }
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (codes[i].size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "code column length mismatch");
      for (std::size_t r = 0; r < labels.size(); ++r) ++counts[static_cast<std::size_t>(labels[r])][i][codes[i][r]];
    }
    return ConditionalTable(std::move(counts), alpha);
  }

  std::size_t classes() const noexcept { return counts_.size(); }
  std::size_t features() const noexcept { return bins_.size(); }
  std::size_t bin_count(std::size_t i) const { return bins_.at(i); }
  std::size_t class_total(std::size_t y) const { return totals_.at(y); }
  double alpha() const noexcept { return alpha_; }
  std::size_t count(std::size_t y, std::size_t i, std::size_t b) const { return counts_.at(y).at(i).at(b); }
  const std::vector<std::vector<std::vector<std::size_t>>>& counts() const noexcept { return counts_; }

  /// Rows of class y with feature i in bins [0, b).
  std::size_t cumulative_count(std::size_t y, std::size_t i, std::size_t b) const { return prefix_[y][i][b]; }

  double prob(std::size_t y, std::size_t i, std::size_t b) const {
    check(y, i, b);
    const double denom = static_cast<double>(totals_[y]) + alpha_ * static_cast<double>(bins_[i]);
    if (denom == 0.0) return 1.0 / static_cast<double>(bins_[i]);
    return (static_cast<double>(counts_[y][i][b]) + alpha_) / denom;
  }

  /// Smoothed CDF interval of bin b: [P(bin < b), P(bin <= b)].
  Interval cdf_interval(std::size_t y, std::size_t i, std::size_t b) const {
    check(y, i, b);
    const double K = static_cast<double>(bins_[i]);
    const double denom = static_cast<double>(totals_[y]) + alpha_ * K;
    if (denom == 0.0) return {static_cast<double>(b) / K, static_cast<double>(b + 1) / K};
    const auto& p = prefix_[y][i];
    return {(static_cast<double>(p[b]) + alpha_ * static_cast<double>(b)) / denom,
            (static_cast<double>(p[b + 1]) + alpha_ * static_cast<double>(b + 1)) / denom};
  }

  /// Unsmoothed CDF interval: the empirical frequencies alone.
  Interval raw_interval(std::size_t y, std::size_t i, std::size_t b) const {
    check(y, i, b);
    const auto& p = prefix_[y][i];
    const double n = static_cast<double>(totals_[y]);
    if (n == 0.0) return {0.0, 0.0};
    return {static_cast<double>(p[b]) / n, static_cast<double>(p[b + 1]) / n};
  }

  friend bool operator==(const ConditionalTable& a, const ConditionalTable& b) {
    return a.counts_ == b.counts_ && a.alpha_ == b.alpha_;
  }

 private:
  void check(std::size_t y, std::size_t i, std::size_t b) const {
    if (y >= counts_.size()) throw Error(ErrorCode::UnknownClass, "class code " + std::to_string(y) + " out of range");
    if (i >= bins_.size()) throw Error(ErrorCode::DimensionMismatch, "feature " + std::to_string(i) + " out of range");
    if (b >= bins_[i]) throw Error(ErrorCode::InvalidArgument, "bin " + std::to_string(b) + " out of range");
  }

  std::vector<std::vector<std::vector<std::size_t>>> counts_;
  std::vector<std::vector<std::vector<std::size_t>>> prefix_;
  std::vector<std::size_t> bins_;
  std::vector<std::size_t> totals_;
  double alpha_ = 1.0;
};

inline double conditional_prob(const ConditionalTable& t, std::size_t y, std::size_t i, std::size_t b) {
  return t.prob(y, i, b);
}

inline Interval conditional_cdf_interval(const ConditionalTable& t, std::size_t y, std::size_t i, std::size_t b) {
  return t.cdf_interval(y, i, b);
}

}  // namespace ciber
