#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ciber/error.hpp"

namespace ciber {

enum class BinScheme {
  equal_width,
  mean_sigma,
  mdlp,
  distinct,  ///< one bin per distinct training value (discrete/categorical columns)
};

constexpr std::string_view to_string(BinScheme s) noexcept {
  switch (s) {
    case BinScheme::equal_width: return "equal_width";
    case BinScheme::mean_sigma: return "mean_sigma";
    case BinScheme::mdlp: return "mdlp";
    case BinScheme::distinct: return "distinct";
  }
  return "equal_width";
}

inline BinScheme bin_scheme_from_string(std::string_view s) {
  if (s == "equal_width") return BinScheme::equal_width;
  if (s == "mean_sigma") return BinScheme::mean_sigma;
  if (s == "mdlp") return BinScheme::mdlp;
  if (s == "distinct") return BinScheme::distinct;
  throw Error(ErrorCode::InvalidArgument, "unknown discretizer '" + std::string(s) + "'");
}

/// Strictly increasing cut points. k cuts give k+1 right-closed bins:
/// code(x) = #{c in cuts : c < x}, so x <= cuts[0] lands in bin 0 and
/// anything past the last cut lands in bin k.
struct BinEdges {
  std::vector<double> cuts;
  BinScheme scheme = BinScheme::equal_width;
  std::size_t column_index = 0;

  std::size_t bin_count() const noexcept { return cuts.size() + 1; }

  int code(double x) const noexcept {
    return static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
  }

  std::vector<int> apply(std::span<const double> column) const {
    std::vector<int> out(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) out[i] = code(column[i]);
    return out;
  }

  friend bool operator==(const BinEdges&, const BinEdges&) = default;
};

inline std::vector<int> apply(const BinEdges& edges, std::span<const double> column) { return edges.apply(column); }

namespace detail {

inline std::pair<double, double> finite_range(std::span<const double> column) {
  if (column.empty()) throw Error(ErrorCode::EmptyData, "empty column");
  auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  return {*lo, *hi};
}

inline void drop_duplicate_cuts(std::vector<double>& cuts) {
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
}

}  // namespace detail

inline BinEdges fit_equal_width(std::span<const double> column, std::size_t bins, std::size_t column_index = 0) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "equal-width binning needs bins >= 2");
  const auto [lo, hi] = detail::finite_range(column);
  if (!(hi > lo)) throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(column_index) + " is constant");
  BinEdges e{{}, BinScheme::equal_width, column_index};
  e.cuts.reserve(bins - 1);
  const double width = hi - lo;
  for (std::size_t k = 1; k < bins; ++k)
    e.cuts.push_back(lo + width * static_cast<double>(k) / static_cast<double>(bins));
  // Extremely narrow ranges can collapse neighbouring cuts in floating point.
  detail::drop_duplicate_cuts(e.cuts);
  return e;
}

/// Eight bins at mu + {-3,-2,-1,0,1,2,3} * sigma, sigma the sample (n-1)
/// standard deviation.
inline BinEdges fit_mean_sigma(std::span<const double> column, std::size_t column_index = 0) {
  if (column.size() < 2) throw Error(ErrorCode::ConstantColumn, "mean/sigma binning needs at least two values");
  const double n = static_cast<double>(column.size());
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : column) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / (n - 1.0));
  if (!(sigma > 0.0)) throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(column_index) + " is constant");
  BinEdges e{{}, BinScheme::mean_sigma, column_index};
  for (int k = -3; k <= 3; ++k) e.cuts.push_back(mean + k * sigma);
  return e;
}

/// Cuts at midpoints between consecutive distinct values; used for discrete
/// and categorical columns. A constant column yields a single bin.
inline BinEdges fit_distinct(std::span<const double> column, std::size_t column_index = 0) {
  if (column.empty()) throw Error(ErrorCode::EmptyData, "empty column");
  std::vector<double> v(column.begin(), column.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  BinEdges e{{}, BinScheme::distinct, column_index};
  for (std::size_t i = 1; i < v.size(); ++i) e.cuts.push_back(v[i - 1] + (v[i] - v[i - 1]) / 2.0);
  detail::drop_duplicate_cuts(e.cuts);
  return e;
}

namespace detail {

/// Class entropy in bits of a count vector with the given total.
inline double entropy_bits(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

inline std::size_t classes_present(std::span<const std::size_t> counts) {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

struct MdlpRow {
  double value;
  std::size_t label;
};

/// Fayyad-Irani acceptance test for splitting a set of n rows.
inline bool mdlp_accepts(std::size_t n, double gain, std::size_t k, double h, std::size_t k1, double h1,
                         std::size_t k2, double h2) {
  const double N = static_cast<double>(n);
  const double delta = std::log2(std::pow(3.0, static_cast<double>(k)) - 2.0) -
                       (static_cast<double>(k) * h - static_cast<double>(k1) * h1 - static_cast<double>(k2) * h2);
  return gain > (std::log2(N - 1.0) + delta) / N;
}

inline void mdlp_recurse(std::span<const MdlpRow> rows, std::size_t n_classes, std::vector<double>& cuts) {
  const std::size_t n = rows.size();
  if (n < 2) return;
  std::vector<std::size_t> total(n_classes, 0);
  for (const auto& r : rows) ++total[r.label];
  const std::size_t k = classes_present(total);
  if (k < 2) return;
  const double h = entropy_bits(total, n);

  std::vector<std::size_t> left(n_classes, 0), right(n_classes, 0);
  std::size_t best = n;  // index of last row in the left part
  double best_e = 0.0, best_h1 = 0.0, best_h2 = 0.0;
  std::size_t best_k1 = 0, best_k2 = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ++left[rows[i].label];
    if (!(rows[i].value < rows[i + 1].value)) continue;
    for (std::size_t c = 0; c < n_classes; ++c) right[c] = total[c] - left[c];
    const std::size_t n1 = i + 1, n2 = n - n1;
    const double h1 = entropy_bits(left, n1), h2 = entropy_bits(right, n2);
    const double e = (static_cast<double>(n1) * h1 + static_cast<double>(n2) * h2) / static_cast<double>(n);
    if (best == n || e < best_e) {
      best = i;
      best_e = e;
      best_h1 = h1;
      best_h2 = h2;
      best_k1 = classes_present(left);
      best_k2 = classes_present(right);
    }
  }
  if (best == n) return;
  if (!mdlp_accepts(n, h - best_e, k, h, best_k1, best_h1, best_k2, best_h2)) return;

  const double a = rows[best].value, b = rows[best + 1].value;
  mdlp_recurse(rows.subspan(0, best + 1), n_classes, cuts);
  cuts.push_back((a + b) / 2.0);
  mdlp_recurse(rows.subspan(best + 1), n_classes, cuts);
}

}  // namespace detail

/// Supervised entropy binning with the Fayyad-Irani MDL stopping rule.
/// Candidate cuts are midpoints between adjacent distinct values; among equal
/// entropies the leftmost candidate wins.
inline BinEdges fit_mdlp(std::span<const double> column, std::span<const int> labels, std::size_t column_index = 0) {
  if (column.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "column and labels differ in length");
  if (column.empty()) throw Error(ErrorCode::EmptyData, "empty column");
  int max_label = 0;
  for (int y : labels) {
    if (y < 0) throw Error(ErrorCode::UnknownClass, "negative class code");
    max_label = std::max(max_label, y);
  }
  const auto n_classes = static_cast<std::size_t>(max_label) + 1;
  std::vector<detail::MdlpRow> rows(column.size());
  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t i = 0; i < column.size(); ++i) {
    rows[i] = {column[i], static_cast<std::size_t>(labels[i])};
    ++counts[rows[i].label];
  }
  if (detail::classes_present(counts) < 2) throw Error(ErrorCode::SingleClass, "MDLP needs at least two classes");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  BinEdges e{{}, BinScheme::mdlp, column_index};
  detail::mdlp_recurse(rows, n_classes, e.cuts);
  return e;
}

}  // namespace ciber
