#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "ciber/error.hpp"

namespace ciber {

template <typename T>
concept Numeric = std::integral<T> || std::floating_point<T>;

namespace detail {

template <Numeric T, Numeric U>
void check_pair(std::span<const T> x, std::span<const U> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "association inputs differ in length");
  if (x.size() < 2) throw Error(ErrorCode::ZeroVariance, "association needs at least two observations");
}

/// Mean ranks (1-based), ties sharing the average of their positions.
template <Numeric T>
std::vector<double> average_ranks(std::span<const T> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

/// Sum over tie groups of t(t-1)/2 for an already sorted sequence.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It first, It last, Eq eq) {
  std::uint64_t total = 0;
  while (first != last) {
    auto run = first + 1;
    while (run != last && eq(*run, *first)) ++run;
    const auto t = static_cast<std::uint64_t>(run - first);
    total += t * (t - 1) / 2;
    first = run;
  }
  return total;
}

/// Merge sort by value, returning the number of inversions (swaps).
inline std::uint64_t sort_count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = sort_count_swaps(v, buf, lo, mid) + sort_count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

inline double pearson_of(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::ZeroVariance, "input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

template <Numeric T>
std::vector<double> as_double(std::span<const T> x) {
  return std::vector<double>(x.begin(), x.end());
}

}  // namespace detail

/// Sample Pearson correlation.
template <Numeric T, Numeric U>
double pearson(std::span<const T> x, std::span<const U> y) {
  detail::check_pair(x, y);
  const auto xd = detail::as_double(x);
  const auto yd = detail::as_double(y);
  return detail::pearson_of(xd, yd);
}

/// Pearson correlation of mean ranks.
template <Numeric T, Numeric U>
double spearman(std::span<const T> x, std::span<const U> y) {
  detail::check_pair(x, y);
  const auto rx = detail::average_ranks(x);
  const auto ry = detail::average_ranks(y);
  return detail::pearson_of(rx, ry);
}

/// Kendall tau-b with tie correction, O(n log n) (Knight's algorithm).
template <Numeric T, Numeric U>
double kendall(std::span<const T> x, std::span<const U> y) {
  detail::check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = {static_cast<double>(x[i]), static_cast<double>(y[i])};
  std::sort(p.begin(), p.end());

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t ties_x = detail::tied_pairs(p.begin(), p.end(), [](auto& a, auto& b) { return a.first == b.first; });
  const std::uint64_t ties_xy = detail::tied_pairs(p.begin(), p.end(), [](auto& a, auto& b) { return a == b; });

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = p[i].second;
  const std::uint64_t swaps = detail::sort_count_swaps(ys, buf, 0, n);
  const std::uint64_t ties_y = detail::tied_pairs(ys.begin(), ys.end(), [](double a, double b) { return a == b; });

  if (n0 == ties_x || n0 == ties_y) throw Error(ErrorCode::ZeroVariance, "input is constant");
  // concordant - discordant = n0 - n1 - n2 + n3 - 2 * swaps
  const double numer = static_cast<double>(n0) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                       static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  const double denom =
      std::sqrt(static_cast<double>(n0 - ties_x)) * std::sqrt(static_cast<double>(n0 - ties_y));
  return std::clamp(numer / denom, -1.0, 1.0);
}

/// Normalized mutual information U = 2 I(X;Y) / (H(X) + H(Y)) over integer
/// codes; 1 when both entropies vanish.
template <std::integral T, std::integral U>
double nmi(std::span<const T> x, std::span<const U> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "nmi inputs differ in length");
  if (x.empty()) throw Error(ErrorCode::EmptyData, "nmi needs at least one observation");
  const std::size_t n = x.size();
  std::vector<std::pair<std::int64_t, std::int64_t>> joint(n);
  for (std::size_t i = 0; i < n; ++i) joint[i] = {static_cast<std::int64_t>(x[i]), static_cast<std::int64_t>(y[i])};
  std::sort(joint.begin(), joint.end());

  const double N = static_cast<double>(n);
  auto plogp_sum = [N](const std::vector<std::size_t>& counts) {
    double h = 0.0;
    for (auto c : counts) {
      const double p = static_cast<double>(c) / N;
      h -= p * std::log(p);
    }
    return h;
  };
  auto run_lengths = [](auto first, auto last, auto eq) {
    std::vector<std::size_t> out;
    while (first != last) {
      auto run = first + 1;
      while (run != last && eq(*run, *first)) ++run;
      out.push_back(static_cast<std::size_t>(run - first));
      first = run;
    }
    return out;
  };

  const double hxy = plogp_sum(run_lengths(joint.begin(), joint.end(), [](auto& a, auto& b) { return a == b; }));
  const double hx =
      plogp_sum(run_lengths(joint.begin(), joint.end(), [](auto& a, auto& b) { return a.first == b.first; }));
  std::vector<std::int64_t> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = joint[i].second;
  std::sort(ys.begin(), ys.end());
  const double hy = plogp_sum(run_lengths(ys.begin(), ys.end(), [](auto a, auto b) { return a == b; }));

  if (hx + hy <= 0.0) return 1.0;
  const double mi = std::max(0.0, hx + hy - hxy);
  return std::clamp(2.0 * mi / (hx + hy), 0.0, 1.0);
}

// Vector conveniences so call sites need not spell out spans.
template <Numeric T, Numeric U>
double pearson(const std::vector<T>& x, const std::vector<U>& y) {
  return pearson(std::span<const T>(x), std::span<const U>(y));
}
template <Numeric T, Numeric U>
double spearman(const std::vector<T>& x, const std::vector<U>& y) {
  return spearman(std::span<const T>(x), std::span<const U>(y));
}
template <Numeric T, Numeric U>
double kendall(const std::vector<T>& x, const std::vector<U>& y) {
  return kendall(std::span<const T>(x), std::span<const U>(y));
}
template <std::integral T, std::integral U>
double nmi(const std::vector<T>& x, const std::vector<U>& y) {
  return nmi(std::span<const T>(x), std::span<const U>(y));
}

/// Dense symmetric d x d matrix.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t d, double fill = 0.0) : d_(d), v_(d * d, fill) {}

  std::size_t size() const noexcept { return d_; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * d_ + j]; }
  void set(std::size_t i, std::size_t j, double x) {
    v_[i * d_ + j] = x;
    v_[j * d_ + i] = x;
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<double> v_;
};

/// The four pairwise association metrics over a set of binned columns.
struct AssociationMatrices {
  SymmetricMatrix pearson;
  SymmetricMatrix spearman;
  SymmetricMatrix kendall;
  SymmetricMatrix nmi;
};

/// Pairs where a correlation is undefined (a constant column) score 0.
/// Only pairs with both `included[i]` and `included[j]` are computed; the
/// others stay 0 off the diagonal.
inline AssociationMatrices association_matrices(const std::vector<std::vector<int>>& codes,
                                                const std::vector<bool>& included) {
  const std::size_t d = codes.size();
  AssociationMatrices m{SymmetricMatrix(d), SymmetricMatrix(d), SymmetricMatrix(d), SymmetricMatrix(d)};
  auto guarded = [](auto&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroVariance) return 0.0;
      throw;
    }
  };
  for (std::size_t i = 0; i < d; ++i) {
    m.pearson.set(i, i, 1.0);
    m.spearman.set(i, i, 1.0);
    m.kendall.set(i, i, 1.0);
    m.nmi.set(i, i, 1.0);
    if (!included[i]) continue;
    for (std::size_t j = i + 1; j < d; ++j) {
      if (!included[j]) continue;
      const auto& a = codes[i];
      const auto& b = codes[j];
      m.pearson.set(i, j, guarded([&] { return pearson(a, b); }));
      m.spearman.set(i, j, guarded([&] { return spearman(a, b); }));
      m.kendall.set(i, j, guarded([&] { return kendall(a, b); }));
      m.nmi.set(i, j, nmi(a, b));
    }
  }
  return m;
}

}  // namespace ciber
