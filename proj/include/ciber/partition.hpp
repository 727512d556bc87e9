#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ciber/association.hpp"
#include "ciber/error.hpp"

namespace ciber {

using FeatureGroup = std::vector<std::size_t>;

/// One agglomeration step: the clusters led by `first` and `second` (their
/// smallest members) joined at complete-linkage `distance`.
struct MergeStep {
  std::size_t first = 0;
  std::size_t second = 0;
  double distance = 0.0;

  friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

/// Disjoint feature groups covering every feature. Groups of two or more are
/// modelled as comonotone, singletons as conditionally independent.
struct Partition {
  std::vector<FeatureGroup> groups;
  double threshold = 0.0;
  std::vector<MergeStep> merges;

  std::size_t feature_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
  }

  bool all_singletons() const {
    return std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() == 1; });
  }

  static Partition singletons(std::size_t d) {
    Partition p;
    for (std::size_t i = 0; i < d; ++i) p.groups.push_back({i});
    return p;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// d(i, j) = 1 - max(|pearson|, |spearman|, |kendall|, nmi), clamped to [0, 1].
inline double association_distance(const AssociationMatrices& m, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  const double strongest = std::max({std::abs(m.pearson(i, j)), std::abs(m.spearman(i, j)),
                                     std::abs(m.kendall(i, j)), m.nmi(i, j)});
  return std::clamp(1.0 - strongest, 0.0, 1.0);
}

inline SymmetricMatrix distance_matrix(const AssociationMatrices& m) {
  const std::size_t d = m.pearson.size();
  SymmetricMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) out.set(i, j, association_distance(m, i, j));
  return out;
}

/// Agglomerative complete-linkage clustering.
///
/// Clusters merge while the closest pair (by the largest member-to-member
/// distance) is within `threshold`; equal distances resolve to the pair whose
/// leading members are lexicographically smallest. A threshold of 0 performs
/// no merges at all, giving the Naive Bayes partition. Features flagged in
/// `excluded` never join a group and are appended as trailing singletons.
inline Partition cluster(const SymmetricMatrix& distances, double threshold, const std::vector<bool>& excluded = {}) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  const std::size_t d = distances.size();
  if (!excluded.empty() && excluded.size() != d)
    throw Error(ErrorCode::DimensionMismatch, "exclusion mask length differs from matrix size");
  auto is_excluded = [&](std::size_t i) { return !excluded.empty() && excluded[i]; };

  Partition p;
  p.threshold = threshold;
  std::vector<FeatureGroup> active;
  for (std::size_t i = 0; i < d; ++i)
    if (!is_excluded(i)) active.push_back({i});

  auto linkage = [&](const FeatureGroup& a, const FeatureGroup& b) {
    double worst = 0.0;
    for (auto i : a)
      for (auto j : b) worst = std::max(worst, distances(i, j));
    return worst;
  };

  while (threshold > 0.0 && active.size() > 1) {
    // Groups stay sorted by leading member, so scanning (a < b) in order
    // visits pairs in lexicographic order of their leaders.
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double dist = linkage(active[a], active[b]);
        if (dist < best) {
          best = dist;
          ba = a;
          bb = b;
        }
      }
    if (best > threshold) break;
    p.merges.push_back({active[ba].front(), active[bb].front(), best});
    auto& target = active[ba];
    target.insert(target.end(), active[bb].begin(), active[bb].end());
    std::sort(target.begin(), target.end());
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bb));
  }

  p.groups = std::move(active);
  for (std::size_t i = 0; i < d; ++i)
    if (is_excluded(i)) p.groups.push_back({i});
  return p;
}

}  // namespace ciber
