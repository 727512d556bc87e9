#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ciber/data.hpp"
#include "ciber/error.hpp"
#include "ciber/rng.hpp"

namespace ciber {

/// Two-class line-segment family. For each of `pairs` feature pairs, class 0
/// rows satisfy x[2i+1] = x[2i] + offset with x[2i] ~ U(class0_lo, class0_hi);
/// class 1 rows satisfy x[2i+1] = x[2i] - offset with x[2i] ~ U(class1_lo,
/// class1_hi). Each pair draws its own base value.
struct SegmentSpec {
  double offset = 20.0;
  double class0_lo = 0.0;
  double class0_hi = 100.0;
  double class1_lo = 20.0;
  double class1_hi = 120.0;
  std::size_t n_per_class = 5000;
  std::size_t pairs = 1;
  std::uint64_t seed = 0;
  double noise = 0.0;  ///< std-dev of Gaussian noise added to the dependent coordinate

  void validate() const {
    if (!(class0_hi >= class0_lo) || !(class1_hi >= class1_lo))
      throw Error(ErrorCode::InvalidArgument, "segment ranges must be nonempty");
    if (n_per_class < 1) throw Error(ErrorCode::InvalidArgument, "need at least one row per class");
    if (pairs < 1) throw Error(ErrorCode::InvalidArgument, "need at least one feature pair");
    if (!(noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
  }
};

/// Rows are class 0 first, then class 1. Columns are named x0..x{2*pairs-1};
/// labels are "0" and "1".
inline Dataset gen_segments(const SegmentSpec& spec) {
  spec.validate();
  const std::size_t d = 2 * spec.pairs;
  const std::size_t n = 2 * spec.n_per_class;
  std::vector<Column> cols(d, Column(n));
  std::vector<int> labels(n);
  for (int y = 0; y < 2; ++y) {
    const auto class_seed = derive_seed(derive_seed(spec.seed, "gen_segments"), static_cast<std::uint64_t>(y));
    Rng rng(class_seed);
    Rng noise_rng(derive_seed(class_seed, "noise"));  // separate stream: noise never shifts the bases
    const double lo = y == 0 ? spec.class0_lo : spec.class1_lo;
    const double hi = y == 0 ? spec.class0_hi : spec.class1_hi;
    const double shift = y == 0 ? spec.offset : -spec.offset;
    for (std::size_t k = 0; k < spec.n_per_class; ++k) {
      const std::size_t r = static_cast<std::size_t>(y) * spec.n_per_class + k;
      labels[r] = y;
      for (std::size_t p = 0; p < spec.pairs; ++p) {
        const double base = uniform(rng, lo, hi);
        double dep = base + shift;
        if (spec.noise > 0.0) dep += spec.noise * standard_normal(noise_rng);
        cols[2 * p][r] = base;
        cols[2 * p + 1][r] = dep;
      }
    }
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(cols), std::move(labels), std::vector<FeatureType>(d, FeatureType::continuous),
                 std::move(names), {"0", "1"}, {}, "y");
}

}  // namespace ciber
