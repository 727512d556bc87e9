#pragma once

// Hand-built models and random datasets shared by the unit tests and the
// acceptance runner.

#include <string>
#include <vector>

#include "ciber/classifier.hpp"
#include "ciber/rng.hpp"

namespace fixture {

/// Two-segment example with 100 rows per class and 12 bins of width 10 on
/// [0, 120]. Class 0 lies on x1 = x0 + 20 with x0 in [0, 100]; class 1 on
/// x1 = x0 - 20 with x0 in [20, 120]. Every occupied bin holds 10 rows, so
/// each conditional bin probability is exactly 0.1.
inline ciber::CiberModel segment_example(double alpha = 0.0) {
  using namespace ciber;
  auto run = [](std::size_t first) {
    std::vector<std::size_t> c(12, 0);
    for (std::size_t b = first; b < first + 10; ++b) c[b] = 10;
    return c;
  };
  ConditionalTable table({{run(0), run(2)}, {run(2), run(0)}}, alpha);
  std::vector<double> cuts;
  for (int k = 1; k < 12; ++k) cuts.push_back(10.0 * k);
  std::vector<BinEdges> edges{{cuts, BinScheme::equal_width, 0}, {cuts, BinScheme::equal_width, 1}};
  Schema schema{{"x0", "x1"}, {FeatureType::continuous, FeatureType::continuous}, {{}, {}}, {"0", "1"}, "y"};
  Partition partition;
  partition.groups = {{0, 1}};
  partition.threshold = 0.2;
  FitConfig cfg;
  cfg.alpha = alpha;
  cfg.bins = 12;
  return CiberModel(schema, {0.5, 0.5}, edges, table, partition, cfg);
}

/// Random mixed-type dataset with every class present.
inline ciber::Dataset random_dataset(ciber::Rng& rng, std::size_t n, std::size_t d, std::size_t classes = 2) {
  using namespace ciber;
  std::vector<Column> cols(d, Column(n));
  std::vector<FeatureType> types(d);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> cats(d);
  for (std::size_t j = 0; j < d; ++j) {
    names.push_back("f" + std::to_string(j));
    const auto kind = uniform_index(rng, 4);
    types[j] = kind == 0 ? FeatureType::categorical : kind == 1 ? FeatureType::discrete : FeatureType::continuous;
    if (types[j] == FeatureType::categorical) cats[j] = {"a", "b", "c"};
    for (auto& v : cols[j]) {
      if (types[j] == FeatureType::categorical) v = static_cast<double>(uniform_index(rng, 3));
      else if (types[j] == FeatureType::discrete) v = static_cast<double>(uniform_index(rng, 6));
      else v = uniform(rng, -10.0, 10.0);
    }
  }
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r)
    labels[r] = r < classes ? static_cast<int>(r) : static_cast<int>(uniform_index(rng, classes));
  std::vector<std::string> class_names;
  for (std::size_t c = 0; c < classes; ++c) class_names.push_back(std::to_string(c));
  return Dataset(std::move(cols), std::move(labels), std::move(types), std::move(names), std::move(class_names),
                 std::move(cats), "y");
}

/// Random count table: classes x features x bins, each class with a common
/// row total spread over the bins of every feature.
inline ciber::ConditionalTable random_table(ciber::Rng& rng, std::size_t classes, const std::vector<std::size_t>& bins,
                                            double alpha) {
  std::vector<std::vector<std::vector<std::size_t>>> c(classes);
  for (auto& per_class : c) {
    const std::size_t total = 1 + ciber::uniform_index(rng, 60);
    for (auto k : bins) {
      std::vector<std::size_t> counts(k, 0);
      // sparse tables exercise the empty-interval cases
      const std::size_t live = 1 + ciber::uniform_index(rng, k);
      for (std::size_t r = 0; r < total; ++r) ++counts[ciber::uniform_index(rng, live) * k / live];
      per_class.push_back(counts);
    }
  }
  return ciber::ConditionalTable(c, alpha);
}

}  // namespace fixture
