#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ciber/association.hpp"
#include "ciber/data.hpp"
#include "ciber/discretize.hpp"
#include "ciber/distribution.hpp"
#include "ciber/error.hpp"
#include "ciber/partition.hpp"

namespace ciber {

struct FitConfig {
  BinScheme discretizer = BinScheme::equal_width;
  std::size_t bins = 10;
  double alpha = 1.0;
  double threshold = 0.2;
  RebalanceMode rebalance = RebalanceMode::none;
  std::uint64_t seed = 0;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

// ---------------------------------------------------------------------------
// Comonotone joint cell probability

/// Empirical mass of the intersection of the per-feature conditional CDF
/// intervals, in rows: max(0, min_k C(b_k + 1) - max_k C(b_k)). All features
/// of a class share the denominator N_y, so the intersection is exact in
/// counts.
inline std::int64_t comonotone_overlap(const ConditionalTable& t, std::size_t y, std::span<const std::size_t> group,
                                       std::span<const int> group_codes) {
  if (group.empty() || group.size() != group_codes.size())
    throw Error(ErrorCode::DimensionMismatch, "group and codes differ in length");
  if (y >= t.classes()) throw Error(ErrorCode::UnknownClass, "class code " + std::to_string(y) + " out of range");
  std::int64_t lo = 0;
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  for (std::size_t k = 0; k < group.size(); ++k) {
    const auto i = group[k];
    if (i >= t.features()) throw Error(ErrorCode::DimensionMismatch, "feature out of range");
    const auto b = static_cast<std::size_t>(group_codes[k]);
    if (group_codes[k] < 0 || b >= t.bin_count(i)) throw Error(ErrorCode::InvalidArgument, "bin code out of range");
    lo = std::max(lo, static_cast<std::int64_t>(t.cumulative_count(y, i, b)));
    hi = std::min(hi, static_cast<std::int64_t>(t.cumulative_count(y, i, b + 1)));
  }
  return std::max<std::int64_t>(0, hi - lo);
}

/// Unsmoothed comonotone probability: Lebesgue measure of the intersection
/// of the empirical CDF intervals.
inline double comonotone_raw(const ConditionalTable& t, std::size_t y, std::span<const std::size_t> group,
                             std::span<const int> group_codes) {
  const auto overlap = comonotone_overlap(t, y, group, group_codes);
  const auto n = t.class_total(y);
  return n == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(n);
}

/// Smoothed comonotone probability (N_y * raw + alpha) / (N_y + alpha * K_g),
/// K_g the largest bin count in the group. For a single feature this is
/// exactly the Laplace-smoothed marginal.
inline double comonotone_cell_prob(const ConditionalTable& t, std::size_t y, std::span<const std::size_t> group,
                                   std::span<const int> group_codes) {
  const auto overlap = comonotone_overlap(t, y, group, group_codes);
  std::size_t kg = 0;
  for (auto i : group) kg = std::max(kg, t.bin_count(i));
  const double denom = static_cast<double>(t.class_total(y)) + t.alpha() * static_cast<double>(kg);
  if (denom == 0.0) return 1.0 / static_cast<double>(kg);
  return (static_cast<double>(overlap) + t.alpha()) / denom;
}

namespace detail {

/// exp-normalize log scores. If every class is impossible (all -inf) the
/// posterior is uniform.
inline std::vector<double> normalize_log_scores(const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  if (top == -std::numeric_limits<double>::infinity()) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(scores.size()));
    return out;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = std::exp(scores[k] - top);
    sum += out[k];
  }
  for (auto& v : out) v /= sum;
  return out;
}

}  // namespace detail

/// Lowest class code among the maxima.
inline int argmax_class(const std::vector<double>& posterior) {
  return static_cast<int>(std::max_element(posterior.begin(), posterior.end()) - posterior.begin());
}

// ---------------------------------------------------------------------------
// Model

/// Fitted comonotone-independence classifier. Immutable after construction.
class CiberModel {
 public:
  CiberModel() = default;

  CiberModel(Schema schema, std::vector<double> priors, std::vector<BinEdges> edges, ConditionalTable table,
             Partition partition, FitConfig config)
      : schema_(std::move(schema)),
        priors_(std::move(priors)),
        edges_(std::move(edges)),
        table_(std::move(table)),
        partition_(std::move(partition)),
        config_(config) {
    validate();
  }

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<double>& priors() const noexcept { return priors_; }
  const std::vector<BinEdges>& bin_edges() const noexcept { return edges_; }
  const ConditionalTable& table() const noexcept { return table_; }
  const Partition& partition() const noexcept { return partition_; }
  const FitConfig& config() const noexcept { return config_; }
  std::size_t classes() const noexcept { return priors_.size(); }
  std::size_t features() const noexcept { return edges_.size(); }

  std::vector<int> codes(std::span<const double> x) const {
    if (x.size() != edges_.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(edges_.size()) + " features, got " + std::to_string(x.size()));
    std::vector<int> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = edges_[i].code(x[i]);
    return c;
  }

  double como_cell_prob(std::size_t y, std::span<const std::size_t> group, std::span<const int> group_codes) const {
    return comonotone_cell_prob(table_, y, group, group_codes);
  }

  /// Unnormalized log scores under an arbitrary partition.
  std::vector<double> log_scores(std::span<const double> x, const Partition& partition) const {
    const auto c = codes(x);
    std::vector<double> scores(classes());
    std::vector<int> group_codes;
    for (std::size_t y = 0; y < classes(); ++y) {
      double s = std::log(priors_[y]);
      for (const auto& g : partition.groups) {
        if (g.size() == 1) {
          s += std::log(table_.prob(y, g[0], static_cast<std::size_t>(c[g[0]])));
          continue;
        }
        group_codes.clear();
        for (auto i : g) group_codes.push_back(c[i]);
        s += std::log(comonotone_cell_prob(table_, y, g, group_codes));
      }
      scores[y] = s;
    }
    return scores;
  }

  std::vector<double> predict_proba(std::span<const double> x) const {
    return detail::normalize_log_scores(log_scores(x, partition_));
  }

  int predict(std::span<const double> x) const { return argmax_class(predict_proba(x)); }

  /// Every feature independent, regardless of the fitted partition.
  std::vector<double> naive_bayes_predict_proba(std::span<const double> x) const {
    const auto c = codes(x);
    std::vector<double> scores(classes());
    for (std::size_t y = 0; y < classes(); ++y) {
      double s = std::log(priors_[y]);
      for (std::size_t i = 0; i < c.size(); ++i) s += std::log(table_.prob(y, i, static_cast<std::size_t>(c[i])));
      scores[y] = s;
    }
    return detail::normalize_log_scores(scores);
  }

  /// Attribute-weighted Naive Bayes: each likelihood factor raised to w_i.
  /// A zero weight removes the feature even when its probability is 0.
  std::vector<double> weighted_nb_predict_proba(std::span<const double> weights, std::span<const double> x) const {
    if (weights.size() != features())
      throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from feature count");
    for (double w : weights)
      if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidArgument, "weights must be finite and >= 0");
    const auto c = codes(x);
    std::vector<double> scores(classes());
    for (std::size_t y = 0; y < classes(); ++y) {
      double s = std::log(priors_[y]);
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (weights[i] == 0.0) continue;
        s += weights[i] * std::log(table_.prob(y, i, static_cast<std::size_t>(c[i])));
      }
      scores[y] = s;
    }
    return detail::normalize_log_scores(scores);
  }

  friend bool operator==(const CiberModel& a, const CiberModel& b) {
    return a.priors_ == b.priors_ && a.edges_ == b.edges_ && a.table_ == b.table_ && a.partition_ == b.partition_ &&
           a.config_ == b.config_ && a.schema_.column_names == b.schema_.column_names &&
           a.schema_.feature_types == b.schema_.feature_types && a.schema_.categories == b.schema_.categories &&
           a.schema_.class_names == b.schema_.class_names && a.schema_.target_name == b.schema_.target_name;
  }

 private:
  void validate() const {
    const std::size_t d = edges_.size();
    if (priors_.empty()) throw Error(ErrorCode::InvalidArgument, "model has no classes");
    if (table_.classes() != priors_.size()) throw Error(ErrorCode::InvalidArgument, "table/prior class count mismatch");
    if (table_.features() != d) throw Error(ErrorCode::InvalidArgument, "table/edges feature count mismatch");
    for (std::size_t i = 0; i < d; ++i)
      if (edges_[i].bin_count() != table_.bin_count(i))
        throw Error(ErrorCode::InvalidArgument, "bin count mismatch for feature " + std::to_string(i));
    double sum = 0.0;
    for (double p : priors_) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "prior outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "priors do not sum to 1");
    std::vector<bool> seen(d, false);
    for (const auto& g : partition_.groups) {
      if (g.empty()) throw Error(ErrorCode::InvalidArgument, "empty partition group");
      for (auto i : g) {
        if (i >= d || seen[i]) throw Error(ErrorCode::InvalidArgument, "partition is not a set partition of features");
        seen[i] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw Error(ErrorCode::InvalidArgument, "partition does not cover every feature");
    if (schema_.column_names.size() != d || schema_.feature_types.size() != d || schema_.categories.size() != d)
      throw Error(ErrorCode::InvalidArgument, "schema does not match feature count");
    if (schema_.class_names.size() != priors_.size())
      throw Error(ErrorCode::InvalidArgument, "schema does not match class count");
  }

  Schema schema_;
  std::vector<double> priors_;
  std::vector<BinEdges> edges_;
  ConditionalTable table_;
  Partition partition_;
  FitConfig config_;
};

// ---------------------------------------------------------------------------
// Fitting

namespace detail {

inline BinEdges fit_column(const Dataset& ds, std::size_t j, const FitConfig& cfg) {
  const auto& col = ds.column(j);
  if (ds.feature_types()[j] != FeatureType::continuous) return fit_distinct(col, j);
  try {
    switch (cfg.discretizer) {
      case BinScheme::equal_width: return fit_equal_width(col, cfg.bins, j);
      case BinScheme::mean_sigma: return fit_mean_sigma(col, j);
      case BinScheme::mdlp: return fit_mdlp(col, ds.labels(), j);
      case BinScheme::distinct: return fit_distinct(col, j);
    }
  } catch (const Error& e) {
    // A column constant on the training rows carries no information: one bin.
    if (e.code() != ErrorCode::ConstantColumn) throw;
  }
  return fit_distinct(col, j);
}

struct Prepared {
  Dataset data;
  std::vector<BinEdges> edges;
  std::vector<std::vector<int>> codes;
  ConditionalTable table;
  std::vector<double> priors;
};

inline Prepared prepare(const Dataset& train, const FitConfig& cfg) {
  if (train.features() == 0) throw Error(ErrorCode::InvalidArgument, "training data has no features");
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  if (cfg.bins < 2) throw Error(ErrorCode::InvalidArgument, "bins must be >= 2");
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  const auto counts0 = train.class_counts();
  if (std::count_if(counts0.begin(), counts0.end(), [](auto c) { return c > 0; }) < 2)
    throw Error(ErrorCode::SingleClass, "training data needs at least two classes");

  Prepared p{rebalance(train, cfg.rebalance, derive_seed(cfg.seed, "fit.rebalance")), {}, {}, {}, {}};
  const auto& ds = p.data;
  std::vector<std::size_t> bin_counts;
  for (std::size_t j = 0; j < ds.features(); ++j) {
    p.edges.push_back(fit_column(ds, j, cfg));
    p.codes.push_back(p.edges.back().apply(ds.column(j)));
    bin_counts.push_back(p.edges.back().bin_count());
  }
  p.table = ConditionalTable::from_codes(p.codes, ds.labels(), bin_counts, ds.classes(), cfg.alpha);
  const auto counts = ds.class_counts();
  for (auto c : counts) p.priors.push_back(static_cast<double>(c) / static_cast<double>(ds.rows()));
  return p;
}

}  // namespace detail

/// Full pipeline: optional rebalance, per-column discretization, conditional
/// tables, pooled association metrics on the bin codes, then clustering.
inline CiberModel fit(const Dataset& train, const FitConfig& cfg = {}) {
  auto p = detail::prepare(train, cfg);
  const std::size_t d = p.data.features();
  std::vector<bool> excluded(d), included(d);
  for (std::size_t j = 0; j < d; ++j) {
    excluded[j] = p.data.feature_types()[j] == FeatureType::categorical;
    included[j] = !excluded[j];
  }
  Partition partition;
  if (cfg.threshold > 0.0) {
    const auto assoc = association_matrices(p.codes, included);
    partition = cluster(distance_matrix(assoc), cfg.threshold, excluded);
  } else {
    partition = cluster(SymmetricMatrix(d), 0.0, excluded);
  }
  return CiberModel(Schema::of(p.data), std::move(p.priors), std::move(p.edges), std::move(p.table),
                    std::move(partition), cfg);
}

/// Same tables as `fit` but with the all-singleton partition and no
/// association pass.
inline CiberModel fit_naive_bayes(const Dataset& train, FitConfig cfg = {}) {
  cfg.threshold = 0.0;
  auto p = detail::prepare(train, cfg);
  auto partition = Partition::singletons(p.data.features());
  return CiberModel(Schema::of(p.data), std::move(p.priors), std::move(p.edges), std::move(p.table),
                    std::move(partition), cfg);
}

inline std::vector<int> predict_all(const CiberModel& m, const std::vector<Column>& columns) {
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  std::vector<int> out(n);
  std::vector<double> x(columns.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) x[j] = columns[j][r];
    out[r] = m.predict(x);
  }
  return out;
}

inline std::vector<int> predict_all(const CiberModel& m, const Dataset& ds) { return predict_all(m, ds.columns()); }

// ---------------------------------------------------------------------------
// Serialization

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json to_json(const CiberModel& m) {
  using nlohmann::json;
  json j;
  j["format"] = "ciber-model";
  j["version"] = kModelFormatVersion;
  const auto& s = m.schema();
  json types = json::array();
  for (auto t : s.feature_types) types.push_back(std::string(to_string(t)));
  j["schema"] = {{"column_names", s.column_names},
                 {"feature_types", types},
                 {"categories", s.categories},
                 {"class_names", s.class_names},
                 {"target", s.target_name}};
  j["priors"] = m.priors();
  json edges = json::array();
  for (const auto& e : m.bin_edges())
    edges.push_back({{"column", e.column_index}, {"scheme", std::string(to_string(e.scheme))}, {"cuts", e.cuts}});
  j["bin_edges"] = edges;
  j["counts"] = m.table().counts();
  j["alpha"] = m.table().alpha();
  json merges = json::array();
  for (const auto& mg : m.partition().merges)
    merges.push_back({{"first", mg.first}, {"second", mg.second}, {"distance", mg.distance}});
  j["partition"] = {{"groups", m.partition().groups}, {"threshold", m.partition().threshold}, {"merges", merges}};
  const auto& c = m.config();
  j["discretizer"] = {{"scheme", std::string(to_string(c.discretizer))},
                      {"bins", c.bins},
                      {"alpha", c.alpha},
                      {"threshold", c.threshold},
                      {"rebalance", std::string(to_string(c.rebalance))},
                      {"seed", c.seed}};
  return j;
}

inline CiberModel from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version")) throw Error(ErrorCode::CorruptModel, "missing format version");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "unsupported model format version " + j["version"].dump());
  try {
    Schema s;
    const auto& js = j.at("schema");
    s.column_names = js.at("column_names").get<std::vector<std::string>>();
    for (const auto& t : js.at("feature_types")) s.feature_types.push_back(feature_type_from_string(t.get<std::string>()));
    s.categories = js.at("categories").get<std::vector<std::vector<std::string>>>();
    s.class_names = js.at("class_names").get<std::vector<std::string>>();
    s.target_name = js.at("target").get<std::string>();

    std::vector<BinEdges> edges;
    for (const auto& e : j.at("bin_edges")) {
      edges.push_back({e.at("cuts").get<std::vector<double>>(), bin_scheme_from_string(e.at("scheme").get<std::string>()),
                       e.at("column").get<std::size_t>()});
      if (!std::is_sorted(edges.back().cuts.begin(), edges.back().cuts.end()))
        throw Error(ErrorCode::CorruptModel, "bin cuts not sorted");
    }
    ConditionalTable table(j.at("counts").get<std::vector<std::vector<std::vector<std::size_t>>>>(),
                           j.at("alpha").get<double>());
    Partition partition;
    const auto& jp = j.at("partition");
    partition.groups = jp.at("groups").get<std::vector<FeatureGroup>>();
    partition.threshold = jp.at("threshold").get<double>();
    for (const auto& mg : jp.at("merges"))
      partition.merges.push_back({mg.at("first").get<std::size_t>(), mg.at("second").get<std::size_t>(),
                                  mg.at("distance").get<double>()});
    FitConfig cfg;
    const auto& jd = j.at("discretizer");
    cfg.discretizer = bin_scheme_from_string(jd.at("scheme").get<std::string>());
    cfg.bins = jd.at("bins").get<std::size_t>();
    cfg.alpha = jd.at("alpha").get<double>();
    cfg.threshold = jd.at("threshold").get<double>();
    cfg.rebalance = rebalance_mode_from_string(jd.at("rebalance").get<std::string>());
    cfg.seed = jd.at("seed").get<std::uint64_t>();
    return CiberModel(std::move(s), j.at("priors").get<std::vector<double>>(), std::move(edges), std::move(table),
                      std::move(partition), cfg);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModel, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptModel) throw;
    throw Error(ErrorCode::CorruptModel, e.what());
  }
}

inline std::string serialize(const CiberModel& m) { return to_json(m).dump(1) + "\n"; }

inline CiberModel deserialize(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModel, e.what());
  }
  return from_json(j);
}

inline void save(const CiberModel& m, const std::string& path) { write_file(path, serialize(m)); }

inline CiberModel load(const std::string& path) { return deserialize(read_file(path)); }

}  // namespace ciber
