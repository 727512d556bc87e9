#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ciber/error.hpp"
#include "ciber/rng.hpp"

namespace ciber {

enum class FeatureType { categorical, continuous, discrete };

constexpr std::string_view to_string(FeatureType t) noexcept {
  switch (t) {
    case FeatureType::categorical: return "categorical";
    case FeatureType::continuous: return "continuous";
    case FeatureType::discrete: return "discrete";
  }
  return "continuous";
}

inline FeatureType feature_type_from_string(std::string_view s) {
  if (s == "categorical") return FeatureType::categorical;
  if (s == "continuous") return FeatureType::continuous;
  if (s == "discrete") return FeatureType::discrete;
  throw Error(ErrorCode::InvalidArgument, "unknown feature type '" + std::string(s) + "'");
}

using Column = std::vector<double>;

/// Column-major table of numeric features plus dense integer class labels.
///
/// Categorical columns hold dense codes 0..m-1 into `categories(j)`; class
/// codes index `class_names()`. Instances are immutable once built.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<Column> columns, std::vector<int> labels, std::vector<FeatureType> types,
          std::vector<std::string> column_names, std::vector<std::string> class_names,
          std::vector<std::vector<std::string>> categories = {}, std::string target_name = "y")
      : columns_(std::move(columns)),
        labels_(std::move(labels)),
        types_(std::move(types)),
        column_names_(std::move(column_names)),
        class_names_(std::move(class_names)),
        categories_(std::move(categories)),
        target_name_(std::move(target_name)) {
    if (categories_.empty()) categories_.resize(columns_.size());
    validate();
  }

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t features() const noexcept { return columns_.size(); }
  std::size_t classes() const noexcept { return class_names_.size(); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<FeatureType>& feature_types() const noexcept { return types_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::vector<std::string>>& categories() const noexcept { return categories_; }
  const std::string& target_name() const noexcept { return target_name_; }

  double at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

  std::vector<double> row(std::size_t r) const {
    std::vector<double> out(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) out[j] = columns_[j][r];
    return out;
  }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(classes(), 0);
    for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
  }

  /// Row indices grouped by class code, each list ascending.
  std::vector<std::vector<std::size_t>> rows_by_class() const {
    std::vector<std::vector<std::size_t>> out(classes());
    for (std::size_t r = 0; r < labels_.size(); ++r) out[static_cast<std::size_t>(labels_[r])].push_back(r);
    return out;
  }

  /// New dataset with the given rows (in the given order, repeats allowed)
  /// sharing schema and class vocabulary.
  Dataset select_rows(const std::vector<std::size_t>& idx) const {
    std::vector<Column> cols(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      cols[j].reserve(idx.size());
      for (auto r : idx) cols[j].push_back(columns_[j].at(r));
    }
    std::vector<int> labs;
    labs.reserve(idx.size());
    for (auto r : idx) labs.push_back(labels_.at(r));
    return Dataset(std::move(cols), std::move(labs), types_, column_names_, class_names_, categories_,
                   target_name_);
  }

  /// Keep only the listed feature columns.
  Dataset select_features(const std::vector<std::size_t>& features) const {
    std::vector<Column> cols;
    std::vector<FeatureType> types;
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> cats;
    for (auto j : features) {
      cols.push_back(columns_.at(j));
      types.push_back(types_.at(j));
      names.push_back(column_names_.at(j));
      cats.push_back(categories_.at(j));
    }
    return Dataset(std::move(cols), labels_, std::move(types), std::move(names), class_names_, std::move(cats),
                   target_name_);
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  void validate() const {
    if (labels_.empty()) throw Error(ErrorCode::EmptyData, "dataset has no rows");
    if (types_.size() != columns_.size() || column_names_.size() != columns_.size() ||
        categories_.size() != columns_.size())
      throw Error(ErrorCode::NonRectangular, "column metadata length does not match column count");
    for (const auto& c : columns_) {
      if (c.size() != labels_.size()) throw Error(ErrorCode::NonRectangular, "column length differs from label count");
      for (double v : c)
        if (!std::isfinite(v)) throw Error(ErrorCode::MissingValue, "non-finite feature value");
    }
    if (class_names_.empty()) throw Error(ErrorCode::EmptyData, "no classes");
    for (int y : labels_)
      if (y < 0 || static_cast<std::size_t>(y) >= class_names_.size())
        throw Error(ErrorCode::UnknownClass, "label code " + std::to_string(y) + " out of range");
  }

  std::vector<Column> columns_;
  std::vector<int> labels_;
  std::vector<FeatureType> types_;
  std::vector<std::string> column_names_;
  std::vector<std::string> class_names_;
  std::vector<std::vector<std::string>> categories_;
  std::string target_name_ = "y";
};

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
inline CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::NonRectangular, "unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::EmptyData, "CSV has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw Error(ErrorCode::NonRectangular, "row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                                                 " fields, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline bool is_missing_token(std::string_view s) {
  s = trim(s);
  return s.empty() || s == "NA" || s == "N/A" || s == "NaN" || s == "nan" || s == "?" || s == "null" ||
         s == "NULL";
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Levels ordered numerically when every level is a number, else by text.
inline std::vector<std::string> sorted_levels(std::vector<std::string> levels) {
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const bool numeric = std::all_of(levels.begin(), levels.end(), [](const std::string& s) {
    auto v = parse_number(s);
    return v && std::isfinite(*v);
  });
  if (numeric) {
    std::stable_sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return levels;
}

}  // namespace detail

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

enum class MissingPolicy { drop, error };

struct LoadOptions {
  std::string target_column = "y";
  std::map<std::string, FeatureType> type_overrides;
  std::size_t max_categories = 20;
  MissingPolicy missing = MissingPolicy::drop;
  std::ostream* report = &std::cerr;  ///< rejection report; nullptr silences it
};

/// Infers feature types, encodes labels and categorical levels, and drops (or
/// rejects) rows with missing cells.
inline Dataset dataset_from_table(const CsvTable& table, const LoadOptions& opt) {
  const auto target_it = std::find(table.header.begin(), table.header.end(), opt.target_column);
  if (target_it == table.header.end())
    throw Error(ErrorCode::MissingTarget, "target column '" + opt.target_column + "' not in header");
  const auto target = static_cast<std::size_t>(target_it - table.header.begin());
  for (const auto& [name, type] : opt.type_overrides) {
    if (name == opt.target_column || std::find(table.header.begin(), table.header.end(), name) == table.header.end())
      throw Error(ErrorCode::InvalidArgument, "type override for unknown feature '" + name + "'");
  }

  std::vector<std::size_t> kept;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const bool missing = std::any_of(row.begin(), row.end(), [](const std::string& s) {
      if (detail::is_missing_token(s)) return true;
      auto v = detail::parse_number(s);
      return v && !std::isfinite(*v);
    });
    if (!missing) {
      kept.push_back(r);
      continue;
    }
    if (opt.missing == MissingPolicy::error)
      throw Error(ErrorCode::MissingValue, "row " + std::to_string(r + 1) + " has a missing or non-finite cell");
    ++dropped;
  }
  if (dropped > 0 && opt.report != nullptr)
    *opt.report << "ciber: dropped " << dropped << " of " << table.rows.size() << " rows with missing values\n";
  if (kept.empty()) throw Error(ErrorCode::EmptyData, "no usable data rows");

  std::vector<std::string> label_text;
  label_text.reserve(kept.size());
  for (auto r : kept) label_text.push_back(std::string(detail::trim(table.rows[r][target])));
  const auto class_names = detail::sorted_levels(label_text);
  std::unordered_map<std::string, int> class_code;
  for (std::size_t k = 0; k < class_names.size(); ++k) class_code[class_names[k]] = static_cast<int>(k);
  std::vector<int> labels;
  labels.reserve(kept.size());
  for (const auto& s : label_text) labels.push_back(class_code.at(s));

  std::vector<Column> columns;
  std::vector<FeatureType> types;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> categories;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == target) continue;
    const auto& name = table.header[j];
    std::vector<std::string> cells;
    cells.reserve(kept.size());
    for (auto r : kept) cells.push_back(std::string(detail::trim(table.rows[r][j])));

    std::vector<double> values;
    bool numeric = true;
    for (const auto& s : cells) {
      auto v = detail::parse_number(s);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }

    FeatureType type;
    if (!numeric) {
      type = FeatureType::categorical;
    } else {
      auto distinct = values;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      const bool integral = std::all_of(values.begin(), values.end(), [](double v) { return v == std::floor(v); });
      type = (integral && distinct.size() <= opt.max_categories) ? FeatureType::discrete : FeatureType::continuous;
    }
    if (auto it = opt.type_overrides.find(name); it != opt.type_overrides.end()) {
      if (!numeric && it->second != FeatureType::categorical)
        throw Error(ErrorCode::InvalidArgument, "column '" + name + "' is non-numeric and must stay categorical");
      type = it->second;
    }

    std::vector<std::string> levels;
    if (type == FeatureType::categorical) {
      levels = detail::sorted_levels(cells);
      std::unordered_map<std::string, double> code;
      for (std::size_t k = 0; k < levels.size(); ++k) code[levels[k]] = static_cast<double>(k);
      values.clear();
      for (const auto& s : cells) values.push_back(code.at(s));
    }
    columns.push_back(std::move(values));
    types.push_back(type);
    names.push_back(name);
    categories.push_back(std::move(levels));
  }
  return Dataset(std::move(columns), std::move(labels), std::move(types), std::move(names), class_names,
                 std::move(categories), opt.target_column);
}

inline Dataset load_csv(const std::string& path, const LoadOptions& opt = {}) {
  return dataset_from_table(parse_csv(read_file(path)), opt);
}

/// Feature rows read against an existing schema (the one a model was trained
/// on). Labels are present only when the target column is.
struct EncodedRows {
  std::vector<Column> columns;
  std::vector<std::size_t> source_rows;  ///< 0-based data-row index in the CSV
  std::optional<std::vector<int>> labels;

  std::size_t rows() const noexcept { return source_rows.size(); }
  std::vector<double> row(std::size_t r) const {
    std::vector<double> out(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) out[j] = columns[j][r];
    return out;
  }
};

struct Schema {
  std::vector<std::string> column_names;
  std::vector<FeatureType> feature_types;
  std::vector<std::vector<std::string>> categories;
  std::vector<std::string> class_names;
  std::string target_name;

  static Schema of(const Dataset& ds) {
    return {ds.column_names(), ds.feature_types(), ds.categories(), ds.class_names(), ds.target_name()};
  }
};

/// Unseen categorical levels encode to one past the last known code, which
/// the binning clamps into the outermost bin. Unseen class labels are an error.
inline EncodedRows encode_with_schema(const CsvTable& table, const Schema& schema,
                                      MissingPolicy missing = MissingPolicy::drop, std::ostream* report = &std::cerr) {
  std::vector<std::size_t> source(schema.column_names.size());
  for (std::size_t j = 0; j < schema.column_names.size(); ++j) {
    auto it = std::find(table.header.begin(), table.header.end(), schema.column_names[j]);
    if (it == table.header.end())
      throw Error(ErrorCode::DimensionMismatch, "feature column '" + schema.column_names[j] + "' not in CSV header");
    source[j] = static_cast<std::size_t>(it - table.header.begin());
  }
  std::optional<std::size_t> target;
  if (auto it = std::find(table.header.begin(), table.header.end(), schema.target_name); it != table.header.end())
    target = static_cast<std::size_t>(it - table.header.begin());

  std::vector<std::unordered_map<std::string, double>> level_code(schema.column_names.size());
  for (std::size_t j = 0; j < schema.column_names.size(); ++j)
    for (std::size_t k = 0; k < schema.categories[j].size(); ++k) level_code[j][schema.categories[j][k]] = double(k);

  EncodedRows out;
  out.columns.resize(schema.column_names.size());
  if (target) out.labels.emplace();
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::vector<double> values(schema.column_names.size());
    bool ok = true;
    for (std::size_t j = 0; j < source.size() && ok; ++j) {
      const auto cell = std::string(detail::trim(row[source[j]]));
      if (detail::is_missing_token(cell)) {
        ok = false;
      } else if (schema.feature_types[j] == FeatureType::categorical) {
        auto it = level_code[j].find(cell);
        values[j] = it != level_code[j].end() ? it->second : static_cast<double>(schema.categories[j].size());
      } else {
        auto v = detail::parse_number(cell);
        if (!v || !std::isfinite(*v)) {
          if (v) {
            ok = false;
          } else {
            throw Error(ErrorCode::InvalidArgument,
                        "non-numeric value '" + cell + "' in numeric column '" + schema.column_names[j] + "'");
          }
        } else {
          values[j] = *v;
        }
      }
    }
    int label = -1;
    if (ok && target) {
      const auto text = std::string(detail::trim(row[*target]));
      if (detail::is_missing_token(text)) {
        ok = false;
      } else {
        auto it = std::find(schema.class_names.begin(), schema.class_names.end(), text);
        if (it == schema.class_names.end()) throw Error(ErrorCode::UnknownClass, "unseen class label '" + text + "'");
        label = static_cast<int>(it - schema.class_names.begin());
      }
    }
    if (!ok) {
      if (missing == MissingPolicy::error)
        throw Error(ErrorCode::MissingValue, "row " + std::to_string(r + 1) + " has a missing cell");
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < values.size(); ++j) out.columns[j].push_back(values[j]);
    out.source_rows.push_back(r);
    if (target) out.labels->push_back(label);
  }
  if (dropped > 0 && report != nullptr) *report << "ciber: dropped " << dropped << " rows with missing values\n";
  return out;
}

/// Writes features then the target column; categorical codes are written back
/// as their level text so the output reloads to an equal Dataset.
inline std::string to_csv(const Dataset& ds) {
  std::string out;
  for (std::size_t j = 0; j < ds.features(); ++j) {
    out += csv_escape(ds.column_names()[j]);
    out += ',';
  }
  out += csv_escape(ds.target_name());
  out += '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t j = 0; j < ds.features(); ++j) {
      const double v = ds.at(r, j);
      if (ds.feature_types()[j] == FeatureType::categorical)
        out += csv_escape(ds.categories()[j].at(static_cast<std::size_t>(v)));
      else
        out += format_double(v);
      out += ',';
    }
    out += csv_escape(ds.class_names()[static_cast<std::size_t>(ds.labels()[r])]);
    out += '\n';
  }
  return out;
}

inline void write_csv(const Dataset& ds, const std::string& path) { write_file(path, to_csv(ds)); }

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline std::size_t round_count(double x) { return static_cast<std::size_t>(std::llround(x)); }

}  // namespace detail

/// Stratified train/test split. Per class, round(test_fraction * count) rows
/// go to test, clamped so both sides keep at least one row. Both outputs keep
/// the original row order.
inline std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "test_fraction must lie in (0, 1)");
  Rng rng(derive_seed(seed, "stratified_split"));
  std::vector<std::size_t> train_idx, test_idx;
  auto by_class = ds.rows_by_class();
  for (std::size_t y = 0; y < by_class.size(); ++y) {
    auto& rows = by_class[y];
    if (rows.empty()) continue;
    if (rows.size() < 2)
      throw Error(ErrorCode::ClassTooSmall, "class '" + ds.class_names()[y] + "' has fewer than 2 instances");
    std::size_t n_test = detail::round_count(test_fraction * static_cast<double>(rows.size()));
    n_test = std::clamp<std::size_t>(n_test, 1, rows.size() - 1);
    shuffle(rows, rng);
    test_idx.insert(test_idx.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_idx.insert(train_idx.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {ds.select_rows(train_idx), ds.select_rows(test_idx)};
}

/// Stratified subsample keeping round(fraction * count) rows per class (at
/// least one). fraction == 1 returns the input unchanged.
inline Dataset subsample_fraction(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  if (fraction == 1.0) return ds;
  const auto counts = ds.class_counts();
  const auto present = static_cast<double>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
  if (fraction * static_cast<double>(ds.rows()) < present)
    throw Error(ErrorCode::TooFewRows, "fraction leaves fewer rows than classes");
  Rng rng(derive_seed(seed, "subsample_fraction"));
  std::vector<std::size_t> keep;
  for (auto& rows : ds.rows_by_class()) {
    if (rows.empty()) continue;
    auto k = std::clamp<std::size_t>(detail::round_count(fraction * static_cast<double>(rows.size())), 1, rows.size());
    shuffle(rows, rng);
    keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::sort(keep.begin(), keep.end());
  return ds.select_rows(keep);
}

enum class RebalanceMode { none, over, under };

constexpr std::string_view to_string(RebalanceMode m) noexcept {
  switch (m) {
    case RebalanceMode::none: return "none";
    case RebalanceMode::over: return "over";
    case RebalanceMode::under: return "under";
  }
  return "none";
}

inline RebalanceMode rebalance_mode_from_string(std::string_view s) {
  if (s == "none") return RebalanceMode::none;
  if (s == "over") return RebalanceMode::over;
  if (s == "under") return RebalanceMode::under;
  throw Error(ErrorCode::InvalidArgument, "unknown rebalance mode '" + std::string(s) + "'");
}

/// over: minority classes are topped up to the largest class count by
/// sampling with replacement (originals kept, extras appended).
/// under: every class is cut to the smallest count by sampling without
/// replacement (original order kept).
inline Dataset rebalance(const Dataset& ds, RebalanceMode mode, std::uint64_t seed) {
  if (mode == RebalanceMode::none) return ds;
  auto by_class = ds.rows_by_class();
  std::erase_if(by_class, [](const auto& rows) { return rows.empty(); });
  if (by_class.size() < 2) throw Error(ErrorCode::SingleClass, "rebalancing needs at least two classes");
  Rng rng(derive_seed(seed, "rebalance"));

  std::vector<std::size_t> idx;
  if (mode == RebalanceMode::over) {
    std::size_t target = 0;
    for (const auto& rows : by_class) target = std::max(target, rows.size());
    idx.resize(ds.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (const auto& rows : by_class)
      for (std::size_t k = rows.size(); k < target; ++k) idx.push_back(rows[uniform_index(rng, rows.size())]);
  } else {
    std::size_t target = ds.rows();
    for (const auto& rows : by_class) target = std::min(target, rows.size());
    for (auto& rows : by_class) {
      shuffle(rows, rng);
      idx.insert(idx.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(target));
    }
    std::sort(idx.begin(), idx.end());
  }
  return ds.select_rows(idx);
}

}  // namespace ciber
