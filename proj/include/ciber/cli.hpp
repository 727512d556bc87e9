#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ciber/bench.hpp"
#include "ciber/classifier.hpp"
#include "ciber/data.hpp"
#include "ciber/simulate.hpp"

namespace ciber::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Parsed command line. Every numeric field is range-checked by the parser.
struct RunConfig {
  std::string command;
  std::string data_path;
  std::string test_path;
  std::string model_path;
  std::string out_path;
  std::string json_path;
  std::string target = "y";
  std::string discretizer = "equal_width";
  std::size_t bins = 10;
  double alpha = 1.0;
  double threshold = 0.2;
  std::string rebalance = "none";
  std::uint64_t seed = 0;
  std::size_t max_categories = 20;
  bool strict_missing = false;
  std::vector<std::string> type_overrides;
  double test_fraction = 0.3;
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t repeats = 10;
  std::vector<std::string> models = {"ciber", "naive_bayes"};
  std::size_t pairs = 1;
  std::vector<std::size_t> lambdas = {1, 2, 3, 4, 5};
  std::size_t n_per_class = 5000;
  double offset = 20.0;
  double noise = 0.0;
};

namespace detail {

inline FitConfig fit_config(const RunConfig& rc) {
  FitConfig c;
  c.discretizer = bin_scheme_from_string(rc.discretizer);
  c.bins = rc.bins;
  c.alpha = rc.alpha;
  c.threshold = rc.threshold;
  c.rebalance = rebalance_mode_from_string(rc.rebalance);
  c.seed = derive_seed(rc.seed, "fit");
  return c;
}

inline LoadOptions load_options(const RunConfig& rc, std::ostream& err) {
  LoadOptions o;
  o.target_column = rc.target;
  o.max_categories = rc.max_categories;
  o.missing = rc.strict_missing ? MissingPolicy::error : MissingPolicy::drop;
  o.report = &err;
  for (const auto& spec : rc.type_overrides) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--type expects name=type, got '" + spec + "'");
    o.type_overrides[spec.substr(0, eq)] = feature_type_from_string(spec.substr(eq + 1));
  }
  return o;
}

/// Flat `key = value` lines; blank lines and lines starting with '#' are
/// skipped.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = ciber::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "config line without '=': " + line);
    out.emplace_back(std::string(ciber::detail::trim(t.substr(0, eq))), std::string(ciber::detail::trim(t.substr(eq + 1))));
  }
  return out;
}

/// Appends `--key=value` for every config entry whose flag is absent from
/// the command line, so explicit flags win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(path))
    if (!given(key)) extra.push_back("--" + key + "=" + value);
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") out << content;
  else write_file(path, content);
}

inline std::string predictions_csv(const CiberModel& m, const EncodedRows& rows) {
  std::string out = "row,predicted";
  for (const auto& c : m.schema().class_names) out += "," + csv_escape("p_" + c);
  out += "\n";
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto p = m.predict_proba(rows.row(r));
    out += std::to_string(rows.source_rows[r]) + "," + csv_escape(m.schema().class_names[argmax_class(p)]);
    for (double v : p) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

inline std::string inspect_report(const CiberModel& m) {
  std::ostringstream os;
  const auto& s = m.schema();
  os << "target: " << s.target_name << "\n";
  os << "classes: " << m.classes() << "\n";
  for (std::size_t y = 0; y < m.classes(); ++y)
    os << "  " << s.class_names[y] << "  prior=" << format_double(m.priors()[y])
       << "  rows=" << m.table().class_total(y) << "\n";
  const auto& c = m.config();
  os << "discretizer: " << to_string(c.discretizer) << " bins=" << c.bins << " alpha=" << format_double(c.alpha)
     << " rebalance=" << to_string(c.rebalance) << "\n";
  os << "features: " << m.features() << "\n";
  for (std::size_t i = 0; i < m.features(); ++i)
    os << "  [" << i << "] " << s.column_names[i] << "  " << to_string(s.feature_types[i]) << "  "
       << to_string(m.bin_edges()[i].scheme) << "  bins=" << m.bin_edges()[i].bin_count() << "\n";
  const auto& p = m.partition();
  os << "partition: threshold=" << format_double(p.threshold) << " groups=" << p.groups.size() << "\n";
  for (const auto& g : p.groups) {
    os << "  " << (g.size() > 1 ? "comonotone " : "independent") << " {";
    for (std::size_t k = 0; k < g.size(); ++k) os << (k ? ", " : "") << s.column_names[g[k]];
    os << "}\n";
  }
  for (const auto& mg : p.merges)
    os << "  merge " << s.column_names[mg.first] << " + " << s.column_names[mg.second]
       << " at distance " << format_double(mg.distance) << "\n";
  return os.str();
}

inline int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.command == "simulate") {
    SegmentSpec spec;
    spec.pairs = rc.pairs;
    spec.n_per_class = rc.n_per_class;
    spec.offset = rc.offset;
    spec.noise = rc.noise;
    spec.seed = derive_seed(rc.seed, "simulate");
    emit(rc.out_path, to_csv(gen_segments(spec)), out);
    return ok;
  }
  if (rc.command == "train") {
    const auto ds = load_csv(rc.data_path, load_options(rc, err));
    const auto model = fit(ds, fit_config(rc));
    emit(rc.out_path, serialize(model), out);
    return ok;
  }
  if (rc.command == "predict") {
    const auto model = load(rc.model_path);
    const auto rows = encode_with_schema(parse_csv(read_file(rc.data_path)), model.schema(),
                                         rc.strict_missing ? MissingPolicy::error : MissingPolicy::drop, &err);
    emit(rc.out_path, predictions_csv(model, rows), out);
    return ok;
  }
  if (rc.command == "inspect") {
    emit(rc.out_path, inspect_report(load(rc.model_path)), out);
    return ok;
  }
  if (rc.command == "eval") {
    const auto opts = load_options(rc, err);
    Dataset train, test;
    if (rc.test_path.empty()) {
      std::tie(train, test) = stratified_split(load_csv(rc.data_path, opts), rc.test_fraction,
                                               derive_seed(rc.seed, "eval.split"));
    } else {
      train = load_csv(rc.data_path, opts);
      const auto rows = encode_with_schema(parse_csv(read_file(rc.test_path)), Schema::of(train), opts.missing, &err);
      if (!rows.labels) throw Error(ErrorCode::MissingTarget, "test file lacks target column '" + rc.target + "'");
      test = Dataset(rows.columns, *rows.labels, train.feature_types(), train.column_names(), train.class_names(),
                     train.categories(), train.target_name());
    }
    const auto cfg = fit_config(rc);
    std::vector<ModelSpec> specs;
    for (const auto& name : rc.models) {
      if (name == "ciber") specs.push_back(ciber_model_spec(cfg));
      else if (name == "naive_bayes" || name == "nb") specs.push_back(naive_bayes_model_spec(cfg));
      else throw Error(ErrorCode::InvalidArgument, "unknown model '" + name + "'");
    }
    const auto points = error_curve(train, test, specs, rc.fractions, rc.repeats, derive_seed(rc.seed, "eval"));
    emit(rc.out_path, curve_csv(points), out);
    if (!rc.json_path.empty()) write_file(rc.json_path, curve_json(points).dump(1) + "\n");
    return ok;
  }
  if (rc.command == "bench-time") {
    std::vector<SegmentSpec> specs;
    for (auto lambda : rc.lambdas) {
      SegmentSpec s;
      s.pairs = lambda;
      s.n_per_class = rc.n_per_class;
      s.offset = rc.offset;
      specs.push_back(s);
    }
    TimeRatioOptions opt;
    opt.repeats = rc.repeats;
    opt.test_fraction = rc.test_fraction;
    opt.fit = fit_config(rc);
    opt.seed = derive_seed(rc.seed, "bench-time");
    const auto points = time_ratio(specs, opt);
    emit(rc.out_path, timing_csv(points), out);
    if (!rc.json_path.empty()) write_file(rc.json_path, timing_json(points).dump(1) + "\n");
    return ok;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + rc.command + "'");
}

}  // namespace detail

/// Runs the `ciber` command line. Exit codes: 0 success, 1 usage error
/// (synopsis printed to `err`), 2 data or model error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig rc;
  CLI::App app{"Comonotone-independence Bayesian classifier", "ciber"};
  app.require_subcommand(1);

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", rc.seed, "Master random seed")->envname("CIBER_SEED");
  };
  std::string config_path;  // consumed by expand_config before parsing
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat key=value file; command-line flags take precedence");
  };
  auto add_load = [&](CLI::App* sub) {
    sub->add_option("--target", rc.target, "Target column name")->capture_default_str();
    sub->add_option("--max-categories", rc.max_categories, "Distinct-value limit for discrete inference")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--strict-missing", rc.strict_missing, "Fail on missing cells instead of dropping rows");
    sub->add_option("--type", rc.type_overrides, "Feature type override name=categorical|continuous|discrete");
  };
  auto add_fit = [&](CLI::App* sub) {
    sub->add_option("--discretizer", rc.discretizer, "Binning scheme")
        ->check(CLI::IsMember({"equal_width", "mean_sigma", "mdlp"}))
        ->capture_default_str();
    sub->add_option("--bins", rc.bins, "Equal-width bin count")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30))
        ->capture_default_str();
    sub->add_option("--alpha", rc.alpha, "Laplace smoothing constant")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--threshold", rc.threshold, "Clustering distance threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--rebalance", rc.rebalance, "Class re-balancing")
        ->check(CLI::IsMember({"none", "over", "under"}))
        ->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Fit a model from a CSV file");
  train->add_option("--data", rc.data_path, "Training CSV")->required();
  train->add_option("--out", rc.out_path, "Model file to write")->required();
  add_load(train);
  add_fit(train);
  add_seed(train);
  add_config(train);

  auto* predict = app.add_subcommand("predict", "Write per-row predictions and class posteriors");
  predict->add_option("--model", rc.model_path, "Model file")->required();
  predict->add_option("--data", rc.data_path, "CSV with the model's feature columns")->required();
  predict->add_option("--out", rc.out_path, "Output CSV (default stdout)");
  predict->add_flag("--strict-missing", rc.strict_missing, "Fail on missing cells instead of dropping rows");
  add_seed(predict);
  add_config(predict);

  auto* eval = app.add_subcommand("eval", "Error-rate curve over growing training fractions");
  eval->add_option("--data", rc.data_path, "Training CSV (split when --test is absent)")->required();
  eval->add_option("--test", rc.test_path, "Held-out test CSV");
  eval->add_option("--test-fraction", rc.test_fraction, "Held-out share when splitting --data")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval->add_option("--fractions", rc.fractions, "Ascending training fractions in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->delimiter(',');
  eval->add_option("--repeats", rc.repeats, "Repeats per fraction")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  eval->add_option("--models", rc.models, "Models to compare: ciber, naive_bayes")->delimiter(',');
  eval->add_option("--out", rc.out_path, "Results CSV (default stdout)");
  eval->add_option("--json", rc.json_path, "JSON summary path");
  add_load(eval);
  add_fit(eval);
  add_seed(eval);
  add_config(eval);

  auto* simulate = app.add_subcommand("simulate", "Generate two-segment synthetic data");
  simulate->add_option("--lambda", rc.pairs, "Number of feature pairs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--n", rc.n_per_class, "Rows per class")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--offset", rc.offset, "Segment offset")->capture_default_str();
  simulate->add_option("--noise", rc.noise, "Gaussian noise std-dev")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", rc.out_path, "Output CSV (default stdout)");
  add_seed(simulate);
  add_config(simulate);

  auto* bench = app.add_subcommand("bench-time", "CIBer / Naive Bayes running-time ratios versus feature pairs");
  bench->add_option("--lambdas", rc.lambdas, "Feature-pair counts")->check(CLI::PositiveNumber)->delimiter(',');
  bench->add_option("--n", rc.n_per_class, "Rows per class")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", rc.repeats, "Repeats per lambda")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  bench->add_option("--test-fraction", rc.test_fraction, "Held-out share")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--offset", rc.offset, "Segment offset");
  bench->add_option("--out", rc.out_path, "Results CSV (default stdout)");
  bench->add_option("--json", rc.json_path, "JSON summary path");
  add_fit(bench);
  add_seed(bench);
  add_config(bench);

  auto* inspect = app.add_subcommand("inspect", "Human-readable model summary");
  inspect->add_option("--model", rc.model_path, "Model file")->required();
  inspect->add_option("--out", rc.out_path, "Report path (default stdout)");

  // bench-time defaults differ from the generic ones.
  bench->preparse_callback([&](std::size_t) {
    rc.bins = 1000;
    rc.n_per_class = 50000;
    rc.test_fraction = 0.2;
  });
  simulate->preparse_callback([&](std::size_t) { rc.n_per_class = 5000; });

  std::vector<std::string> args;
  try {
    args = detail::expand_config(std::vector<std::string>(argv + std::min(argc, 1), argv + argc));
  } catch (const Error& e) {
    err << "ciber: " << e.what() << "\n";
    return data_error;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "ciber: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return usage_error;
  }
  rc.command = app.get_subcommands().front()->get_name();
  if (rc.command == "eval" && !(rc.test_fraction > 0.0 && rc.test_fraction < 1.0)) {
    err << "ciber: --test-fraction must lie in (0, 1)\n" << eval->help();
    return usage_error;
  }
  for (double f : rc.fractions)
    if (!(f > 0.0)) {
      err << "ciber: --fractions must lie in (0, 1]\n" << eval->help();
      return usage_error;
    }

  try {
    return detail::run(rc, out, err);
  } catch (const Error& e) {
    err << "ciber: " << e.what() << "\n";
    return data_error;
  }
}

}  // namespace ciber::cli
