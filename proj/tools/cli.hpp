#pragma once

// Command-line front end. run() is separate from main() so tests can drive
// every subcommand in-process.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gls/gls.hpp"

namespace gls::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

struct GlobalConfig {
  std::uint64_t seed = 42;
  std::string k = "5/12";
  std::string r0 = "1";
  bool verbose = false;

  SmoothingParams params() const {
    SmoothingParams p{Rational::parse(k), Rational::parse(r0)};
    p.validate();
    return p;
  }
};

namespace detail {

inline std::ifstream open_in(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + std::string(what) + " '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, T (*parse)(std::string_view)) {
  std::vector<T> out;
  for (std::string_view item : text::split(csv, ',')) {
    if (text::normalize(item).empty()) continue;
    out.push_back(parse(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + csv + "'");
  return out;
}

inline Rational parse_rational(std::string_view s) { return Rational::parse(s); }

inline int parse_int(std::string_view s) {
  const std::string t = text::normalize(s);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + t + "'");
  }
  if (used != t.size()) throw ConfigError("not an integer: '" + t + "'");
  return v;
}

/// "3:0,2:0.1,1:0.25,0:0.5"
inline NoiseProfile parse_profile(const std::string& csv) {
  NoiseProfile p;
  for (std::string_view item : text::split(csv, ',')) {
    auto kv = text::split(item, ':');
    if (kv.size() != 2) throw ConfigError("noise profile entries look like level:probability, got '" + std::string(item) + "'");
    try {
      p[parse_int(kv[0])] = std::stod(std::string(kv[1]));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad flip probability in '" + std::string(item) + "'");
    }
  }
  return p;
}

struct TrainFlags {
  int epochs = 30;
  int warmup = 5;
  int lr_warmup = 5;
  double lr = 1e-2;
  double weight_decay = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int batch = 32;
  std::string arch = "linear";
  std::size_t hidden = 64;
  bool plain_ce = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--warmup", warmup, "Epochs restricted to |u|=3 samples")->capture_default_str();
    cmd->add_option("--lr-warmup", lr_warmup, "Linear learning-rate warm-up epochs")->capture_default_str();
    cmd->add_option("--lr", lr, "Peak learning rate")->capture_default_str();
    cmd->add_option("--weight-decay", weight_decay, "Decoupled weight decay")->capture_default_str();
    cmd->add_option("--beta1", beta1)->capture_default_str();
    cmd->add_option("--beta2", beta2)->capture_default_str();
    cmd->add_option("--batch", batch, "Mini-batch size")->capture_default_str();
    cmd->add_option("--arch", arch, "linear | mlp_1hidden")->capture_default_str();
    cmd->add_option("--hidden", hidden, "Hidden width for mlp_1hidden")->capture_default_str();
    cmd->add_flag("--plain-ce", plain_ce, "Force r = 0 (ordinary cross-entropy)");
  }

  TrainConfig config(const GlobalConfig& g) const {
    TrainConfig c;
    c.epochs = epochs;
    c.warmup_epochs = warmup;
    c.lr_warmup_epochs = lr_warmup;
    c.learning_rate = lr;
    c.weight_decay = weight_decay;
    c.beta1 = beta1;
    c.beta2 = beta2;
    c.batch_size = batch;
    c.architecture = parse_architecture(arch);
    c.hidden_width = hidden;
    c.plain_ce = plain_ce;
    c.seed = g.seed;
    c.smoothing_params = g.params();
    c.validate();
    return c;
  }
};

inline EvalSet eval_set(const TrainData& data, bool use_truth) {
  EvalSet e = EvalSet::from_examples(data.examples);
  if (use_truth) {
    if (!data.has_truth()) throw DataError("--truth requested but the file has no true_y column");
    e.labels = data.true_labels;
  }
  return e;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uncertainty-aware generalized label smoothing toolkit", "gls"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying option defaults");

  GlobalConfig g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--k", g.k, "Smoothing slope (rational, e.g. 5/12 or 0.375)")->capture_default_str();
  app.add_option("--r0", g.r0, "Smoothing intercept (rational)")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "Progress output on stderr");

  // build
  std::string input, lexicon_path, taxonomy_path, out_path, stats_path;
  unsigned threads = 1;
  auto* build = app.add_subcommand("build", "Build the labeled dataset from report records");
  build->add_option("--input", input, "Report records (JSON lines)")->required();
  build->add_option("--lexicon", lexicon_path, "Lexicon TSV")->required();
  build->add_option("--taxonomy", taxonomy_path, "Taxonomy TSV")->required();
  build->add_option("--out", out_path, "Output dataset (JSON lines)")->required();
  build->add_option("--stats", stats_path, "Stats file (default <out>.stats.json)");
  build->add_option("--threads", threads, "Worker threads")->capture_default_str();

  // validate
  std::string dataset_path;
  auto* validate = app.add_subcommand("validate", "Re-check every invariant of a built dataset");
  validate->add_option("--dataset", dataset_path, "Dataset (JSON lines)")->required();

  // train
  detail::TrainFlags tf;
  std::string data_path, model_out, metrics_out, heldout_path;
  bool use_truth = false;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier with the GLS loss");
  train_cmd->add_option("--data", data_path, "Training data (JSON lines)")->required();
  train_cmd->add_option("--model-out", model_out, "Where to save the model (JSON)")->required();
  train_cmd->add_option("--metrics-out", metrics_out, "Per-epoch metrics (JSON lines)");
  train_cmd->add_option("--heldout", heldout_path, "Held-out data scored every epoch");
  train_cmd->add_flag("--truth", use_truth, "Score held-out data against its true_y column");
  tf.add_to(train_cmd);

  // eval
  std::string model_path, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "AUC of a saved model on a data file");
  eval_cmd->add_option("--model", model_path, "Saved model (JSON)")->required();
  eval_cmd->add_option("--data", data_path, "Data (JSON lines)")->required();
  eval_cmd->add_option("--out", eval_out, "Also write the result here");
  eval_cmd->add_flag("--truth", use_truth, "Score against the true_y column");

  // sweep
  std::string k_list = "0.375,5/12,0.458", warmup_list = "3,5,7", sweep_out;
  double holdout = 0.25;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over k and warm-up epochs");
  sweep_cmd->add_option("--data", data_path, "Training data (JSON lines)")->required();
  sweep_cmd->add_option("--k-values,--ks", k_list, "Comma-separated k values")->capture_default_str();
  sweep_cmd->add_option("--warmup-values", warmup_list, "Comma-separated warm-up epochs")->capture_default_str();
  sweep_cmd->add_option("--holdout", holdout, "Held-out fraction")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Table output (CSV); stdout when omitted");
  sweep_cmd->add_option("--threads", threads, "Parallel cells")->capture_default_str();
  tf.add_to(sweep_cmd);

  // table1
  int digits = 3;
  auto* table_cmd = app.add_subcommand("table1", "Print the score -> rate -> target mapping");
  table_cmd->add_option("--digits", digits, "Decimal places for targets")->capture_default_str();

  // gen-synthetic
  std::size_t n = 4000, d = 10;
  std::string profile = "3:0,2:0.1,1:0.25,0:0.5", kind = "features";
  double separation = 2.0;
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write a seeded synthetic data set");
  gen_cmd->add_option("--kind", kind, "features | reports")->capture_default_str();
  gen_cmd->add_option("--n", n, "Number of examples / reports")->capture_default_str();
  gen_cmd->add_option("--d", d, "Feature dimension")->capture_default_str();
  gen_cmd->add_option("--profile", profile, "Flip probability per |u|")->capture_default_str();
  gen_cmd->add_option("--separation", separation, "Distance between class means")->capture_default_str();
  gen_cmd->add_option("--out", out_path, "Output (JSON lines)")->required();

  // After the sweep subcommand, --k and --warmup name the grid axes
  // (`sweep --k 0.375,5/12 --warmup 3,5`); the slope and warm-up of each cell
  // come from the grid, so the single-valued meanings do not apply there.
  std::vector<std::string> argv = args;
  const auto sub = std::find(argv.begin(), argv.end(), "sweep");
  for (auto it = sub; it != argv.end(); ++it) {
    if (*it == "--k") *it = "--k-values";
    if (*it == "--warmup") *it = "--warmup-values";
  }

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    const SmoothingParams params = g.params();

    if (*build) {
      auto lex_in = detail::open_in(lexicon_path, "lexicon");
      const Lexicon lexicon = load_lexicon(lex_in);
      auto tax_in = detail::open_in(taxonomy_path, "taxonomy");
      const TaxonomyMap taxonomy = load_taxonomy(tax_in);
      auto in = detail::open_in(input, "input");
      auto os = detail::open_out(out_path);
      const DatasetStats stats = build_dataset_stream(in, os, lexicon, taxonomy, {params, threads});
      auto ss = detail::open_out(stats_path.empty() ? out_path + ".stats.json" : stats_path);
      ss << stats_to_json(stats, params).dump(2) << '\n';
      for (const auto& e : stats.errors) err << "warning: input line " << e.line << ": " << e.message << '\n';
      if (g.verbose) err << stats.record_count << " records from " << stats.report_count << " reports\n";
      return kOk;
    }

    if (*validate) {
      auto in = detail::open_in(dataset_path, "dataset");
      const ValidationReport report = validate_dataset(in, params);
      for (const auto& e : report.errors) err << dataset_path << ":" << e.line << ": " << e.message << '\n';
      out << stats_to_json(report.stats, params).dump(2) << '\n';
      return report.ok() ? kOk : kData;
    }

    if (*train_cmd) {
      auto in = detail::open_in(data_path, "training data");
      const TrainData data = read_train_data(in);
      const TrainConfig cfg = tf.config(g);
      std::optional<EvalSet> heldout;
      if (!heldout_path.empty()) {
        auto hin = detail::open_in(heldout_path, "held-out data");
        heldout = detail::eval_set(read_train_data(hin), use_truth);
      }
      const TrainResult result = train(data.examples, cfg, heldout ? &*heldout : nullptr);
      auto mo = detail::open_out(model_out);
      mo << result.model.to_json().dump() << '\n';
      if (!metrics_out.empty()) {
        auto os = detail::open_out(metrics_out);
        write_metrics(os, result.history);
      }
      if (g.verbose)
        for (const auto& m : result.history) err << epoch_to_json(m).dump() << '\n';
      return kOk;
    }

    if (*eval_cmd) {
      auto min = detail::open_in(model_path, "model");
      nlohmann::json mj;
      try {
        mj = nlohmann::json::parse(min);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model: ") + e.what());
      }
      const Model model = Model::from_json(mj);
      auto in = detail::open_in(data_path, "data");
      const EvalSet eval = detail::eval_set(read_train_data(in), use_truth);
      const nlohmann::json result = {{"auc", evaluate_auc(model, eval)}, {"n", eval.labels.size()}};
      out << result.dump() << '\n';
      if (!eval_out.empty()) {
        auto os = detail::open_out(eval_out);
        os << result.dump() << '\n';
      }
      return kOk;
    }

    if (*sweep_cmd) {
      auto in = detail::open_in(data_path, "training data");
      const TrainData data = read_train_data(in);
      const auto ks = detail::parse_list<Rational>(k_list, detail::parse_rational);
      const auto warmups = detail::parse_list<int>(warmup_list, detail::parse_int);
      detail::TrainFlags base = tf;
      base.warmup = 0;  // every cell sets its own
      const auto cells = sweep(data.examples, base.config(g), ks, warmups, {holdout, threads});
      if (sweep_out.empty()) {
        write_sweep_table(out, cells);
      } else {
        auto os = detail::open_out(sweep_out);
        write_sweep_table(os, cells);
      }
      return kOk;
    }

    if (*table_cmd) {
      if (digits < 0 || digits > 12) throw ConfigError("--digits must lie in [0, 12]");
      out << "# u  r  [target_neg, target_pos]  interpretation   (k = " << params.k << ", r0 = " << params.r0 << ")\n";
      for (const auto& row : table1(params)) {
        out << row.u.value() << "  " << to_fixed(row.rate, 3) << "  [" << to_fixed(row.target.neg, digits) << ", "
            << to_fixed(row.target.pos, digits) << "]  " << row.interpretation << '\n';
      }
      return kOk;
    }

    if (*gen_cmd) {
      auto os = detail::open_out(out_path);
      if (kind == "features") {
        const auto ds = synthetic_noisy_generator(n, d, detail::parse_profile(profile), g.seed, separation);
        for (std::size_t i = 0; i < ds.examples.size(); ++i) write_train_example(os, ds.examples[i], ds.true_labels[i]);
      } else if (kind == "reports") {
        for (const auto& r : synthetic_reports(n, vocabulary(default_taxonomy()), g.seed)) write_report(os, r);
      } else {
        throw ConfigError("--kind must be 'features' or 'reports'");
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace gls::cli
