// heartcbr: command-line front end for the case-based heart disease pipeline.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "heartcbr/pipeline.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct Flags {
  std::string input;
  double train_fraction = 0.6;
  std::string weights;
  bool strict = false;
  bool incremental_retain = false;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int epochs = 100;
  double eta = 0.1;
};

heartcbr::RunConfig to_config(const Flags& f) {
  heartcbr::RunConfig cfg;
  cfg.input = f.input;
  cfg.train_fraction = f.train_fraction;
  cfg.mode = f.strict ? heartcbr::ValidationMode::Strict : heartcbr::ValidationMode::Lenient;
  if (!f.weights.empty()) cfg.weights = heartcbr::parse_weights(f.weights);
  cfg.incremental_retain = f.incremental_retain;
  cfg.out_dir = f.out_dir;
  cfg.seed = f.seed;
  cfg.epochs = f.epochs;
  cfg.eta = f.eta;
  return cfg;
}

void add_common(CLI::App* cmd, Flags& f, bool needs_input = true) {
  auto* in = cmd->add_option("--input", f.input, "Heart disease CSV with a header row");
  if (needs_input) in->required()->check(CLI::ExistingFile);
  cmd->add_option("--train-fraction", f.train_fraction, "Leading share of rows used for training")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--weights", f.weights, "13 comma-separated attribute weights");
  cmd->add_flag("--strict", f.strict, "Reject out-of-domain ca/thal codes instead of warning");
  cmd->add_option("--out-dir", f.out_dir, "Directory for output files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Case-based reasoning heart disease predictor"};
  app.require_subcommand(1);
  Flags f;

  auto* split = app.add_subcommand("split", "Sequential train/test split and case base export");
  add_common(split, f);

  auto* evaluate = app.add_subcommand("evaluate", "Predict the test split and write the evaluation report");
  add_common(evaluate, f);
  evaluate->add_flag("--incremental-retain", f.incremental_retain,
                     "Retain each test case with its predicted target before the next one");

  auto* stats = app.add_subcommand("stats", "Descriptive tables for true and predicted labels");
  add_common(stats, f);
  stats->add_flag("--incremental-retain", f.incremental_retain, "Use the retain-during-evaluation path");

  auto* correlate = app.add_subcommand("correlate", "Product-moment correlation matrix");
  add_common(correlate, f);

  auto* train_nn = app.add_subcommand("train-nn", "Train the 13-3-2 backpropagation baseline");
  add_common(train_nn, f);
  train_nn->add_option("--seed", f.seed, "Weight initialization seed");
  train_nn->add_option("--epochs", f.epochs, "Training epochs (>= 1)")->check(CLI::PositiveNumber);
  train_nn->add_option("--eta", f.eta, "Learning rate")->check(CLI::NonNegativeNumber);

  auto* run_all = app.add_subcommand("run-all", "split, evaluate, stats and correlate");
  add_common(run_all, f);
  run_all->add_flag("--incremental-retain", f.incremental_retain, "Use the retain-during-evaluation path");

  heartcbr::PredictRequest req;
  std::string case_base;
  std::string query_csv;
  std::map<std::string, std::string> fields;
  auto* predict = app.add_subcommand("predict", "Solve one query case against a persisted case base");
  add_common(predict, f, false);
  predict->add_option("--case-base", case_base, "Persisted case base (default <out-dir>/case_base.csv)");
  predict->add_option("--query", query_csv, "Single-row CSV holding the query case")->check(CLI::ExistingFile);
  predict->add_flag("--retain", req.retain, "Store the solved case and refresh the normalization sidecar");
  predict->add_option("--top", req.top, "Number of ranked cases to print");
  for (auto name : heartcbr::kAttributeNames) {
    const std::string key(name);
    predict->add_option_function<std::string>(
        "--" + key, [&fields, key](const std::string& v) { fields[key] = v; }, "Query " + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    const auto cfg = [&] {
      try {
        return to_config(f);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--weights", e.what());
      }
    }();

    if (*split) {
      const auto s = heartcbr::cmd_split(cfg);
      std::cout << "split " << s.total << " cases: " << s.train << " train, " << s.test << " test ("
                << s.warnings << " validation warnings)\n";
    } else if (*evaluate) {
      const auto r = heartcbr::cmd_evaluate(cfg);
      std::cout << "test accuracy " << r.test_accuracy << " (" << r.test_correct << "/" << r.test_count
                << "), merged accuracy " << r.merged_accuracy << "\n";
    } else if (*stats) {
      const auto s = heartcbr::cmd_stats(cfg);
      std::cout << "positives: " << s.true_labels.positive << " true, " << s.predicted_labels.positive
                << " predicted\n";
    } else if (*correlate) {
      heartcbr::cmd_correlate(cfg);
      std::cout << "wrote " << (cfg.out_dir / heartcbr::files::kCorrelation).string() << "\n";
    } else if (*train_nn) {
      const auto s = heartcbr::cmd_train_nn(cfg);
      std::cout << "mlp test accuracy " << s.test_accuracy << " after " << cfg.epochs << " epochs\n";
    } else if (*run_all) {
      const auto r = heartcbr::cmd_run_all(cfg);
      std::cout << "test accuracy " << r.test_accuracy << ", merged accuracy " << r.merged_accuracy << "\n";
    } else if (*predict) {
      req.case_base = case_base.empty() ? cfg.out_dir / heartcbr::files::kCaseBase
                                        : std::filesystem::path(case_base);
      if (!query_csv.empty()) req.query_csv = query_csv;
      if (!req.query_csv && fields.empty()) {
        throw CLI::ValidationError("predict", "give --query FILE or the 13 attribute flags");
      }
      req.query_fields = fields;
      req.mode = cfg.mode;
      req.weights = cfg.weights;
      heartcbr::cmd_predict(req, std::cout);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const heartcbr::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
