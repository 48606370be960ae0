#include "heartcbr/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "heartcbr/mlp.hpp"
#include "heartcbr/report.hpp"
#include "text_util.hpp"

namespace heartcbr {

using nlohmann::ordered_json;

namespace {

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  return in_stage("output", [&] {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
  });
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  in_stage("output", [&] {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    writer(out);
    if (!out.flush()) throw DataError("write failed for " + path.string());
  });
}

std::vector<double> weight_list(const Eigen::VectorXd& w) { return {w.data(), w.data() + w.size()}; }

SimilarityConfig similarity_config(const RunConfig& cfg) {
  return in_stage("config", [&] { return SimilarityConfig(cfg.weights, cfg.incremental_retain); });
}

}  // namespace

Eigen::VectorXd parse_weights(const std::string& text) {
  const auto fields = detail::split_fields(text);
  if (fields.size() != kFeatureCount) {
    throw std::invalid_argument("--weights needs 13 comma-separated values, got " +
                                std::to_string(fields.size()));
  }
  Eigen::VectorXd w(kFeatureCount);
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto v = detail::parse_real(fields[static_cast<std::size_t>(i)]);
    if (!v) throw std::invalid_argument("bad weight \"" + fields[static_cast<std::size_t>(i)] + "\"");
    w(i) = *v;
  }
  SimilarityConfig check(w);
  return w;
}

LoadedDataset load_and_split(const RunConfig& cfg) {
  if (cfg.input.empty()) throw PipelineError("parse", "no input file given");
  LoadedDataset d;
  d.parsed = in_stage("parse", [&] { return parse_csv_file(cfg.input, cfg.mode); });
  d.split = in_stage("split", [&] { return split_sequential(d.parsed.cases, cfg.train_fraction); });
  d.params = in_stage("fit", [&] { return fit_minmax(d.split.train); });
  return d;
}

EvaluationRun run_evaluation(const RunConfig& cfg) {
  const auto sim = similarity_config(cfg);
  EvaluationRun run{load_and_split(cfg), {}};
  run.report = in_stage("evaluate", [&] { return evaluate(run.data.split.test, run.data.split.train, sim, run.data.params); });
  return run;
}

SplitSummary cmd_split(const RunConfig& cfg) {
  const auto d = load_and_split(cfg);
  const auto dir = prepare_out_dir(cfg);
  const auto train_cases = d.split.train.cases();
  write_file(dir / files::kTrain, [&](std::ostream& out) { write_csv(out, train_cases); });
  write_file(dir / files::kTest, [&](std::ostream& out) { write_csv(out, d.split.test); });
  write_file(dir / files::kCaseBase, [&](std::ostream& out) { write_case_base(out, d.split.train); });
  write_file(normalization_sidecar_path(dir / files::kCaseBase),
             [&](std::ostream& out) { write_normalization(out, d.params); });

  SplitSummary s{d.parsed.cases.size(), d.split.train.size(), d.split.test.size(), d.parsed.warnings.size()};
  const ordered_json manifest{{"input", cfg.input.filename().string()},
                              {"train_fraction", cfg.train_fraction},
                              {"total", s.total},
                              {"train", s.train},
                              {"test", s.test},
                              {"validation_warnings", s.warnings}};
  write_file(dir / files::kManifest, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
  return s;
}

EvaluationReport cmd_evaluate(const RunConfig& cfg) {
  auto run = run_evaluation(cfg);
  const auto dir = prepare_out_dir(cfg);
  const ReportContext ctx{cfg.train_fraction, weight_list(cfg.weights), run.data.parsed.warnings.size()};
  write_file(dir / files::kReport, [&](std::ostream& out) { write_evaluation_report(out, run.report, ctx); });
  write_file(dir / files::kPredictions,
             [&](std::ostream& out) { write_predictions_csv(out, run.report.test_predictions); });
  return std::move(run.report);
}

StatsOutput cmd_stats(const RunConfig& cfg) {
  const auto run = run_evaluation(cfg);
  const auto& cases = run.data.parsed.cases;
  StatsOutput s;
  s.true_labels = in_stage("stats", [&] { return dataset_stats(cases, true_labels(cases)); });
  s.predicted_labels = run.report.stats;
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / files::kStatsTrue, [&](std::ostream& out) { write_stats_csv(out, s.true_labels); });
  write_file(dir / files::kStatsPredicted, [&](std::ostream& out) { write_stats_csv(out, s.predicted_labels); });
  return s;
}

Eigen::MatrixXd cmd_correlate(const RunConfig& cfg) {
  if (cfg.input.empty()) throw PipelineError("parse", "no input file given");
  const auto parsed = in_stage("parse", [&] { return parse_csv_file(cfg.input, cfg.mode); });
  const Eigen::MatrixXd r = in_stage("correlate", [&] { return pearson_correlation(parsed.cases); });
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / files::kCorrelation, [&](std::ostream& out) { write_correlation_csv(out, r, correlation_labels()); });
  return r;
}

NnSummary cmd_train_nn(const RunConfig& cfg) {
  if (cfg.epochs < 1) throw PipelineError("config", "epochs must be >= 1");
  if (!(cfg.eta >= 0.0)) throw PipelineError("config", "eta must be >= 0");
  const auto d = load_and_split(cfg);
  const Eigen::MatrixXd train_x = normalized_matrix(d.split.train, d.params);
  const auto train_y = true_labels(d.split.train.cases());
  const auto result = in_stage("train", [&] {
    return nn::train_mlp(train_x, train_y, {cfg.epochs, cfg.eta, cfg.seed, 3});
  });

  const auto test_y = in_stage("evaluate", [&] { return true_labels(d.split.test); });
  std::vector<int> predicted;
  for (const auto& c : d.split.test) predicted.push_back(nn::classify(result.model, normalize(c, d.params)));

  NnSummary s;
  s.test_accuracy = accuracy(predicted, test_y);
  s.final_mse = result.epoch_mse.back();
  s.train = d.split.train.size();
  s.test = d.split.test.size();

  const auto dir = prepare_out_dir(cfg);
  write_file(dir / files::kModel, [&](std::ostream& out) { nn::write_model(out, result.model); });
  write_file(dir / files::kTrainingLog, [&](std::ostream& out) { nn::write_training_log(out, result.epoch_mse); });
  const ordered_json summary{{"architecture", {13, 3, 2}},
                             {"epochs", cfg.epochs},
                             {"eta", cfg.eta},
                             {"seed", cfg.seed},
                             {"train_count", s.train},
                             {"test_count", s.test},
                             {"final_mse", s.final_mse},
                             {"test_accuracy", s.test_accuracy}};
  write_file(dir / files::kNnReport, [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
  return s;
}

Reasoner::CycleResult cmd_predict(const PredictRequest& req, std::ostream& out) {
  if (req.case_base.empty() || !std::filesystem::exists(req.case_base)) {
    throw PipelineError("case-base", "case base not found: " + req.case_base.string());
  }
  Case query;
  if (req.query_csv) {
    const auto parsed = in_stage("query", [&] { return parse_csv_file(*req.query_csv, req.mode); });
    if (parsed.cases.size() != 1) {
      throw PipelineError("query", "query CSV must hold exactly one row, found " +
                                       std::to_string(parsed.cases.size()));
    }
    query = parsed.cases.front();
  } else {
    query = validate_case(req.query_fields, req.mode).value;  // ValidationError propagates as-is
  }
  query.target.reset();

  const auto sidecar = normalization_sidecar_path(req.case_base);
  auto cb = in_stage("case-base", [&] { return read_case_base_file(req.case_base); });
  if (cb.empty()) throw PipelineError("case-base", "case base is empty");
  auto params = in_stage("case-base", [&] {
    return std::filesystem::exists(sidecar) ? read_normalization_file(sidecar) : fit_minmax(cb);
  });
  Reasoner reasoner(std::move(cb), SimilarityConfig(req.weights), std::move(params));
  auto result = reasoner.solve(query, req.retain, req.top);
  if (req.retain) {
    in_stage("output", [&] {
      write_case_base_file(req.case_base, reasoner.case_base());
      write_normalization_file(sidecar, reasoner.params());
    });
  }
  out << cycle_to_json(result).dump(2) << '\n';
  return result;
}

EvaluationReport cmd_run_all(const RunConfig& cfg) {
  cmd_split(cfg);
  auto report = cmd_evaluate(cfg);
  cmd_stats(cfg);
  cmd_correlate(cfg);
  return report;
}

}  // namespace heartcbr
