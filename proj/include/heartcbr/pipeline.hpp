#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heartcbr/analytics.hpp"
#include "heartcbr/case.hpp"
#include "heartcbr/dataset.hpp"
#include "heartcbr/engine.hpp"
#include "heartcbr/normalization.hpp"
#include "heartcbr/similarity.hpp"

namespace heartcbr {

/// Error tagged with the pipeline stage it came from ("parse", "split", ...).
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RunConfig {
  std::filesystem::path input;
  double train_fraction = 0.6;
  ValidationMode mode = ValidationMode::Lenient;
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(kFeatureCount);
  bool incremental_retain = false;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  int epochs = 100;
  double eta = 0.1;
};

/// Parses "w1,...,w13" into a weight vector.
Eigen::VectorXd parse_weights(const std::string& text);

struct LoadedDataset {
  ParsedDataset parsed;
  SplitResult split;
  NormalizationParams params;
};

LoadedDataset load_and_split(const RunConfig& cfg);

struct EvaluationRun {
  LoadedDataset data;
  EvaluationReport report;
};

/// Parse, split, fit on the training split, evaluate.
EvaluationRun run_evaluation(const RunConfig& cfg);

/// Output file names inside `out_dir`.
namespace files {
inline constexpr const char* kTrain = "train.csv";
inline constexpr const char* kTest = "test.csv";
inline constexpr const char* kManifest = "split_manifest.json";
inline constexpr const char* kCaseBase = "case_base.csv";
inline constexpr const char* kReport = "evaluation_report.json";
inline constexpr const char* kPredictions = "predictions.csv";
inline constexpr const char* kStatsTrue = "stats_true.csv";
inline constexpr const char* kStatsPredicted = "stats_predicted.csv";
inline constexpr const char* kCorrelation = "correlation.csv";
inline constexpr const char* kModel = "mlp_model.json";
inline constexpr const char* kTrainingLog = "mlp_training_log.csv";
inline constexpr const char* kNnReport = "mlp_report.json";
}  // namespace files

struct SplitSummary {
  std::size_t total = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t warnings = 0;
};

/// Writes train/test CSVs, the split manifest, and the training case base
/// with its normalization sidecar.
SplitSummary cmd_split(const RunConfig& cfg);

/// Writes the evaluation report and the per-case test CSV.
EvaluationReport cmd_evaluate(const RunConfig& cfg);

struct StatsOutput {
  StatsTables true_labels;
  StatsTables predicted_labels;
};

/// Writes stats tables for ground-truth and predicted labels over the whole file.
StatsOutput cmd_stats(const RunConfig& cfg);

/// Writes the 14 x 14 correlation matrix (13 attributes plus target).
Eigen::MatrixXd cmd_correlate(const RunConfig& cfg);

struct NnSummary {
  double test_accuracy = 0.0;
  double final_mse = 0.0;
  std::size_t train = 0;
  std::size_t test = 0;
};

/// Trains the 13-3-2 network on the normalized training split.
NnSummary cmd_train_nn(const RunConfig& cfg);

struct PredictRequest {
  std::filesystem::path case_base;
  std::optional<std::filesystem::path> query_csv;
  std::map<std::string, std::string> query_fields;
  bool retain = false;
  std::size_t top = 5;
  ValidationMode mode = ValidationMode::Lenient;
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(kFeatureCount);
};

/// Solves one query against a persisted case base and writes the report JSON
/// to `out`. With `retain` the solved case is appended and the sidecar
/// re-fitted.
Reasoner::CycleResult cmd_predict(const PredictRequest& req, std::ostream& out);

/// split, evaluate, stats and correlate in one pass.
EvaluationReport cmd_run_all(const RunConfig& cfg);

}  // namespace heartcbr
