#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "heartcbr/analytics.hpp"
#include "heartcbr/engine.hpp"

namespace heartcbr {

/// Run parameters echoed at the top of an evaluation report.
struct ReportContext {
  double train_fraction = 0.6;
  std::vector<double> weights;
  std::size_t validation_warnings = 0;
};

nlohmann::ordered_json stats_to_json(const StatsTables& s);
StatsTables stats_from_json(const nlohmann::json& j);

nlohmann::ordered_json evaluation_to_json(const EvaluationReport& report, const ReportContext& ctx);
EvaluationReport evaluation_from_json(const nlohmann::json& j);

/// Two-space indented JSON followed by a newline.
void write_evaluation_report(std::ostream& out, const EvaluationReport& report,
                             const ReportContext& ctx);
EvaluationReport read_evaluation_report(std::istream& in);

/// index,true_target,predicted_target,best_case_id,best_similarity
void write_predictions_csv(std::ostream& out, std::span<const CasePrediction> rows);
std::vector<CasePrediction> read_predictions_csv(std::istream& in);

nlohmann::ordered_json prediction_to_json(const Prediction& p);
nlohmann::ordered_json cycle_to_json(const Reasoner::CycleResult& r);

}  // namespace heartcbr
