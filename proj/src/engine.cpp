#include "heartcbr/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace heartcbr {

namespace {

std::vector<RankedCase> rank_cases(const FeatureVector& query_scaled, const Eigen::MatrixXd& scaled,
                                   std::span<const CaseBase::Entry> entries,
                                   const SimilarityConfig& cfg, const NormalizationParams& p) {
  if (entries.empty()) throw std::invalid_argument("retrieve: empty case base");
  const Eigen::VectorXd scores = similarity_scores(query_scaled, scaled, cfg, p);
  std::vector<RankedCase> ranked;
  ranked.reserve(entries.size());
  // Entries are stored in ascending id order, so index order is id order.
  for (const auto j : rank_descending(scores)) {
    const auto& e = entries[static_cast<std::size_t>(j)];
    ranked.push_back({e.id, scores(j), *e.value.target});
  }
  return ranked;
}

Prediction assemble(std::vector<RankedCase> ranked, std::size_t limit) {
  Prediction pred;
  pred.predicted_target = reuse(ranked);
  pred.best_case_id = ranked.front().id;
  pred.best_similarity = ranked.front().score;
  if (limit < ranked.size()) ranked.resize(limit);
  pred.ranking = std::move(ranked);
  return pred;
}

CasePrediction record(std::size_t index, const Case& c, const Prediction& pred) {
  return {index, *c.target, pred.predicted_target, pred.best_similarity, pred.best_case_id};
}

}  // namespace

const char* stage_name(CycleStage stage) {
  switch (stage) {
    case CycleStage::Retrieve: return "retrieve";
    case CycleStage::Reuse: return "reuse";
    case CycleStage::Revise: return "revise";
    case CycleStage::Retain: return "retain";
  }
  return "unknown";
}

std::vector<RankedCase> retrieve(const Case& query, const CaseBase& cb, const SimilarityConfig& cfg,
                                 const NormalizationParams& p) {
  return rank_cases(normalize(query, p), normalized_matrix(cb, p), cb.entries(), cfg, p);
}

int reuse(std::span<const RankedCase> ranked) {
  if (ranked.empty()) throw std::invalid_argument("reuse: empty ranking");
  double top = ranked.front().score;
  for (const auto& r : ranked) top = std::max(top, r.score);
  const RankedCase* best = nullptr;
  for (const auto& r : ranked) {
    if (top - r.score <= kScoreTolerance && (!best || r.id < best->id)) best = &r;
  }
  return best->target;
}

Prediction predict(const Case& query, const CaseBase& cb, const SimilarityConfig& cfg,
                   const NormalizationParams& p, std::size_t ranking_limit) {
  return assemble(retrieve(query, cb, cfg, p), ranking_limit);
}

RetainResult retain(const Case& query, int solved_target, CaseBase cb) {
  if (solved_target != 0 && solved_target != 1) {
    throw std::invalid_argument("retain: solution must be 0 or 1");
  }
  Case solved = query;
  solved.target = solved_target;
  validate(solved, ValidationMode::Lenient);
  const CaseId id = cb.add(solved);
  auto params = fit_minmax(cb);
  return {std::move(cb), std::move(params), id};
}

Reasoner::Reasoner(CaseBase cb, SimilarityConfig cfg)
    : cb_(std::move(cb)), cfg_(std::move(cfg)) {
  params_ = fit_minmax(cb_);
  rescale();
}

Reasoner::Reasoner(CaseBase cb, SimilarityConfig cfg, NormalizationParams params)
    : cb_(std::move(cb)), cfg_(std::move(cfg)), params_(std::move(params)) {
  if (params_.dimension() != kFeatureCount) {
    throw std::invalid_argument("normalization must cover 13 attributes");
  }
  rescale();
}

void Reasoner::rescale() {
  if (cfg_.weights().size() != kFeatureCount) {
    throw std::invalid_argument("similarity weights must cover 13 attributes");
  }
  scaled_ = normalized_matrix(cb_, params_);
}

std::vector<RankedCase> Reasoner::retrieve(const Case& query) const {
  return rank_cases(normalize(query, params_), scaled_, cb_.entries(), cfg_, params_);
}

Prediction Reasoner::predict(const Case& query, std::size_t ranking_limit) const {
  return assemble(retrieve(query), ranking_limit);
}

CaseId Reasoner::retain(const Case& query, int solved_target) {
  auto result = heartcbr::retain(query, solved_target, std::move(cb_));
  cb_ = std::move(result.cases);
  params_ = std::move(result.params);
  rescale();
  return result.id;
}

Reasoner::CycleResult Reasoner::solve(const Case& query, bool retain_solution,
                                      std::size_t ranking_limit) {
  CycleResult out;
  auto ranked = retrieve(query);
  out.log.push_back({CycleStage::Retrieve, "scored " + std::to_string(ranked.size()) + " cases"});
  out.prediction = assemble(std::move(ranked), ranking_limit);
  out.log.push_back({CycleStage::Reuse, "copied target " +
                                            std::to_string(out.prediction.predicted_target) +
                                            " from case " +
                                            std::to_string(out.prediction.best_case_id)});
  out.log.push_back({CycleStage::Revise, "skipped: binary solution needs no adaptation"});
  if (retain_solution) {
    out.retained_id = retain(query, out.prediction.predicted_target);
    out.log.push_back({CycleStage::Retain, "stored as case " + std::to_string(*out.retained_id)});
  }
  return out;
}

EvaluationReport evaluate(std::span<const Case> test, const CaseBase& cb, const SimilarityConfig& cfg,
                          const NormalizationParams& p) {
  if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!test[i].target) {
      throw std::invalid_argument("evaluate: test case " + std::to_string(i) + " has no target");
    }
  }

  EvaluationReport report;
  report.train_count = cb.size();
  report.test_count = test.size();
  report.incremental_retain = cfg.incremental_retain();

  const Reasoner frozen(cb, cfg, p);
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const Case& c = cb[i].value;
    report.train_predictions.push_back(record(i, c, frozen.predict(c, 1)));
    report.train_correct += report.train_predictions.back().predicted_target == *c.target;
  }

  if (cfg.incremental_retain()) {
    Reasoner working(cb, cfg, p);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto pred = working.predict(test[i], 1);
      report.test_predictions.push_back(record(i, test[i], pred));
      working.retain(test[i], pred.predicted_target);
    }
  } else {
    for (std::size_t i = 0; i < test.size(); ++i) {
      report.test_predictions.push_back(record(i, test[i], frozen.predict(test[i], 1)));
    }
  }

  std::vector<int> predicted;
  std::vector<int> truths;
  for (const auto& r : report.test_predictions) {
    predicted.push_back(r.predicted_target);
    truths.push_back(r.true_target);
    report.test_correct += r.predicted_target == r.true_target;
  }
  report.test_accuracy = accuracy(predicted, truths);
  report.confusion = confusion_counts(predicted, truths);
  report.merged_accuracy = static_cast<double>(report.train_correct + report.test_correct) /
                           static_cast<double>(report.train_count + report.test_count);

  std::vector<Case> merged = cb.cases();
  merged.insert(merged.end(), test.begin(), test.end());
  report.stats = dataset_stats(merged, report.merged_predicted_labels());
  return report;
}

}  // namespace heartcbr
