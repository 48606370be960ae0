#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heartcbr/analytics.hpp"
#include "heartcbr/case.hpp"
#include "heartcbr/dataset.hpp"
#include "heartcbr/normalization.hpp"
#include "heartcbr/similarity.hpp"

namespace heartcbr {

inline constexpr std::size_t kFullRanking = std::numeric_limits<std::size_t>::max();

struct RankedCase {
  CaseId id = 0;
  double score = 0.0;
  int target = 0;

  bool operator==(const RankedCase&) const = default;
};

struct Prediction {
  int predicted_target = 0;
  CaseId best_case_id = 0;
  double best_similarity = 0.0;
  std::vector<RankedCase> ranking;  // descending score, ties by ascending id

  bool operator==(const Prediction&) const = default;
};

enum class CycleStage { Retrieve, Reuse, Revise, Retain };

const char* stage_name(CycleStage stage);

struct CycleEvent {
  CycleStage stage;
  std::string detail;
};

/// Scores every stored case against `query` and sorts them.
std::vector<RankedCase> retrieve(const Case& query, const CaseBase& cb, const SimilarityConfig& cfg,
                                 const NormalizationParams& p);

/// Solution of the highest-scoring case; scores within kScoreTolerance of the
/// best count as equal and go to the lowest id.
int reuse(std::span<const RankedCase> ranked);

/// Retrieve then reuse. The query is not stored.
Prediction predict(const Case& query, const CaseBase& cb, const SimilarityConfig& cfg,
                   const NormalizationParams& p, std::size_t ranking_limit = kFullRanking);

struct RetainResult {
  CaseBase cases;
  NormalizationParams params;
  CaseId id = 0;
};

/// Appends the raw query with its solution and re-fits the extrema on the
/// enlarged base.
RetainResult retain(const Case& query, int solved_target, CaseBase cb);

/// Case memory with a cached normalized copy of every stored case.
/// Const members are safe to call concurrently; `retain` needs exclusive
/// access.
class Reasoner {
 public:
  Reasoner(CaseBase cb, SimilarityConfig cfg);
  Reasoner(CaseBase cb, SimilarityConfig cfg, NormalizationParams params);

  std::vector<RankedCase> retrieve(const Case& query) const;
  Prediction predict(const Case& query, std::size_t ranking_limit = kFullRanking) const;
  CaseId retain(const Case& query, int solved_target);

  struct CycleResult {
    Prediction prediction;
    std::optional<CaseId> retained_id;
    std::vector<CycleEvent> log;
  };

  /// One pass of retrieve, reuse, revise (a logged no-op for binary
  /// solutions) and, when requested, retain.
  CycleResult solve(const Case& query, bool retain_solution,
                    std::size_t ranking_limit = kFullRanking);

  const CaseBase& case_base() const noexcept { return cb_; }
  const NormalizationParams& params() const noexcept { return params_; }
  const SimilarityConfig& config() const noexcept { return cfg_; }

 private:
  void rescale();

  CaseBase cb_;
  SimilarityConfig cfg_;
  NormalizationParams params_;
  Eigen::MatrixXd scaled_;  // one column per stored case
};

/// Predicts every test case in order. With `cfg.incremental_retain()` each
/// case is retained under its predicted target before the next one.
EvaluationReport evaluate(std::span<const Case> test, const CaseBase& cb, const SimilarityConfig& cfg,
                          const NormalizationParams& p);

}  // namespace heartcbr
