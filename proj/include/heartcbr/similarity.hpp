#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "heartcbr/case.hpp"
#include "heartcbr/normalization.hpp"

namespace heartcbr {

enum class TieBreak { LowestCaseId };

/// Scores closer than this are treated as equal. Global scores lie in [0, 1],
/// and rounding can leave exactly tied cases a few ulps apart.
inline constexpr double kScoreTolerance = 1e-12;

/// Attribute weights for the global similarity. Weights are finite and
/// non-negative with a positive sum; the global score divides by that sum,
/// so weights need not add up to one.
class SimilarityConfig {
 public:
  SimilarityConfig() : SimilarityConfig(Eigen::VectorXd::Ones(kFeatureCount)) {}

  explicit SimilarityConfig(Eigen::VectorXd weights, bool incremental_retain = false)
      : weights_(std::move(weights)), incremental_retain_(incremental_retain) {
    if (weights_.size() == 0) throw std::invalid_argument("similarity weights are empty");
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_(i)) || weights_(i) < 0.0) {
        throw std::invalid_argument("similarity weight " + std::to_string(i) +
                                    " must be finite and non-negative");
      }
    }
    weight_sum_ = weights_.sum();
    if (!(weight_sum_ > 0.0)) throw std::invalid_argument("similarity weights sum to zero");
  }

  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double weight_sum() const noexcept { return weight_sum_; }
  TieBreak tie_break() const noexcept { return TieBreak::LowestCaseId; }
  bool incremental_retain() const noexcept { return incremental_retain_; }
  void set_incremental_retain(bool on) noexcept { incremental_retain_ = on; }

 private:
  Eigen::VectorXd weights_;
  double weight_sum_ = 0.0;
  bool incremental_retain_ = false;
};

/// Range-normalized local similarity max(0, 1 - |a - b| / range).
/// A degenerate attribute falls back to exact match.
template <typename Scalar>
Scalar local_similarity(Scalar a, Scalar b, Scalar range, bool degenerate) {
  using std::abs;
  if (degenerate) return a == b ? Scalar(1) : Scalar(0);
  const Scalar s = Scalar(1) - abs(a - b) / range;
  return s > Scalar(0) ? s : Scalar(0);
}

/// Weighted mean of local similarities between two normalized vectors. After
/// min-max scaling every non-degenerate attribute spans a range of exactly 1.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar global_similarity(const Eigen::MatrixBase<DerivedA>& query,
                                            const Eigen::MatrixBase<DerivedB>& stored,
                                            const SimilarityConfig& cfg,
                                            const MinMaxParams<double>& p) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index d = query.size();
  if (stored.size() != d || cfg.weights().size() != d || p.dimension() != d) {
    throw std::invalid_argument("global_similarity: dimension mismatch");
  }
  // Both sums run in the same order so identical vectors score exactly 1.
  Scalar weighted = 0;
  Scalar total = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const Scalar w = static_cast<Scalar>(cfg.weights()(i));
    if (w == Scalar(0)) continue;
    weighted += w * local_similarity<Scalar>(query(i), stored(i), Scalar(1), p.degenerate(i));
    total += w;
  }
  return weighted / total;
}

/// Score of `query` against every column of `stored`.
template <typename DerivedQ, typename DerivedC>
Eigen::Matrix<typename DerivedQ::Scalar, Eigen::Dynamic, 1> similarity_scores(
    const Eigen::MatrixBase<DerivedQ>& query, const Eigen::MatrixBase<DerivedC>& stored,
    const SimilarityConfig& cfg, const MinMaxParams<double>& p) {
  Eigen::Matrix<typename DerivedQ::Scalar, Eigen::Dynamic, 1> scores(stored.cols());
  for (Eigen::Index j = 0; j < stored.cols(); ++j) {
    scores(j) = global_similarity(query, stored.col(j), cfg, p);
  }
  return scores;
}

/// Indices sorted by descending score. Scores within kScoreTolerance of the
/// first member of their run count as equal and are ordered by ascending
/// index.
template <typename Derived>
std::vector<Eigen::Index> rank_descending(const Eigen::MatrixBase<Derived>& scores) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores(a) > scores(b); });
  for (auto first = order.begin(); first != order.end();) {
    const auto lead = scores(*first);
    auto last = std::find_if(first, order.end(),
                             [&](Eigen::Index j) { return lead - scores(j) > kScoreTolerance; });
    std::sort(first, last);
    first = last;
  }
  return order;
}

}  // namespace heartcbr
