#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heartcbr/case.hpp"
#include "heartcbr/dataset.hpp"

namespace heartcbr {

/// Fraction of positions where prediction and truth agree.
double accuracy(std::span<const int> predictions, std::span<const int> truths);

/// Counts with 1 as the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  double accuracy() const { return total() ? static_cast<double>(tp + tn) / total() : 0.0; }
  bool operator==(const Confusion&) const = default;
};

Confusion confusion_counts(std::span<const int> predictions, std::span<const int> truths);

struct ChestPainRow {
  std::size_t positives = 0;
  std::size_t total = 0;
  bool operator==(const ChestPainRow&) const = default;
};

/// Descriptive tables over a labelled dataset. Percentages are taken among
/// label-positive cases and are 0 when there are none.
struct StatsTables {
  std::size_t male = 0;
  std::size_t female = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t positive_male = 0;
  std::size_t positive_female = 0;
  double positive_male_percent = 0.0;
  double positive_female_percent = 0.0;
  std::map<int, std::size_t> disease_by_age;   // age -> positives
  std::map<int, int> max_heart_rate_by_age;    // age -> max thalach
  std::array<ChestPainRow, 4> chest_pain{};    // indexed by cp code

  bool operator==(const StatsTables&) const = default;
};

StatsTables dataset_stats(std::span<const Case> cases, std::span<const int> labels);

/// Ground-truth labels; throws if any case lacks a target.
std::vector<int> true_labels(std::span<const Case> cases);

/// Outcome for one evaluated case.
struct CasePrediction {
  std::size_t index = 0;  // position within its split
  int true_target = 0;
  int predicted_target = 0;
  double best_similarity = 0.0;
  CaseId best_case_id = 0;

  bool operator==(const CasePrediction&) const = default;
};

/// Test-set scoring plus the merged train+test view. Training cases are
/// scored by retrieving each one against the frozen case base, which returns
/// the case itself unless an earlier identical case carries another label.
struct EvaluationReport {
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  bool incremental_retain = false;
  std::vector<CasePrediction> test_predictions;
  std::vector<CasePrediction> train_predictions;
  std::size_t test_correct = 0;
  std::size_t train_correct = 0;
  double test_accuracy = 0.0;
  double merged_accuracy = 0.0;
  Confusion confusion;  // over the test set
  StatsTables stats;    // predicted labels over train then test

  /// Predicted labels in dataset order (train cases first).
  std::vector<int> merged_predicted_labels() const;

  bool operator==(const EvaluationReport&) const = default;
};

/// Long-format CSV (table,key,value) and its reader.
void write_stats_csv(std::ostream& out, const StatsTables& stats);
StatsTables read_stats_csv(std::istream& in);

/// Product-moment correlation between the columns of `data` (rows are
/// observations). Entries involving a constant column are NaN, which the CSV
/// writer renders as "undefined". The result is exactly symmetric with a unit
/// diagonal on every non-constant column.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pearson_correlation(
    const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (data.rows() < 2) throw std::invalid_argument("pearson_correlation needs at least 2 rows");
  const Eigen::Index p = data.cols();

  const Matrix centered = data.rowwise() - data.colwise().mean();
  const Matrix cross = centered.transpose() * centered;
  Eigen::Array<bool, Eigen::Dynamic, 1> constant(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    constant(j) = data.col(j).minCoeff() == data.col(j).maxCoeff();
  }

  const Scalar undefined = std::numeric_limits<Scalar>::quiet_NaN();
  Matrix r(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      Scalar value;
      if (constant(i) || constant(j)) {
        value = undefined;
      } else if (i == j) {
        value = Scalar(1);
      } else {
        using std::sqrt;
        value = cross(i, j) / (sqrt(cross(i, i)) * sqrt(cross(j, j)));
        value = std::clamp(value, Scalar(-1), Scalar(1));
      }
      r(i, j) = value;
      r(j, i) = value;
    }
  }
  return r;
}

/// 14 x 14 matrix over the 13 attributes plus target.
Eigen::MatrixXd pearson_correlation(std::span<const Case> cases);

/// Column labels of the case correlation matrix (attributes, then target).
std::vector<std::string> correlation_labels();

void write_correlation_csv(std::ostream& out, const Eigen::MatrixXd& r,
                           const std::vector<std::string>& labels);
Eigen::MatrixXd read_correlation_csv(std::istream& in, std::vector<std::string>* labels = nullptr);

}  // namespace heartcbr
