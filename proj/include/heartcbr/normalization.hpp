#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include <Eigen/Core>

#include "heartcbr/case.hpp"
#include "heartcbr/dataset.hpp"

namespace heartcbr {

/// Per-attribute extrema fitted on training data. An attribute whose range
/// is zero is degenerate.
template <typename Scalar>
struct MinMaxParams {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector min;
  Vector max;
  Vector range;

  Eigen::Index dimension() const { return min.size(); }
  bool degenerate(Eigen::Index i) const { return range(i) == Scalar(0); }
};

using NormalizationParams = MinMaxParams<double>;

/// Fits extrema over the columns of `samples` (one column per case).
template <typename Derived>
MinMaxParams<typename Derived::Scalar> fit_minmax(const Eigen::MatrixBase<Derived>& samples) {
  if (samples.cols() == 0) throw std::invalid_argument("fit_minmax: empty training set");
  MinMaxParams<typename Derived::Scalar> p;
  p.min = samples.rowwise().minCoeff();
  p.max = samples.rowwise().maxCoeff();
  p.range = p.max - p.min;
  return p;
}

NormalizationParams fit_minmax(const CaseBase& train);

/// (x - min) / range per attribute. Values outside the fitted extrema are not
/// clamped. A degenerate attribute keeps its offset x - min, which is 0 for
/// every training value.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
normalize(const Eigen::MatrixBase<Derived>& x, const MinMaxParams<typename Derived::Scalar>& p) {
  auto out = (x.colwise() - p.min).eval();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    if (!p.degenerate(i)) out.row(i) /= p.range(i);
  }
  return out;
}

inline FeatureVector normalize(const Case& c, const NormalizationParams& p) {
  return normalize(to_feature_vector(c), p);
}

/// Normalized column-per-case matrix of the whole base.
Eigen::MatrixXd normalized_matrix(const CaseBase& cb, const NormalizationParams& p);

/// Sidecar with one entry per attribute (name, min, max, range, degenerate).
void write_normalization(std::ostream& out, const NormalizationParams& p);
NormalizationParams read_normalization(std::istream& in);
void write_normalization_file(const std::filesystem::path& path, const NormalizationParams& p);
NormalizationParams read_normalization_file(const std::filesystem::path& path);

/// `case_base.csv` -> `case_base.norm.json` in the same directory.
std::filesystem::path normalization_sidecar_path(const std::filesystem::path& case_base_path);

}  // namespace heartcbr
