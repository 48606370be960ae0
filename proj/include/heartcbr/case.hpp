#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace heartcbr {

inline constexpr int kFeatureCount = 13;

// Frozen attribute order. Every weight vector, normalization range and
// similarity term is indexed against it.
enum class Attribute : int {
  Age = 0,
  Sex,
  ChestPain,
  RestingBloodPressure,
  Cholesterol,
  FastingBloodSugar,
  RestingEcg,
  MaxHeartRate,
  ExerciseAngina,
  StDepression,
  StSlope,
  MajorVessels,
  Thalassemia,
};

inline constexpr std::array<std::string_view, kFeatureCount> kAttributeNames = {
    "age",     "sex",   "cp",      "trestbps", "chol",  "fbs", "restecg",
    "thalach", "exang", "oldpeak", "slope",    "ca",    "thal"};

inline constexpr std::string_view kTargetName = "target";

constexpr std::string_view attribute_name(Attribute a) {
  return kAttributeNames[static_cast<std::size_t>(a)];
}

template <typename Scalar>
using FeatureVectorT = Eigen::Matrix<Scalar, kFeatureCount, 1>;
using FeatureVector = FeatureVectorT<double>;

/// One patient record. `target` is empty for an unsolved query.
struct Case {
  int age = 0;
  int sex = 0;       // 0 female, 1 male
  int cp = 0;        // 0 typical angina .. 3 asymptomatic
  int trestbps = 0;  // mmHg
  int chol = 0;      // mg/dl
  int fbs = 0;
  int restecg = 0;
  int thalach = 0;
  int exang = 0;
  double oldpeak = 0.0;
  int slope = 0;
  int ca = 0;
  int thal = 0;
  std::optional<int> target;

  bool operator==(const Case&) const = default;
};

enum class ValidationMode { Strict, Lenient };

struct FieldIssue {
  std::string field;
  std::string value;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues);

  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

struct ValidatedCase {
  Case value;
  std::vector<std::string> warnings;
};

/// Parses and checks a record given as field name -> text. Names go through
/// `canonical_field_name`; unknown names are errors. In lenient
/// mode out-of-domain `ca` / `thal` codes are accepted with one warning each.
/// Throws ValidationError listing every offending field.
ValidatedCase validate_case(const std::map<std::string, std::string>& raw,
                            ValidationMode mode = ValidationMode::Lenient);

/// Domain check for an already-typed Case. Returns lenient-mode warnings.
std::vector<std::string> validate(const Case& c, ValidationMode mode = ValidationMode::Lenient);

/// Maps a header name (any case, surrounding blanks ignored) to its canonical
/// name; accepts `gender` for `sex` and `resttbps` for `trestbps`.
std::optional<std::string> canonical_field_name(std::string_view header);

/// Field value as a double, indexed by the frozen attribute order.
double attribute_value(const Case& c, Attribute a);

template <typename Scalar = double>
FeatureVectorT<Scalar> to_feature_vector(const Case& c) {
  FeatureVectorT<Scalar> v;
  for (int i = 0; i < kFeatureCount; ++i) {
    v(i) = static_cast<Scalar>(attribute_value(c, static_cast<Attribute>(i)));
  }
  return v;
}

/// Column-per-case matrix of raw feature vectors.
Eigen::MatrixXd feature_matrix(std::span<const Case> cases);

}  // namespace heartcbr
