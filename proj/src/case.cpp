#include "heartcbr/case.hpp"

#include <cmath>
#include <limits>

#include "text_util.hpp"

namespace heartcbr {

namespace {

struct IntDomain {
  int lo;
  int hi;
  bool lenient_ok;  // out-of-domain codes tolerated in lenient mode
};

std::optional<IntDomain> categorical_domain(Attribute a) {
  switch (a) {
    case Attribute::Sex: return IntDomain{0, 1, false};
    case Attribute::ChestPain: return IntDomain{0, 3, false};
    case Attribute::FastingBloodSugar: return IntDomain{0, 1, false};
    case Attribute::RestingEcg: return IntDomain{0, 2, false};
    case Attribute::ExerciseAngina: return IntDomain{0, 1, false};
    case Attribute::StSlope: return IntDomain{0, 2, false};
    case Attribute::MajorVessels: return IntDomain{0, 3, true};
    case Attribute::Thalassemia: return IntDomain{1, 3, true};
    default: return std::nullopt;
  }
}

// Integer members in attribute order; oldpeak is the one real-valued field.
constexpr std::array<int Case::*, kFeatureCount> kIntMembers = {
    &Case::age,     &Case::sex,   &Case::cp, &Case::trestbps, &Case::chol, &Case::fbs, &Case::restecg,
    &Case::thalach, &Case::exang, nullptr,   &Case::slope,    &Case::ca,   &Case::thal};

int& int_field(Case& c, Attribute a) { return c.*kIntMembers[static_cast<std::size_t>(a)]; }
int int_value(const Case& c, Attribute a) { return c.*kIntMembers[static_cast<std::size_t>(a)]; }

std::string describe(const std::vector<FieldIssue>& issues) {
  std::string msg = "invalid case:";
  for (const auto& issue : issues) {
    msg += " " + issue.field + "=\"" + issue.value + "\" (" + issue.message + ");";
  }
  if (!issues.empty()) msg.pop_back();
  return msg;
}

// Shared domain check; `text` supplies the original token for messages.
template <typename TextOf>
void check_domains(const Case& c, ValidationMode mode, TextOf text,
                   std::vector<FieldIssue>& errors, std::vector<std::string>& warnings) {
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto a = static_cast<Attribute>(i);
    const auto dom = categorical_domain(a);
    if (!dom) continue;
    const int v = int_value(c, a);
    if (v >= dom->lo && v <= dom->hi) continue;
    const std::string name(attribute_name(a));
    const std::string range = "{" + std::to_string(dom->lo) + ".." + std::to_string(dom->hi) + "}";
    if (mode == ValidationMode::Lenient && dom->lenient_ok) {
      warnings.push_back(name + "=" + text(a) + " outside documented domain " + range);
    } else {
      errors.push_back({name, text(a), "outside domain " + range});
    }
  }
  if (!std::isfinite(c.oldpeak)) {
    errors.push_back({"oldpeak", text(Attribute::StDepression), "not finite"});
  } else if (c.oldpeak < 0.0) {
    errors.push_back({"oldpeak", text(Attribute::StDepression), "negative"});
  }
  if (c.target && *c.target != 0 && *c.target != 1) {
    errors.push_back({"target", std::to_string(*c.target), "outside domain {0..1}"});
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

std::optional<std::string> canonical_field_name(std::string_view header) {
  const std::string name = detail::to_lower(detail::trim(header));
  if (name == "gender") return std::string("sex");
  if (name == "resttbps") return std::string("trestbps");
  for (auto known : kAttributeNames) {
    if (name == known) return name;
  }
  if (name == kTargetName) return name;
  return std::nullopt;
}

double attribute_value(const Case& c, Attribute a) {
  if (a == Attribute::StDepression) return c.oldpeak;
  return static_cast<double>(int_value(c, a));
}

std::vector<std::string> validate(const Case& c, ValidationMode mode) {
  std::vector<FieldIssue> errors;
  std::vector<std::string> warnings;
  check_domains(
      c, mode,
      [&c](Attribute a) {
        return a == Attribute::StDepression ? detail::format_decimal(c.oldpeak)
                                            : std::to_string(int_value(c, a));
      },
      errors, warnings);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return warnings;
}

ValidatedCase validate_case(const std::map<std::string, std::string>& input, ValidationMode mode) {
  std::vector<FieldIssue> errors;
  std::map<std::string, std::string> raw;
  for (const auto& [key, value] : input) {
    const auto name = canonical_field_name(key);
    if (!name) {
      errors.push_back({key, value, "unknown field"});
    } else if (!raw.emplace(*name, value).second) {
      errors.push_back({*name, value, "duplicate field"});
    }
  }
  Case c;
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto a = static_cast<Attribute>(i);
    const std::string name(attribute_name(a));
    const auto it = raw.find(name);
    if (it == raw.end()) {
      errors.push_back({name, "", "missing field"});
      continue;
    }
    if (a == Attribute::StDepression) {
      const auto v = detail::parse_real(it->second);
      if (!v) {
        errors.push_back({name, it->second, "not a finite number"});
      } else {
        c.oldpeak = *v;
      }
      continue;
    }
    const auto v = detail::parse_integer(it->second);
    if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
      errors.push_back({name, it->second, "not an integer"});
    } else {
      int_field(c, a) = static_cast<int>(*v);
    }
  }
  if (const auto it = raw.find(std::string(kTargetName)); it != raw.end()) {
    const auto v = detail::parse_integer(it->second);
    if (!v) {
      errors.push_back({"target", it->second, "not an integer"});
    } else if (*v != 0 && *v != 1) {
      errors.push_back({"target", it->second, "outside domain {0..1}"});
    } else {
      c.target = static_cast<int>(*v);
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  std::vector<std::string> warnings;
  check_domains(
      c, mode,
      [&raw](Attribute a) { return std::string(detail::trim(raw.at(std::string(attribute_name(a))))); },
      errors, warnings);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return {c, std::move(warnings)};
}

Eigen::MatrixXd feature_matrix(std::span<const Case> cases) {
  Eigen::MatrixXd m(kFeatureCount, static_cast<Eigen::Index>(cases.size()));
  for (std::size_t j = 0; j < cases.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = to_feature_vector(cases[j]);
  }
  return m;
}

}  // namespace heartcbr
