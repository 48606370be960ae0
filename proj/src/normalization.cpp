#include "heartcbr/normalization.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace heartcbr {

using nlohmann::json;

NormalizationParams fit_minmax(const CaseBase& train) {
  if (train.empty()) throw std::invalid_argument("fit_minmax: empty training set");
  const auto cases = train.cases();
  return fit_minmax(feature_matrix(cases));
}

Eigen::MatrixXd normalized_matrix(const CaseBase& cb, const NormalizationParams& p) {
  const auto cases = cb.cases();
  return normalize(feature_matrix(cases), p);
}

void write_normalization(std::ostream& out, const NormalizationParams& p) {
  if (p.dimension() != kFeatureCount) throw DataError("normalization must cover 13 attributes");
  json attrs = json::array();
  for (int i = 0; i < kFeatureCount; ++i) {
    attrs.push_back({{"name", std::string(kAttributeNames[i])},
                     {"min", p.min(i)},
                     {"max", p.max(i)},
                     {"range", p.range(i)},
                     {"degenerate", p.degenerate(i)}});
  }
  out << json{{"attributes", attrs}}.dump(2) << '\n';
}

NormalizationParams read_normalization(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed normalization file: ") + e.what());
  }
  const auto attrs = doc.find("attributes");
  if (attrs == doc.end() || !attrs->is_array() || attrs->size() != kFeatureCount) {
    throw DataError("normalization file must list 13 attributes");
  }
  NormalizationParams p;
  p.min.resize(kFeatureCount);
  p.max.resize(kFeatureCount);
  p.range.resize(kFeatureCount);
  try {
    for (int i = 0; i < kFeatureCount; ++i) {
      const auto& a = (*attrs)[static_cast<std::size_t>(i)];
      if (a.at("name").get<std::string>() != kAttributeNames[i]) {
        throw DataError("normalization attribute " + std::to_string(i) + " should be " +
                        std::string(kAttributeNames[i]));
      }
      p.min(i) = a.at("min").get<double>();
      p.max(i) = a.at("max").get<double>();
      p.range(i) = a.at("range").get<double>();
      if (p.range(i) != p.max(i) - p.min(i) || p.range(i) < 0) {
        throw DataError("inconsistent range for " + std::string(kAttributeNames[i]));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed normalization file: ") + e.what());
  }
  return p;
}

void write_normalization_file(const std::filesystem::path& path, const NormalizationParams& p) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_normalization(out, p);
  if (!out.flush()) throw DataError("write failed for " + path.string());
}

NormalizationParams read_normalization_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_normalization(in);
}

std::filesystem::path normalization_sidecar_path(const std::filesystem::path& case_base_path) {
  auto p = case_base_path;
  p.replace_extension(".norm.json");
  return p;
}

}  // namespace heartcbr
