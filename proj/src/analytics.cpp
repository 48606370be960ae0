#include "heartcbr/analytics.hpp"

#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace heartcbr {

namespace {

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double accuracy(std::span<const int> predictions, std::span<const int> truths) {
  check_aligned(predictions.size(), truths.size(), "accuracy");
  if (predictions.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) hits += predictions[i] == truths[i];
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

Confusion confusion_counts(std::span<const int> predictions, std::span<const int> truths) {
  check_aligned(predictions.size(), truths.size(), "confusion_counts");
  Confusion c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool truth = truths[i] == 1;
    if (pred && truth) ++c.tp;
    else if (!pred && !truth) ++c.tn;
    else if (pred) ++c.fp;
    else ++c.fn;
  }
  return c;
}

std::vector<int> EvaluationReport::merged_predicted_labels() const {
  std::vector<int> labels;
  labels.reserve(train_predictions.size() + test_predictions.size());
  for (const auto& p : train_predictions) labels.push_back(p.predicted_target);
  for (const auto& p : test_predictions) labels.push_back(p.predicted_target);
  return labels;
}

std::vector<int> true_labels(std::span<const Case> cases) {
  std::vector<int> labels;
  labels.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!cases[i].target) throw std::invalid_argument("case " + std::to_string(i) + " has no target");
    labels.push_back(*cases[i].target);
  }
  return labels;
}

StatsTables dataset_stats(std::span<const Case> cases, std::span<const int> labels) {
  check_aligned(cases.size(), labels.size(), "dataset_stats");
  StatsTables s;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const bool positive = labels[i] == 1;
    const bool male = c.sex == 1;
    ++(male ? s.male : s.female);
    ++(positive ? s.positive : s.negative);
    if (positive) {
      ++(male ? s.positive_male : s.positive_female);
      ++s.disease_by_age[c.age];
    }
    auto [it, inserted] = s.max_heart_rate_by_age.try_emplace(c.age, c.thalach);
    if (!inserted) it->second = std::max(it->second, c.thalach);
    if (c.cp < 0 || c.cp > 3) throw std::invalid_argument("cp code outside 0..3");
    auto& row = s.chest_pain[static_cast<std::size_t>(c.cp)];
    ++row.total;
    row.positives += positive;
  }
  if (s.positive > 0) {
    s.positive_male_percent = 100.0 * static_cast<double>(s.positive_male) / s.positive;
    s.positive_female_percent = 100.0 * static_cast<double>(s.positive_female) / s.positive;
  }
  return s;
}

void write_stats_csv(std::ostream& out, const StatsTables& s) {
  out << "table,key,value\n";
  out << "gender_counts,male," << s.male << '\n';
  out << "gender_counts,female," << s.female << '\n';
  out << "disease_counts,positive," << s.positive << '\n';
  out << "disease_counts,negative," << s.negative << '\n';
  out << "positives_by_gender,male," << s.positive_male << '\n';
  out << "positives_by_gender,female," << s.positive_female << '\n';
  out << "positives_by_gender,male_percent," << detail::format_real(s.positive_male_percent) << '\n';
  out << "positives_by_gender,female_percent," << detail::format_real(s.positive_female_percent)
      << '\n';
  for (const auto& [age, n] : s.disease_by_age) out << "disease_by_age," << age << ',' << n << '\n';
  for (const auto& [age, hr] : s.max_heart_rate_by_age) {
    out << "max_heart_rate_by_age," << age << ',' << hr << '\n';
  }
  for (std::size_t cp = 0; cp < s.chest_pain.size(); ++cp) {
    out << "chest_pain_positives," << cp << ',' << s.chest_pain[cp].positives << '\n';
    out << "chest_pain_total," << cp << ',' << s.chest_pain[cp].total << '\n';
  }
}

StatsTables read_stats_csv(std::istream& in) {
  StatsTables s;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::clean_line(line, header);
    if (detail::trim(text).empty()) continue;
    const auto f = detail::split_fields(text);
    if (header) {
      if (f != std::vector<std::string>{"table", "key", "value"}) {
        throw DataError("stats CSV: unexpected header");
      }
      header = false;
      continue;
    }
    auto fail = [&] { return DataError("stats CSV line " + std::to_string(lineno) + ": bad entry"); };
    if (f.size() != 3) throw fail();
    const auto& table = f[0];
    const auto& key = f[1];
    // Resolves a two-valued key such as male/female to its field.
    auto pick = [&](auto& first, const char* first_key, auto& second, const char* second_key)
        -> decltype(first)& {
      if (key == first_key) return first;
      if (key == second_key) return second;
      throw fail();
    };
    if (table == "positives_by_gender" && key.ends_with("_percent")) {
      const auto v = detail::parse_real(f[2]);
      if (!v) throw fail();
      pick(s.positive_male_percent, "male_percent", s.positive_female_percent, "female_percent") = *v;
      continue;
    }
    const auto v = detail::parse_integer(f[2]);
    const auto k = detail::parse_integer(key);
    if (!v) throw fail();
    const auto count = static_cast<std::size_t>(*v);
    if (table == "gender_counts") {
      pick(s.male, "male", s.female, "female") = count;
    } else if (table == "disease_counts") {
      pick(s.positive, "positive", s.negative, "negative") = count;
    } else if (table == "positives_by_gender") {
      pick(s.positive_male, "male", s.positive_female, "female") = count;
    } else if (table == "disease_by_age" && k) {
      s.disease_by_age[static_cast<int>(*k)] = count;
    } else if (table == "max_heart_rate_by_age" && k) {
      s.max_heart_rate_by_age[static_cast<int>(*k)] = static_cast<int>(*v);
    } else if (table == "chest_pain_positives" && k && *k >= 0 && *k < 4) {
      s.chest_pain[static_cast<std::size_t>(*k)].positives = count;
    } else if (table == "chest_pain_total" && k && *k >= 0 && *k < 4) {
      s.chest_pain[static_cast<std::size_t>(*k)].total = count;
    } else {
      throw fail();
    }
  }
  if (header) throw DataError("stats CSV: empty file");
  return s;
}

std::vector<std::string> correlation_labels() {
  std::vector<std::string> labels(kAttributeNames.begin(), kAttributeNames.end());
  labels.emplace_back(kTargetName);
  return labels;
}

Eigen::MatrixXd pearson_correlation(std::span<const Case> cases) {
  const auto labels = true_labels(cases);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(cases.size()), kFeatureCount + 1);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    data.row(row).head(kFeatureCount) = to_feature_vector(cases[i]).transpose();
    data(row, kFeatureCount) = labels[i];
  }
  return pearson_correlation(data);
}

void write_correlation_csv(std::ostream& out, const Eigen::MatrixXd& r,
                           const std::vector<std::string>& labels) {
  if (r.rows() != r.cols() || static_cast<std::size_t>(r.rows()) != labels.size()) {
    throw std::invalid_argument("correlation matrix and labels disagree in size");
  }
  out << "attribute";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      out << ',' << (std::isnan(r(i, j)) ? std::string("undefined") : detail::format_real(r(i, j)));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_correlation_csv(std::istream& in, std::vector<std::string>* labels) {
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    const auto text = detail::clean_line(line, header);
    if (detail::trim(text).empty()) continue;
    auto f = detail::split_fields(text);
    if (header) {
      if (f.size() < 2 || f[0] != "attribute") throw DataError("correlation CSV: bad header");
      names.assign(f.begin() + 1, f.end());
      header = false;
      continue;
    }
    if (f.size() != names.size() + 1 || f[0] != names[rows.size()]) {
      throw DataError("correlation CSV: bad row " + std::to_string(rows.size() + 1));
    }
    std::vector<double> values;
    for (std::size_t j = 1; j < f.size(); ++j) {
      if (f[j] == "undefined") {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
      } else if (const auto v = detail::parse_real(f[j])) {
        values.push_back(*v);
      } else {
        throw DataError("correlation CSV: bad value \"" + f[j] + "\"");
      }
    }
    rows.push_back(std::move(values));
  }
  if (header || rows.size() != names.size()) throw DataError("correlation CSV: incomplete matrix");
  const auto n = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  if (labels) *labels = std::move(names);
  return r;
}

}  // namespace heartcbr
