#include "heartcbr/report.hpp"

#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace heartcbr {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json case_prediction_json(const CasePrediction& p) {
  return {{"index", p.index},
          {"true_target", p.true_target},
          {"predicted_target", p.predicted_target},
          {"best_case_id", p.best_case_id},
          {"best_similarity", p.best_similarity}};
}

CasePrediction case_prediction_from(const json& j) {
  return {j.at("index").get<std::size_t>(), j.at("true_target").get<int>(),
          j.at("predicted_target").get<int>(), j.at("best_similarity").get<double>(),
          j.at("best_case_id").get<CaseId>()};
}

template <typename Map>
ordered_json keyed_object(const Map& m) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

}  // namespace

ordered_json stats_to_json(const StatsTables& s) {
  ordered_json chest = ordered_json::array();
  for (std::size_t cp = 0; cp < s.chest_pain.size(); ++cp) {
    chest.push_back({{"cp", cp}, {"positives", s.chest_pain[cp].positives}, {"total", s.chest_pain[cp].total}});
  }
  return {{"gender_counts", {{"male", s.male}, {"female", s.female}}},
          {"disease_counts", {{"positive", s.positive}, {"negative", s.negative}}},
          {"positives_by_gender",
           {{"male", s.positive_male},
            {"female", s.positive_female},
            {"male_percent", s.positive_male_percent},
            {"female_percent", s.positive_female_percent}}},
          {"disease_by_age", keyed_object(s.disease_by_age)},
          {"max_heart_rate_by_age", keyed_object(s.max_heart_rate_by_age)},
          {"chest_pain", chest}};
}

StatsTables stats_from_json(const json& j) {
  StatsTables s;
  s.male = j.at("gender_counts").at("male").get<std::size_t>();
  s.female = j.at("gender_counts").at("female").get<std::size_t>();
  s.positive = j.at("disease_counts").at("positive").get<std::size_t>();
  s.negative = j.at("disease_counts").at("negative").get<std::size_t>();
  const auto& pg = j.at("positives_by_gender");
  s.positive_male = pg.at("male").get<std::size_t>();
  s.positive_female = pg.at("female").get<std::size_t>();
  s.positive_male_percent = pg.at("male_percent").get<double>();
  s.positive_female_percent = pg.at("female_percent").get<double>();
  for (const auto& [k, v] : j.at("disease_by_age").items()) s.disease_by_age[std::stoi(k)] = v.get<std::size_t>();
  for (const auto& [k, v] : j.at("max_heart_rate_by_age").items()) {
    s.max_heart_rate_by_age[std::stoi(k)] = v.get<int>();
  }
  for (const auto& row : j.at("chest_pain")) {
    const auto cp = row.at("cp").get<std::size_t>();
    if (cp >= s.chest_pain.size()) throw DataError("report: cp code out of range");
    s.chest_pain[cp] = {row.at("positives").get<std::size_t>(), row.at("total").get<std::size_t>()};
  }
  return s;
}

ordered_json evaluation_to_json(const EvaluationReport& r, const ReportContext& ctx) {
  ordered_json test = ordered_json::array();
  for (const auto& p : r.test_predictions) test.push_back(case_prediction_json(p));
  ordered_json train = ordered_json::array();
  for (const auto& p : r.train_predictions) train.push_back(case_prediction_json(p));
  return {{"format", "heartcbr-evaluation-v1"},
          {"train_fraction", ctx.train_fraction},
          {"weights", ctx.weights},
          {"validation_warnings", ctx.validation_warnings},
          {"incremental_retain", r.incremental_retain},
          {"revise", "skipped"},
          {"train_count", r.train_count},
          {"test_count", r.test_count},
          {"test_correct", r.test_correct},
          {"train_correct", r.train_correct},
          {"test_accuracy", r.test_accuracy},
          {"merged_accuracy", r.merged_accuracy},
          {"confusion", {{"tp", r.confusion.tp}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}}},
          {"stats_predicted", stats_to_json(r.stats)},
          {"test_predictions", test},
          {"train_predictions", train}};
}

EvaluationReport evaluation_from_json(const json& j) {
  EvaluationReport r;
  try {
    r.incremental_retain = j.at("incremental_retain").get<bool>();
    r.train_count = j.at("train_count").get<std::size_t>();
    r.test_count = j.at("test_count").get<std::size_t>();
    r.test_correct = j.at("test_correct").get<std::size_t>();
    r.train_correct = j.at("train_correct").get<std::size_t>();
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.merged_accuracy = j.at("merged_accuracy").get<double>();
    const auto& c = j.at("confusion");
    r.confusion = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                   c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
    r.stats = stats_from_json(j.at("stats_predicted"));
    for (const auto& p : j.at("test_predictions")) r.test_predictions.push_back(case_prediction_from(p));
    for (const auto& p : j.at("train_predictions")) r.train_predictions.push_back(case_prediction_from(p));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed evaluation report: ") + e.what());
  }
  return r;
}

void write_evaluation_report(std::ostream& out, const EvaluationReport& report, const ReportContext& ctx) {
  out << evaluation_to_json(report, ctx).dump(2) << '\n';
}

EvaluationReport read_evaluation_report(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed evaluation report: ") + e.what());
  }
  return evaluation_from_json(j);
}

void write_predictions_csv(std::ostream& out, std::span<const CasePrediction> rows) {
  out << "index,true_target,predicted_target,best_case_id,best_similarity\n";
  for (const auto& p : rows) {
    out << p.index << ',' << p.true_target << ',' << p.predicted_target << ',' << p.best_case_id << ','
        << detail::format_real(p.best_similarity) << '\n';
  }
}

std::vector<CasePrediction> read_predictions_csv(std::istream& in) {
  std::vector<CasePrediction> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    const auto text = detail::clean_line(line, header);
    if (detail::trim(text).empty()) continue;
    const auto f = detail::split_fields(text);
    if (header) {
      if (f != std::vector<std::string>{"index", "true_target", "predicted_target", "best_case_id",
                                        "best_similarity"}) {
        throw DataError("predictions CSV: bad header");
      }
      header = false;
      continue;
    }
    auto fail = [&] { return DataError("predictions CSV: bad row " + std::to_string(rows.size() + 1)); };
    if (f.size() != 5) throw fail();
    const auto index = detail::parse_integer(f[0]);
    const auto truth = detail::parse_integer(f[1]);
    const auto pred = detail::parse_integer(f[2]);
    const auto id = detail::parse_integer(f[3]);
    const auto sim = detail::parse_real(f[4]);
    if (!index || !truth || !pred || !id || !sim || *index < 0 || *id < 0) throw fail();
    rows.push_back({static_cast<std::size_t>(*index), static_cast<int>(*truth), static_cast<int>(*pred), *sim,
                    static_cast<CaseId>(*id)});
  }
  if (header) throw DataError("predictions CSV: empty file");
  return rows;
}

ordered_json prediction_to_json(const Prediction& p) {
  ordered_json ranking = ordered_json::array();
  for (const auto& r : p.ranking) {
    ranking.push_back({{"case_id", r.id}, {"score", r.score}, {"target", r.target}});
  }
  return {{"predicted_target", p.predicted_target},
          {"best_case_id", p.best_case_id},
          {"best_similarity", p.best_similarity},
          {"ranking", ranking}};
}

ordered_json cycle_to_json(const Reasoner::CycleResult& r) {
  ordered_json out = prediction_to_json(r.prediction);
  out["retained_case_id"] = r.retained_id ? ordered_json(*r.retained_id) : ordered_json(nullptr);
  ordered_json log = ordered_json::array();
  for (const auto& e : r.log) log.push_back({{"stage", stage_name(e.stage)}, {"detail", e.detail}});
  out["cycle"] = log;
  return out;
}

}  // namespace heartcbr
