#include <doctest.h>

#include "heartcbr/engine.hpp"
#include "support.hpp"

using namespace heartcbr;

namespace {

CaseBase random_base(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  CaseBase cb;
  for (std::size_t i = 0; i < n; ++i) cb.add(testing::random_case(gen));
  return cb;
}

Case unsolved(Case c) {
  c.target.reset();
  return c;
}

}  // namespace

TEST_CASE("reuse") {
  const std::vector<RankedCase> clear{{7, 0.99, 1}, {2, 0.95, 0}};
  CHECK(reuse(clear) == 1);
  const std::vector<RankedCase> tie{{2, 0.9, 0}, {7, 0.9, 1}};
  CHECK(reuse(tie) == 0);
  const std::vector<RankedCase> tie_reversed{{7, 0.9, 1}, {2, 0.9, 0}};
  CHECK(reuse(tie_reversed) == 0);
  const std::vector<RankedCase> single{{4, 0.1, 0}};
  CHECK(reuse(single) == 0);
  const std::vector<RankedCase> rounding{{7, 0.9, 1}, {2, 0.9 - 1e-15, 0}};
  CHECK(reuse(rounding) == 0);
  CHECK_THROWS_AS(reuse(std::vector<RankedCase>{}), std::invalid_argument);
}

TEST_CASE("retrieve") {
  const auto cb = random_base(12, 21);
  const auto p = fit_minmax(cb);
  const SimilarityConfig cfg;

  const auto ranked = retrieve(unsolved(cb[5].value), cb, cfg, p);
  REQUIRE(ranked.size() == 12);
  CHECK(ranked.front().score == 1.0);
  CHECK(ranked.front().id <= 5);  // an earlier identical case would also score 1
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    CHECK(ranked[i - 1].score >= ranked[i].score);
    if (ranked[i - 1].score == ranked[i].score) CHECK(ranked[i - 1].id < ranked[i].id);
  }

  CaseBase one;
  one.add(testing::sample_case());
  CHECK(retrieve(unsolved(testing::sample_case()), one, cfg, fit_minmax(one)).size() == 1);
  CHECK_THROWS_AS(retrieve(testing::sample_case(), CaseBase{}, cfg, p), std::invalid_argument);
}

TEST_CASE("predict") {
  const auto cb = random_base(15, 3);
  const auto p = fit_minmax(cb);
  const SimilarityConfig cfg;
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const auto pred = predict(unsolved(cb[k].value), cb, cfg, p);
    CHECK(pred.best_similarity == 1.0);
    const auto& best = cb[static_cast<std::size_t>(pred.best_case_id)].value;
    CHECK(to_feature_vector(best) == to_feature_vector(cb[k].value));
    CHECK(pred.predicted_target == *best.target);
  }

  const auto limited = predict(unsolved(cb[0].value), cb, cfg, p, 3);
  CHECK(limited.ranking.size() == 3);
  CHECK(limited.ranking.front().id == limited.best_case_id);

  CaseBase one;
  auto c = testing::sample_case();
  one.add(c);
  std::mt19937_64 gen(8);
  for (int k = 0; k < 20; ++k) {
    CHECK(predict(unsolved(testing::random_case(gen)), one, cfg, fit_minmax(one)).predicted_target == 1);
  }
}

TEST_CASE("four-case example against a hand oracle") {
  // Only chol and age are weighted.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(kFeatureCount);
  w(static_cast<int>(Attribute::Age)) = 1;
  w(static_cast<int>(Attribute::Cholesterol)) = 3;
  const SimilarityConfig cfg(w);
  CaseBase cb;
  auto base = testing::sample_case();
  const int ages[] = {40, 50, 60, 50};
  const int chols[] = {200, 300, 200, 240};
  const int targets[] = {0, 1, 1, 0};
  for (int k = 0; k < 4; ++k) {
    base.age = ages[k];
    base.chol = chols[k];
    base.target = targets[k];
    cb.add(base);
  }
  auto q = unsolved(base);
  q.age = 55;
  q.chol = 210;
  // age range 20, chol range 100
  // case0: 1 - (1*15/20 + 3*10/100)/4 = 1 - 1.05/4
  // case1: 1 - (1*5/20 + 3*90/100)/4 = 1 - 2.95/4
  // case2: 1 - (1*5/20 + 3*10/100)/4 = 1 - 0.55/4
  // case3: 1 - (1*5/20 + 3*30/100)/4 = 1 - 1.15/4
  const auto pred = predict(q, cb, cfg, fit_minmax(cb));
  CHECK(pred.best_case_id == 2);
  CHECK(pred.predicted_target == 1);
  CHECK(pred.best_similarity == doctest::Approx(1 - 0.55 / 4).epsilon(1e-14));
  REQUIRE(pred.ranking.size() == 4);
  CHECK(pred.ranking[1].id == 0);
  CHECK(pred.ranking[2].id == 3);
  CHECK(pred.ranking[3].id == 1);
}

TEST_CASE("property: predict matches the weighted-L1 oracle") {
  std::mt19937_64 gen(31337);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto toy = testing::random_toy(gen);
    const auto answer = testing::oracle_nearest(toy);
    if (answer.ambiguous) continue;
    const SimilarityConfig cfg(toy.weights);
    const auto pred = predict(toy.query, toy.base, cfg, fit_minmax(toy.base));
    CHECK(pred.best_case_id == answer.id);
    CHECK(pred.predicted_target == answer.target);
    CHECK(std::abs(pred.best_similarity - (1.0 - answer.distance)) <= 1e-12);
    ++checked;
  }
  CHECK(checked >= 250);
}

TEST_CASE("retain") {
  auto cb = random_base(6, 44);
  const SimilarityConfig cfg;
  auto q = unsolved(testing::sample_case());
  q.chol = 900;
  const auto before = fit_minmax(cb);
  REQUIRE(before.max(static_cast<int>(Attribute::Cholesterol)) < 900);

  const auto r = retain(q, 0, cb);
  CHECK(r.cases.size() == cb.size() + 1);
  CHECK(r.id == cb.next_id());
  CHECK(r.params.max(static_cast<int>(Attribute::Cholesterol)) == 900);
  CHECK(r.params.min == fit_minmax(r.cases).min);

  const auto again = predict(q, r.cases, cfg, r.params);
  CHECK(again.predicted_target == 0);
  CHECK(again.best_similarity == 1.0);
  CHECK(again.best_case_id == r.id);

  CHECK_THROWS_AS(retain(q, 2, cb), std::invalid_argument);
  auto bad = q;
  bad.sex = 3;
  CHECK_THROWS_AS(retain(bad, 1, cb), ValidationError);
}

TEST_CASE("Reasoner keeps its normalized cache in step") {
  const auto cb = random_base(10, 12);
  Reasoner r(cb, SimilarityConfig{});
  std::mt19937_64 gen(6);
  for (int k = 0; k < 5; ++k) {
    auto q = unsolved(testing::random_case(gen));
    q.chol = 700 + 10 * k;
    const auto free_pred = predict(q, r.case_base(), r.config(), r.params());
    CHECK(r.predict(q) == free_pred);
    const auto id = r.retain(q, k % 2);
    CHECK(r.case_base().size() == 11 + static_cast<std::size_t>(k));
    CHECK(r.params().max(static_cast<int>(Attribute::Cholesterol)) == q.chol);
    const auto hit = r.predict(q);
    CHECK(hit.best_case_id == id);
    CHECK(hit.predicted_target == k % 2);
  }
  CHECK_THROWS_AS(Reasoner(cb, SimilarityConfig(Eigen::VectorXd::Ones(12))), std::invalid_argument);
  NormalizationParams wrong;
  wrong.min = wrong.max = wrong.range = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(Reasoner(cb, SimilarityConfig{}, wrong), std::invalid_argument);
}

TEST_CASE("solve walks the cycle") {
  const auto cb = random_base(8, 2);
  Reasoner r(cb, SimilarityConfig{});
  const auto q = unsolved(cb[3].value);
  const auto frozen = r.solve(q, false, 2);
  CHECK_FALSE(frozen.retained_id.has_value());
  REQUIRE(frozen.log.size() == 3);
  CHECK(frozen.log[0].stage == CycleStage::Retrieve);
  CHECK(frozen.log[1].stage == CycleStage::Reuse);
  CHECK(frozen.log[2].stage == CycleStage::Revise);
  CHECK(frozen.prediction.ranking.size() == 2);
  CHECK(r.case_base().size() == 8);

  const auto kept = r.solve(q, true);
  REQUIRE(kept.retained_id.has_value());
  CHECK(kept.log.back().stage == CycleStage::Retain);
  CHECK(r.case_base().size() == 9);
  CHECK(std::string(stage_name(CycleStage::Revise)) == "revise");
}

TEST_CASE("evaluate") {
  std::mt19937_64 gen(19);
  std::vector<Case> all;
  for (int k = 0; k < 30; ++k) all.push_back(testing::random_case(gen));
  const auto split = split_sequential(all, 0.6);
  const auto p = fit_minmax(split.train);

  const auto frozen = evaluate(split.test, split.train, SimilarityConfig{}, p);
  CHECK(frozen.train_count == 18);
  CHECK(frozen.test_count == 12);
  CHECK(frozen.test_predictions.size() == 12);
  CHECK(frozen.train_predictions.size() == 18);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const auto pred = predict(unsolved(split.test[i]), split.train, SimilarityConfig{}, p);
    CHECK(frozen.test_predictions[i].predicted_target == pred.predicted_target);
    CHECK(frozen.test_predictions[i].best_case_id == pred.best_case_id);
    correct += pred.predicted_target == *split.test[i].target;
  }
  CHECK(frozen.test_correct == correct);
  CHECK(frozen.test_accuracy == static_cast<double>(correct) / 12.0);
  CHECK(frozen.train_correct == 18);  // random cases are distinct
  CHECK(frozen.merged_accuracy == static_cast<double>(18 + correct) / 30.0);
  CHECK(frozen.confusion.total() == 12);
  CHECK(frozen.stats.positive + frozen.stats.negative == 30);

  SimilarityConfig incremental;
  incremental.set_incremental_retain(true);
  const auto grown = evaluate(split.test, split.train, incremental, p);
  CHECK(grown.incremental_retain);
  Reasoner oracle(split.train, SimilarityConfig{});
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const auto pred = oracle.predict(split.test[i]);
    CHECK(grown.test_predictions[i].predicted_target == pred.predicted_target);
    oracle.retain(split.test[i], pred.predicted_target);
  }

  CHECK_THROWS_AS(evaluate({}, split.train, SimilarityConfig{}, p), std::invalid_argument);
  auto no_target = split.test;
  no_target[2].target.reset();
  CHECK_THROWS_AS(evaluate(no_target, split.train, SimilarityConfig{}, p), std::invalid_argument);
}

TEST_CASE("evaluate scores perfect predictions as 1") {
  std::mt19937_64 gen(23);
  std::vector<Case> train;
  for (int k = 0; k < 10; ++k) train.push_back(testing::random_case(gen));
  CaseBase cb;
  for (const auto& c : train) cb.add(c);
  const std::vector<Case> test(train.begin(), train.begin() + 4);
  const auto r = evaluate(test, cb, SimilarityConfig{}, fit_minmax(cb));
  CHECK(r.test_accuracy == 1.0);
  CHECK(r.merged_accuracy == 1.0);
}
