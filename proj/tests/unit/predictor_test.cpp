// Copyright 2026 The ebmtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/predictor/predictor.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;

namespace {

// Features carry a weak hint of the destination; destinations sit at four
// well separated points.
std::vector<TrainingSample> four_way(std::size_t n, std::uint64_t seed,
                                     AgentClass c = AgentClass::kPedestrian) {
  const std::vector<Vec2> dest{{10, 0}, {0, 10}, {-10, 0}, {0, -10}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::normal_distribution<double> nd;
  std::vector<TrainingSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = pick(rng);
    const Vec2 d = dest[m] + Vec2{nd(rng), nd(rng)} * 0.3;
    out.push_back({{d.x * 0.05 + nd(rng), d.y * 0.05 + nd(rng), nd(rng)}, d, c});
  }
  return out;
}

PredictorConfig quick_config(std::size_t modes) {
  PredictorConfig c;
  c.preset.kind = PartitionKind::kKMeans;
  c.preset.k = modes;
  c.preset.top_k = modes;
  c.hp.max_rounds = 150;
  c.hp.outer_bags = 2;
  c.hp.learning_rate = 0.05;
  c.hp.num_pairs = 1;
  c.seed = 3;
  return c;
}

EbmModel constant_model(double value, double sigma) {
  FeatureMatrix m(2, 1, {0.0, 1.0});
  EbmModel model = make_empty_model(build_bins(m, EbmHyperparams{}), value);
  model.residual_sigma = sigma;
  return model;
}

// Two hand-built modes mirrored across the x axis.
MultiModalPredictor mirrored() {
  MultiModalPredictor p;
  ClassModels cm;
  cm.global = {constant_model(5.0, 2.0), constant_model(0.0, 3.0)};
  cm.partition.kind = PartitionKind::kKMeans;
  for (double side : {1.0, -1.0}) {
    Mode m;
    m.id = cm.partition.modes.size();
    m.centroid = {5.0, 3.0 * side};
    m.sigma = {0.5, 0.7};
    m.members = 10;
    cm.partition.modes.push_back(m);
    cm.modes.push_back({constant_model(5.5, 0.1), constant_model(2.5 * side, 0.1)});
  }
  cm.lambda3 = 0.4;
  cm.lambda4 = 0.6;
  p.classes.emplace(AgentClass::kCar, cm);
  return p;
}

}  // namespace

TEST_CASE("gaussian log density") {
  const double expected = -0.5 * std::log(2 * std::numbers::pi) - std::log(2.0) - 0.5 * 0.25;
  CHECK(gaussian_log_density(4.0, 3.0, 2.0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("ranking normalises, sorts and breaks ties by mode id") {
  const std::vector<ModeScore> scores{{0, {1, 0}, -1.0}, {1, {2, 0}, 0.5}, {2, {3, 0}, 0.5},
                                      {3, {4, 0}, -7.0}};
  const Prediction all = rank_modes(scores, 10);
  REQUIRE(all.points.size() == 4);
  double total = 0.0;
  for (const RankedPoint& r : all.points) total += r.probability;
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(all.points[0].mode == 1);
  CHECK(all.points[1].mode == 2);
  CHECK(all.points[0].probability == all.points[1].probability);
  // Softmax oracle for the full list.
  const double z = std::exp(-1.0) + 2 * std::exp(0.5) + std::exp(-7.0);
  CHECK(all.points[2].probability == doctest::Approx(std::exp(-1.0) / z));

  const Prediction top2 = rank_modes(scores, 2);
  REQUIRE(top2.points.size() == 2);
  CHECK(top2.points[0].probability == doctest::Approx(0.5));

  std::vector<ModeScore> shifted = scores;
  for (ModeScore& s : shifted) s.log_score += 1234.5;
  const Prediction moved = rank_modes(shifted, 3);
  const Prediction orig = rank_modes(scores, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(moved.points[i].mode == orig.points[i].mode);
    CHECK(std::abs(moved.points[i].probability - orig.points[i].probability) < 1e-9);
  }
  CHECK_THROWS_AS(rank_modes(scores, 0), ConfigError);
}

TEST_CASE("mode scores follow the two-level likelihood") {
  const MultiModalPredictor p = mirrored();
  const std::vector<double> x{0.5};
  const auto scores = score_modes(p, x, AgentClass::kCar);
  REQUIRE(scores.size() == 2);
  CHECK(std::abs(scores[0].log_score - scores[1].log_score) < 1e-9);
  CHECK(scores[0].point.x == 5.5);
  CHECK(scores[1].point.y == -2.5);

  // Oracle for mode 0.
  const double lx = 0.5 * gaussian_log_density(5.5, 5.0, 0.5) + 0.5 * gaussian_log_density(5.5, 5.0, 2.0);
  const double ly = 0.5 * gaussian_log_density(2.5, 3.0, 0.7) + 0.5 * gaussian_log_density(2.5, 0.0, 3.0);
  CHECK(scores[0].log_score == doctest::Approx(0.4 * lx + 0.6 * ly).epsilon(1e-14));

  const Prediction pred = predict_top_k(p, x, AgentClass::kCar, 5);
  CHECK(pred.points.size() == 2);
  CHECK(pred.points[0].probability == doctest::Approx(0.5));
  CHECK_THROWS_AS(score_modes(p, x, AgentClass::kBus), DataError);
}

TEST_CASE("with lambda2 = 0 the global spread does not matter") {
  MultiModalPredictor p = mirrored();
  p.weights.lambda2 = 0.0;
  p.classes.at(AgentClass::kCar).modes[1].x = constant_model(4.0, 0.1);
  const std::vector<double> x{0.5};
  const auto before = score_modes(p, x, AgentClass::kCar);
  p.classes.at(AgentClass::kCar).global.x.residual_sigma *= 2;
  p.classes.at(AgentClass::kCar).global.y.residual_sigma *= 2;
  const auto after = score_modes(p, x, AgentClass::kCar);
  for (std::size_t m = 0; m < 2; ++m) CHECK(before[m].log_score == after[m].log_score);
}

TEST_CASE("with lambda4 = 0 only the x axis ranks modes") {
  MultiModalPredictor p = mirrored();
  ClassModels& cm = p.classes.at(AgentClass::kCar);
  cm.lambda3 = 1.0;
  cm.lambda4 = 0.0;
  cm.modes[1].x = constant_model(7.0, 0.1);
  const std::vector<double> x{0.5};
  const auto ranking = predict_top_k(p, x, AgentClass::kCar, 2);
  cm.modes[0].y = constant_model(-40.0, 0.1);
  cm.modes[1].y = constant_model(90.0, 0.1);
  const auto again = predict_top_k(p, x, AgentClass::kCar, 2);
  CHECK(ranking.points[0].mode == again.points[0].mode);
  CHECK(ranking.points[0].probability == doctest::Approx(again.points[0].probability));
}

TEST_CASE("zero spreads are floored") {
  MultiModalPredictor p = mirrored();
  p.classes.at(AgentClass::kCar).partition.modes[0].sigma = {0.0, 0.0};
  const auto scores = score_modes(p, std::vector<double>{0.5}, AgentClass::kCar);
  CHECK(std::isfinite(scores[0].log_score));
}

TEST_CASE("training builds global and per-mode models") {
  const auto samples = four_way(600, 1);
  const MultiModalPredictor p = train_multimodal(samples, quick_config(4));
  REQUIRE(p.classes.size() == 1);
  const ClassModels& cm = p.models_for(AgentClass::kPedestrian);
  CHECK(cm.partition.size() == 4);
  CHECK(cm.modes.size() == 4);
  CHECK(cm.samples == 600);
  CHECK(cm.lambda3 + cm.lambda4 == doctest::Approx(1.0));
  CHECK(cm.lambda3 ==
        doctest::Approx(cm.global.x.residual_sigma / (cm.global.x.residual_sigma + cm.global.y.residual_sigma)));
  CHECK(p.top_k == 4);

  const Prediction pred = predict_top_k(p, samples[0].features, AgentClass::kPedestrian, 4);
  REQUIRE(pred.points.size() == 4);
  double total = 0.0;
  double best = 1e9;
  for (const RankedPoint& r : pred.points) {
    total += r.probability;
    best = std::min(best, distance(r.point, samples[0].target));
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
  CHECK(best < 1.5);
}

TEST_CASE("fixed axis weights are used as given") {
  PredictorConfig c = quick_config(2);
  c.weights.axis_rule = ScoringWeights::AxisRule::kFixed;
  c.weights.lambda3 = 0.9;
  c.weights.lambda4 = 0.1;
  const MultiModalPredictor p = train_multimodal(four_way(200, 2), c);
  CHECK(p.models_for(AgentClass::kPedestrian).lambda3 == 0.9);
}

TEST_CASE("one mode reduces to the global models") {
  const auto samples = four_way(300, 4);
  const MultiModalPredictor p = train_multimodal(samples, quick_config(1));
  const ClassModels& cm = p.models_for(AgentClass::kPedestrian);
  REQUIRE(cm.modes.size() == 1);
  CHECK(nlohmann::json(cm.modes[0].x).dump() == nlohmann::json(cm.global.x).dump());
  for (std::size_t i = 0; i < 20; ++i) {
    const Prediction pred = predict_top_k(p, samples[i].features, AgentClass::kPedestrian, 3);
    REQUIRE(pred.points.size() == 1);
    CHECK(pred.points[0].probability == 1.0);
    const Vec2 uni = predict_unimodal(p, samples[i].features, AgentClass::kPedestrian);
    CHECK(pred.points[0].point == uni);
  }
}

TEST_CASE("classes train separately") {
  auto samples = four_way(200, 5);
  const auto cars = four_way(150, 6, AgentClass::kCar);
  samples.insert(samples.end(), cars.begin(), cars.end());
  const MultiModalPredictor p = train_multimodal(samples, quick_config(2));
  CHECK(p.classes.size() == 2);
  CHECK(p.models_for(AgentClass::kCar).samples == 150);
}

TEST_CASE("changing one mode's targets leaves the other modes untouched") {
  auto samples = four_way(400, 7);
  std::vector<Vec2> targets;
  for (const auto& s : samples) targets.push_back(s.target);
  std::map<AgentClass, ModePartition> partitions{{AgentClass::kPedestrian, kmeans_partition(targets, 4, 1)}};
  const PredictorConfig c = quick_config(4);
  const MultiModalPredictor a = train_multimodal(samples, c, &partitions);
  const ModePartition& part = partitions.at(AgentClass::kPedestrian);
  const std::size_t victim = assign_mode(part, samples[0].target);
  for (auto& s : samples) {
    if (assign_mode(part, s.target) == victim) s.target = s.target + Vec2{0.05, -0.05};
  }
  const MultiModalPredictor b = train_multimodal(samples, c, &partitions);
  const auto& ma = a.models_for(AgentClass::kPedestrian).modes;
  const auto& mb = b.models_for(AgentClass::kPedestrian).modes;
  for (std::size_t m = 0; m < ma.size(); ++m) {
    const bool same = nlohmann::json(ma[m].x).dump() == nlohmann::json(mb[m].x).dump();
    CHECK(same == (m != victim));
  }
}

TEST_CASE("persistence is exact and deterministic") {
  const auto samples = four_way(300, 8);
  const MultiModalPredictor p = train_multimodal(samples, quick_config(3));
  const MultiModalPredictor q = train_multimodal(samples, quick_config(3));
  CHECK(serialize_predictor(p) == serialize_predictor(q));

  const auto dir = testing::scratch_dir("predictor");
  save_predictor(p, dir / "p.json");
  const MultiModalPredictor back = load_predictor(dir / "p.json");
  CHECK(serialize_predictor(back) == serialize_predictor(p));
  for (std::size_t i = 0; i < 30; ++i) {
    const auto s1 = score_modes(p, samples[i].features, AgentClass::kPedestrian);
    const auto s2 = score_modes(back, samples[i].features, AgentClass::kPedestrian);
    for (std::size_t m = 0; m < s1.size(); ++m) CHECK(s1[m].log_score == s2[m].log_score);
  }
  std::ofstream(dir / "bad.json") << R"({"format": "other"})";
  CHECK_THROWS_AS(load_predictor(dir / "bad.json"), SchemaError);
}

TEST_CASE("training errors") {
  PredictorConfig c = quick_config(2);
  CHECK_THROWS_AS(train_multimodal({}, c), DataError);
  auto samples = four_way(50, 9);
  samples[3].features.push_back(1.0);
  CHECK_THROWS_AS(train_multimodal(samples, c), SchemaError);
  c.weights.lambda1 = 0.0;
  c.weights.lambda2 = 0.0;
  CHECK_THROWS_AS(train_multimodal(four_way(50, 9), c), ConfigError);
}
