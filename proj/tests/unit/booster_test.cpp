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
#include <map>
#include <random>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/ebm/booster.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;

namespace {

EbmHyperparams oracle_hp() {
  EbmHyperparams hp;
  hp.outer_bags = 1;
  hp.learning_rate = 1.0;
  hp.max_leaves = 64;
  hp.early_stop_patience = 0;
  hp.max_rounds = 20;
  hp.num_pairs = 0;
  return hp;
}

double weighted_mean(const std::vector<double>& values, const std::vector<double>& weights) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += weights[i] * values[i];
    den += weights[i];
  }
  return num / den;
}

}  // namespace

TEST_CASE("single feature with learning rate 1 reproduces bin means") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(0, 9);
  std::normal_distribution<double> nd(0.0, 2.0);
  FeatureMatrix m(0, 1);
  std::vector<double> y;
  std::map<int, std::pair<double, int>> sums;
  for (int i = 0; i < 300; ++i) {
    const double x = level(rng);
    const double t = nd(rng) + x * x * 0.1;
    m.append_row(std::vector<double>{x});
    y.push_back(t);
    sums[static_cast<int>(x)].first += t;
    ++sums[static_cast<int>(x)].second;
  }
  const EbmModel model = train_ebm(m, y, oracle_hp());
  for (const auto& [x, s] : sums) {
    const std::vector<double> row{static_cast<double>(x)};
    CHECK(predict(model, row) == doctest::Approx(s.first / s.second).epsilon(1e-9));
  }
}

TEST_CASE("shapes are centred on their training populations") {
  const FeatureMatrix m = testing::uniform_matrix(800, 3, 4);
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(3.0 + m(i, 0) - 2.0 * m(i, 1) * m(i, 1));
  EbmHyperparams hp;
  hp.max_rounds = 400;
  hp.outer_bags = 3;
  const EbmModel model = train_ebm(m, y, hp);
  for (const ShapeFunction& s : model.shapes) {
    CHECK(std::abs(weighted_mean(s.contributions, s.populations)) < 1e-9);
  }
  for (const PairShape& p : model.pairs) {
    CHECK(std::abs(weighted_mean(p.contributions, p.populations)) < 1e-9);
  }
  // Centred terms average to zero over the training rows.
  double mean_pred = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mean_pred += predict(model, m.row(i));
    mean_y += y[i];
  }
  mean_pred /= static_cast<double>(m.rows());
  mean_y /= static_cast<double>(m.rows());
  CHECK(model.intercept == doctest::Approx(mean_pred).epsilon(1e-12));
  CHECK(model.intercept == doctest::Approx(mean_y).epsilon(1e-2));
}

TEST_CASE("residual sigma is the spread of the training residuals") {
  const FeatureMatrix m = testing::uniform_matrix(500, 2, 8);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.0, 0.3);
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(m(i, 0) + nd(rng));
  EbmHyperparams hp;
  hp.max_rounds = 300;
  hp.outer_bags = 2;
  const EbmModel model = train_ebm(m, y, hp);
  std::vector<double> r;
  double mean = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    r.push_back(y[i] - predict(model, m.row(i)));
    mean += r.back();
  }
  mean /= static_cast<double>(r.size());
  double var = 0.0;
  for (double v : r) var += (v - mean) * (v - mean);
  CHECK(model.residual_sigma == doctest::Approx(std::sqrt(var / static_cast<double>(r.size()))));
  CHECK(model.residual_sigma > 0.2);
  CHECK(model.residual_sigma < 0.45);
}

TEST_CASE("constant targets and constant features give an intercept-only model") {
  const FeatureMatrix m = testing::uniform_matrix(50, 2, 1);
  const std::vector<double> y(50, 4.5);
  const EbmModel flat = train_ebm(m, y, EbmHyperparams{});
  CHECK(flat.intercept == 4.5);
  CHECK(flat.residual_sigma == 0.0);
  CHECK(flat.pairs.empty());
  for (const ShapeFunction& s : flat.shapes) {
    for (double c : s.contributions) CHECK(c == 0.0);
  }

  FeatureMatrix constant(40, 1);
  std::vector<double> y2;
  for (int i = 0; i < 40; ++i) y2.push_back(i % 2);
  const EbmModel mean_only = train_ebm(constant, y2, EbmHyperparams{});
  CHECK(mean_only.intercept == doctest::Approx(0.5));
}

TEST_CASE("training is deterministic for a fixed seed and sensitive to it") {
  const FeatureMatrix m = testing::uniform_matrix(400, 3, 21);
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(std::sin(3 * m(i, 0)) + m(i, 2));
  EbmHyperparams hp;
  hp.max_rounds = 200;
  hp.outer_bags = 3;
  const std::string a = nlohmann::json(train_ebm(m, y, hp)).dump();
  const std::string b = nlohmann::json(train_ebm(m, y, hp)).dump();
  CHECK(a == b);
  hp.rng_seed = 1234;
  CHECK(nlohmann::json(train_ebm(m, y, hp)).dump() != a);
}

TEST_CASE("early stopping keeps the bag below the round cap") {
  const FeatureMatrix m = testing::uniform_matrix(400, 2, 3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(nd(rng));  // pure noise
  EbmHyperparams hp;
  hp.outer_bags = 2;
  hp.learning_rate = 0.2;
  hp.early_stop_patience = 10;
  hp.num_pairs = 0;
  const EbmModel model = train_ebm(m, y, hp);
  REQUIRE(model.info.main_rounds.size() == 2);
  for (std::size_t r : model.info.main_rounds) CHECK(r < hp.max_rounds);
}

TEST_CASE("the round observer sees every bag and falling training error") {
  const FeatureMatrix m = testing::uniform_matrix(300, 1, 6);
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(5.0 * m(i, 0));
  EbmHyperparams hp;
  hp.outer_bags = 2;
  hp.max_rounds = 50;
  hp.early_stop_patience = 0;
  hp.num_pairs = 0;
  const BinningSchema schema = build_bins(m, hp);
  const BinnedDataset binned = apply_bins(schema, m);
  std::map<std::size_t, std::vector<double>> trace;
  fit_main_effects(binned, y, hp, [&](std::size_t bag, std::size_t, double rmse) {
    trace[bag].push_back(rmse);
  });
  REQUIRE(trace.size() == 2);
  for (const auto& [bag, t] : trace) {
    REQUIRE(t.size() >= 2);
    CHECK(t.back() < t.front());
  }
}

TEST_CASE("fit errors") {
  const FeatureMatrix m = testing::uniform_matrix(10, 2, 1);
  EbmHyperparams hp;
  const BinnedDataset binned = apply_bins(build_bins(m, hp), m);
  const std::vector<double> short_y(9, 0.0);
  CHECK_THROWS_AS(fit_main_effects(binned, short_y, hp), SchemaError);
  std::vector<double> bad_y(10, 0.0);
  bad_y[3] = std::nan("");
  CHECK_THROWS_AS(fit_main_effects(binned, bad_y, hp), DataError);
  const FeatureMatrix one = testing::uniform_matrix(1, 2, 1);
  const std::vector<double> one_y{1.0};
  CHECK_THROWS_AS(fit_main_effects(apply_bins(build_bins(one, hp), one), one_y, hp), DataError);
  hp.learning_rate = 2.0;
  CHECK_THROWS_AS(train_ebm(m, std::vector<double>(10, 1.0), hp), ConfigError);
}

TEST_CASE("missing values get their own contribution") {
  FeatureMatrix m(0, 1);
  std::vector<double> y;
  for (int i = 0; i < 200; ++i) {
    const bool missing = i % 4 == 0;
    m.append_row(std::vector<double>{missing ? std::nan("") : static_cast<double>(i % 3)});
    y.push_back(missing ? 10.0 : 0.0);
  }
  const EbmModel model = train_ebm(m, y, oracle_hp());
  CHECK(model.shapes[0].contributions.back() != 0.0);
  CHECK(predict(model, std::vector<double>{std::nan("")}) == doctest::Approx(10.0));
  CHECK(predict(model, std::vector<double>{1.0}) == doctest::Approx(0.0).epsilon(1e-9));
}
