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
#include <cstring>
#include <fstream>
#include <limits>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/ebm/booster.hpp"
#include "ebmtraj/ebm/model.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;

namespace {

EbmModel small_model() {
  FeatureMatrix m = testing::uniform_matrix(400, 3, 12);
  m(5, 1) = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    y.push_back(m(i, 0) * m(i, 2) + std::cos(m(i, 0)) + (std::isnan(m(i, 1)) ? 0.0 : m(i, 1)));
  }
  EbmHyperparams hp;
  hp.max_rounds = 150;
  hp.outer_bags = 2;
  hp.num_pairs = 2;
  const std::vector<std::string> names{"speed", "pos_x", "pos_y"};
  return train_ebm(m, y, hp, names);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("JSON round trip preserves predictions bit for bit") {
  const EbmModel model = small_model();
  REQUIRE_FALSE(model.pairs.empty());
  const EbmModel back = nlohmann::json::parse(nlohmann::json(model).dump()).get<EbmModel>();
  CHECK(back.binning == model.binning);
  CHECK(back.binning.features[0].name == "speed");
  CHECK(bit_equal(back.residual_sigma, model.residual_sigma));
  CHECK(back.info.main_rounds == model.info.main_rounds);
  CHECK(back.hyperparams.max_rounds == 150);
  const FeatureMatrix probe = testing::uniform_matrix(500, 3, 99, -2.0, 2.0);
  for (std::size_t i = 0; i < probe.rows(); ++i) {
    CHECK(bit_equal(predict(back, probe.row(i)), predict(model, probe.row(i))));
  }
  const std::vector<double> with_nan{0.1, std::nan(""), 0.3};
  CHECK(bit_equal(predict(back, with_nan), predict(model, with_nan)));
}

TEST_CASE("save and load through a file") {
  const EbmModel model = small_model();
  const auto dir = testing::scratch_dir("model_io");
  save_model(model, dir / "m.json");
  const EbmModel back = load_model(dir / "m.json");
  CHECK(nlohmann::json(back).dump() == nlohmann::json(model).dump());
  CHECK_THROWS_AS(load_model(dir / "absent.json"), Error);
}

TEST_CASE("predict checks the input width") {
  const EbmModel model = small_model();
  CHECK_THROWS_AS(predict(model, std::vector<double>{1.0}), SchemaError);
}

TEST_CASE("malformed documents are rejected") {
  nlohmann::json j = small_model();
  nlohmann::json wrong_format = j;
  wrong_format["format"] = "something.else";
  CHECK_THROWS_AS(wrong_format.get<EbmModel>(), SchemaError);
  nlohmann::json future = j;
  future["version"] = 99;
  CHECK_THROWS_AS(future.get<EbmModel>(), SchemaError);
}

TEST_CASE("empty models predict their intercept") {
  const FeatureMatrix m = testing::uniform_matrix(20, 2, 1);
  const EbmModel model = make_empty_model(build_bins(m, EbmHyperparams{}), 3.25);
  CHECK(predict(model, m.row(0)) == 3.25);
  const BinnedDataset d = apply_bins(model.binning, m);
  for (double v : predict_all(model, d)) CHECK(v == 3.25);
}

TEST_CASE("binned and raw prediction agree") {
  const EbmModel model = small_model();
  const FeatureMatrix probe = testing::uniform_matrix(200, 3, 5);
  const BinnedDataset d = apply_bins(model.binning, probe);
  const std::vector<double> all = predict_all(model, d);
  for (std::size_t i = 0; i < probe.rows(); ++i) {
    CHECK(bit_equal(all[i], predict(model, probe.row(i))));
    CHECK(bit_equal(predict_binned(model, d, i), all[i]));
  }
}
