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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/ebm/binning.hpp"
#include "ebmtraj/ebm/hyperparams.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

TEST_CASE("bin_index counts the cuts at or below the value") {
  const std::vector<double> cuts{1.0, 2.0};
  CHECK(bin_index(cuts, 0.5) == 0);
  CHECK(bin_index(cuts, 1.0) == 1);
  CHECK(bin_index(cuts, 1.5) == 1);
  CHECK(bin_index(cuts, 2.0) == 2);
  CHECK(bin_index(cuts, 99.0) == 2);
  CHECK(bin_index(cuts, kNaN) == 3);
  CHECK(bin_index({}, 5.0) == 0);
}

TEST_CASE("few distinct values get one bin each") {
  const auto cuts = quantile_cuts({3.0, 1.0, 2.0, 2.0, 1.0}, 256);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0] == doctest::Approx(1.5));
  CHECK(cuts[1] == doctest::Approx(2.5));
}

TEST_CASE("constant and empty columns have no cuts") {
  CHECK(quantile_cuts({4.0, 4.0, 4.0}, 256).empty());
  CHECK(quantile_cuts({}, 256).empty());
  CHECK(quantile_cuts({kNaN, kNaN}, 256).empty());
}

TEST_CASE("quantile cuts balance populations and never split ties") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> values;
  for (int i = 0; i < 2000; ++i) values.push_back(nd(rng));
  for (int i = 0; i < 500; ++i) values.push_back(0.25);  // heavy tie run
  const auto cuts = quantile_cuts(values, 16);
  REQUIRE(cuts.size() <= 15);
  REQUIRE(cuts.size() >= 10);
  CHECK(std::is_sorted(cuts.begin(), cuts.end()));
  CHECK(std::adjacent_find(cuts.begin(), cuts.end()) == cuts.end());
  for (double c : cuts) CHECK(std::find(values.begin(), values.end(), c) == values.end());

  std::vector<std::size_t> counts(cuts.size() + 1, 0);
  for (double v : values) ++counts[bin_index(cuts, v)];
  // Every bin except the one holding the tie run stays near n / 16.
  const std::size_t tie_bin = bin_index(cuts, 0.25);
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (b == tie_bin) continue;
    CHECK(counts[b] > 0);
    CHECK(counts[b] < 2 * values.size() / 16);
  }
}

TEST_CASE("build_bins records ranges, names and missing values") {
  FeatureMatrix m(4, 2, {1.0, kNaN, 2.0, 5.0, 3.0, 6.0, 4.0, 7.0});
  EbmHyperparams hp;
  const std::vector<std::string> names{"a", "b"};
  const BinningSchema s = build_bins(m, hp, names);
  REQUIRE(s.size() == 2);
  CHECK(s.features[0].name == "a");
  CHECK_FALSE(s.features[0].has_missing);
  CHECK(s.features[1].has_missing);
  CHECK(s.features[1].min_value == 5.0);
  CHECK(s.features[1].max_value == 7.0);
  CHECK(s.features[0].value_bins() == 4);
  CHECK(s.features[0].bin_count() == 5);

  const BinnedDataset d = apply_bins(s, m);
  CHECK(d.rows == 4);
  CHECK(d.bins[1][0] == s.features[1].missing_bin());
  CHECK(d.bins[0][3] == 3);
  CHECK(d.interaction_bins[1][0] == s.features[1].interaction_value_bins());
}

TEST_CASE("interaction bins are coarser than main bins") {
  const FeatureMatrix m = testing::uniform_matrix(1000, 1, 3);
  EbmHyperparams hp;
  hp.max_feature_bins = 64;
  hp.max_interaction_bins = 8;
  const BinningSchema s = build_bins(m, hp);
  CHECK(s.features[0].value_bins() == 64);
  CHECK(s.features[0].interaction_value_bins() == 8);
  CHECK(s.features[0].name == "f0");
}

TEST_CASE("binning errors") {
  EbmHyperparams hp;
  CHECK_THROWS_AS(build_bins(FeatureMatrix(), hp), DataError);
  const FeatureMatrix m = testing::uniform_matrix(10, 2, 1);
  const std::vector<std::string> one{"x"};
  CHECK_THROWS_AS(build_bins(m, hp, one), SchemaError);
  const BinningSchema s = build_bins(m, hp);
  CHECK_THROWS_AS(apply_bins(s, testing::uniform_matrix(10, 3, 1)), SchemaError);
  FeatureMatrix grow;
  const std::vector<double> r2{1.0, 2.0};
  const std::vector<double> r3{1.0, 2.0, 3.0};
  grow.append_row(r2);
  CHECK_THROWS_AS(grow.append_row(r3), SchemaError);
}

TEST_CASE("feature bins survive JSON") {
  const BinningSchema s = build_bins(testing::uniform_matrix(300, 1, 9), EbmHyperparams{});
  const nlohmann::json j = s.features[0];
  const FeatureBins back = j.get<FeatureBins>();
  CHECK(back.cuts == s.features[0].cuts);
  CHECK(back.interaction_cuts == s.features[0].interaction_cuts);
  CHECK(back.min_value == s.features[0].min_value);
}

TEST_CASE("hyperparameter validation and partial JSON") {
  EbmHyperparams hp;
  CHECK_NOTHROW(hp.validate());
  CHECK(hp.max_feature_bins == 256);
  CHECK(hp.max_interaction_bins == 32);
  CHECK(hp.max_rounds == 5000);
  CHECK(hp.learning_rate == 0.01);
  CHECK(hp.outer_bags == 8);
  CHECK(hp.early_stop_patience == 50);

  EbmHyperparams bad = hp;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.max_leaves = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.outer_bags = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const auto partial = nlohmann::json::parse(R"({"max_rounds": 10, "outer_bags": 1})").get<EbmHyperparams>();
  CHECK(partial.max_rounds == 10);
  CHECK(partial.outer_bags == 1);
  CHECK(partial.learning_rate == 0.01);
  const EbmHyperparams round_trip = nlohmann::json(partial).get<EbmHyperparams>();
  CHECK(round_trip.max_rounds == 10);
  CHECK(round_trip.rng_seed == partial.rng_seed);
}
