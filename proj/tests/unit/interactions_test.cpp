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
#include <random>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/ebm/booster.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;

namespace {

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

struct Problem {
  FeatureMatrix x;
  std::vector<double> y;
};

Problem xor_problem(std::uint64_t seed, std::size_t n = 1500) {
  Problem p{testing::uniform_matrix(n, 3, seed), {}};
  std::mt19937_64 rng(seed + 100);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < n; ++i) {
    p.y.push_back(sign(p.x(i, 0)) * sign(p.x(i, 1)) + 0.1 * nd(rng));
  }
  return p;
}

// Direct SSE computation over rows for every single cut per feature.
double brute_force_score(const BinnedDataset& d, const std::vector<double>& res, std::size_t j,
                         std::size_t k) {
  const std::size_t rows = d.schema.features[j].interaction_bin_count();
  const std::size_t cols = d.schema.features[k].interaction_bin_count();
  const std::size_t n = res.size();
  double mean = 0.0;
  for (double r : res) mean += r;
  mean /= static_cast<double>(n);
  double sse_parent = 0.0;
  for (double r : res) sse_parent += (r - mean) * (r - mean);
  double best = 0.0;
  for (std::size_t a = 1; a < rows; ++a) {
    for (std::size_t b = 1; b < cols; ++b) {
      double s[4] = {0, 0, 0, 0}, w[4] = {0, 0, 0, 0};
      for (std::size_t i = 0; i < n; ++i) {
        const int cell = (d.interaction_bins[j][i] >= a ? 2 : 0) + (d.interaction_bins[k][i] >= b ? 1 : 0);
        s[cell] += res[i];
        w[cell] += 1;
      }
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const int cell = (d.interaction_bins[j][i] >= a ? 2 : 0) + (d.interaction_bins[k][i] >= b ? 1 : 0);
        const double m = s[cell] / w[cell];
        sse += (res[i] - m) * (res[i] - m);
      }
      best = std::max(best, sse_parent - sse);
    }
  }
  return best / static_cast<double>(n);
}

}  // namespace

TEST_CASE("the xor pair ranks first and matches the brute-force oracle") {
  const Problem p = xor_problem(1);
  EbmHyperparams hp;
  hp.max_rounds = 300;
  hp.outer_bags = 2;
  hp.learning_rate = 0.05;
  const BinnedDataset d = apply_bins(build_bins(p.x, hp), p.x);
  const EbmModel main = fit_main_effects(d, p.y, hp);
  const std::vector<PairScore> scores = detect_interactions(main, d, p.y, hp);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].pair == FeaturePair{0, 1});
  CHECK(scores[0].score > 5 * scores[1].score);

  std::vector<double> res;
  for (std::size_t i = 0; i < d.rows; ++i) res.push_back(p.y[i] - predict_binned(main, d, i));
  for (const PairScore& s : scores) {
    CHECK(s.score == doctest::Approx(brute_force_score(d, res, s.pair.first, s.pair.second)).epsilon(1e-9));
  }
}

TEST_CASE("fitting the pair removes the interaction error") {
  const Problem p = xor_problem(2);
  EbmHyperparams hp;
  hp.max_rounds = 500;
  hp.outer_bags = 2;
  hp.learning_rate = 0.1;
  hp.num_pairs = 1;
  const EbmModel model = train_ebm(p.x, p.y, hp);
  REQUIRE(model.pairs.size() == 1);
  CHECK(model.pairs[0].first == 0);
  CHECK(model.pairs[0].second == 1);
  // The interaction bin holding zero mixes both signs, so the floor sits above
  // the noise level; without the pair the spread is about 1.
  hp.num_pairs = 0;
  const EbmModel main_only = train_ebm(p.x, p.y, hp);
  CHECK(main_only.residual_sigma > 0.9);
  CHECK(model.residual_sigma < 0.35);
  const std::vector<double> q{0.5, -0.5, 0.0};
  CHECK(predict(model, q) == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("pair scores are sorted and non-negative") {
  const FeatureMatrix m = testing::uniform_matrix(300, 5, 9);
  std::vector<double> y;
  for (std::size_t i = 0; i < m.rows(); ++i) y.push_back(m(i, 2) * m(i, 4) + m(i, 0));
  EbmHyperparams hp;
  hp.max_rounds = 100;
  hp.outer_bags = 1;
  const BinnedDataset d = apply_bins(build_bins(m, hp), m);
  const auto scores = detect_interactions(fit_main_effects(d, y, hp), d, y, hp);
  CHECK(scores.size() == 10);
  for (std::size_t i = 1; i < scores.size(); ++i) CHECK(scores[i - 1].score >= scores[i].score);
  for (const PairScore& s : scores) CHECK(s.score >= 0.0);
  CHECK(scores[0].pair == FeaturePair{2, 4});
}

TEST_CASE("fit_pairs validates the pair list") {
  const Problem p = xor_problem(3, 200);
  EbmHyperparams hp;
  hp.max_rounds = 20;
  const BinnedDataset d = apply_bins(build_bins(p.x, hp), p.x);
  const EbmModel main = fit_main_effects(d, p.y, hp);
  const std::vector<FeaturePair> out_of_range{{0, 7}};
  const std::vector<FeaturePair> same{{1, 1}};
  const std::vector<FeaturePair> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(fit_pairs(main, d, p.y, out_of_range, hp), SchemaError);
  CHECK_THROWS_AS(fit_pairs(main, d, p.y, same, hp), SchemaError);
  CHECK_THROWS_AS(fit_pairs(main, d, p.y, dup, hp), SchemaError);
  const EbmModel unchanged = fit_pairs(main, d, p.y, {}, hp);
  CHECK(nlohmann::json(unchanged).dump() == nlohmann::json(main).dump());

  const FeatureMatrix other = testing::uniform_matrix(200, 3, 77);
  const BinnedDataset foreign = apply_bins(build_bins(other, hp), other);
  CHECK_THROWS_AS(detect_interactions(main, foreign, p.y, hp), SchemaError);
}

TEST_CASE("main effects stay frozen while pairs are fitted") {
  const Problem p = xor_problem(4, 600);
  EbmHyperparams hp;
  hp.max_rounds = 100;
  hp.outer_bags = 1;
  const BinnedDataset d = apply_bins(build_bins(p.x, hp), p.x);
  const EbmModel main = fit_main_effects(d, p.y, hp);
  const std::vector<FeaturePair> pair{{0, 1}};
  const EbmModel with_pair = fit_pairs(main, d, p.y, pair, hp);
  for (std::size_t j = 0; j < main.shapes.size(); ++j) {
    CHECK(with_pair.shapes[j].contributions == main.shapes[j].contributions);
  }
  CHECK(with_pair.pairs.size() == 1);
  CHECK(with_pair.info.pair_rounds.size() == 1);
}
