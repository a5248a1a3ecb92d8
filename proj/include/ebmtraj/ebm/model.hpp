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

#ifndef EBMTRAJ_EBM_MODEL_HPP_
#define EBMTRAJ_EBM_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/ebm/binning.hpp"
#include "ebmtraj/ebm/hyperparams.hpp"
#include "json.hpp"

namespace ebmtraj {

// Per-bin additive contribution of one feature. Indexed like FeatureBins
// (value bins followed by the missing slot).
struct ShapeFunction {
  std::size_t feature = 0;
  std::vector<double> contributions;
  std::vector<double> populations;
};

// Contribution grid of a feature pair over interaction bins, row-major with
// rows indexed by `first` and columns by `second`.
struct PairShape {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> contributions;
  std::vector<double> populations;

  double at(std::size_t r, std::size_t c) const { return contributions[r * cols + c]; }
};

struct FeaturePair {
  std::size_t first = 0;
  std::size_t second = 0;

  auto operator<=>(const FeaturePair&) const = default;
};

struct TrainingInfo {
  std::vector<std::size_t> main_rounds;  // per outer bag
  std::vector<std::size_t> pair_rounds;  // per outer bag, empty without pairs
  std::uint64_t seed = 0;
};

// Additive regression model with identity link:
//   y = intercept + sum_j shape_j(x_j) + sum_(j,k) pair_jk(x_j, x_k).
struct EbmModel {
  double intercept = 0.0;
  std::vector<ShapeFunction> shapes;
  std::vector<PairShape> pairs;
  BinningSchema binning;
  double residual_sigma = 0.0;
  EbmHyperparams hyperparams;
  TrainingInfo info;

  std::size_t feature_count() const { return binning.size(); }
  double pair_contribution(const PairShape& pair, std::span<const double> features) const;
};

// Intercept-only model with zero shapes laid out for `schema`.
EbmModel make_empty_model(const BinningSchema& schema, double intercept = 0.0);

double predict(const EbmModel& model, std::span<const double> features);

// Prediction for one row of a dataset binned with the model's schema.
double predict_binned(const EbmModel& model, const BinnedDataset& data, std::size_t row);

std::vector<double> predict_all(const EbmModel& model, const BinnedDataset& data);

void to_json(nlohmann::json& j, const EbmModel& model);
void from_json(const nlohmann::json& j, EbmModel& model);

void save_model(const EbmModel& model, const std::filesystem::path& path);
EbmModel load_model(const std::filesystem::path& path);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EBM_MODEL_HPP_
