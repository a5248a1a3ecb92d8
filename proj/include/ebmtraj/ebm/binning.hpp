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

#ifndef EBMTRAJ_EBM_BINNING_HPP_
#define EBMTRAJ_EBM_BINNING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/ebm/hyperparams.hpp"
#include "json.hpp"

namespace ebmtraj {

// Dense row-major matrix of feature values. NaN marks a missing value.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  void append_row(std::span<const double> row);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Binning of one feature. Value bins are [cut[i-1], cut[i]); the slot after
// the last value bin is reserved for missing values.
struct FeatureBins {
  std::string name;
  std::vector<double> cuts;
  std::vector<double> interaction_cuts;
  bool has_missing = false;
  double min_value = 0.0;
  double max_value = 0.0;

  std::size_t value_bins() const { return cuts.size() + 1; }
  std::size_t bin_count() const { return value_bins() + 1; }
  std::size_t missing_bin() const { return value_bins(); }

  std::size_t interaction_value_bins() const { return interaction_cuts.size() + 1; }
  std::size_t interaction_bin_count() const { return interaction_value_bins() + 1; }

  std::size_t bin(double value) const;
  std::size_t interaction_bin(double value) const;
};

struct BinningSchema {
  std::vector<FeatureBins> features;

  std::size_t size() const { return features.size(); }
  bool operator==(const BinningSchema& other) const;
};

// Bin indices for a whole dataset, stored per feature (column-major).
struct BinnedDataset {
  BinningSchema schema;
  std::size_t rows = 0;
  std::vector<std::vector<std::uint16_t>> bins;
  std::vector<std::vector<std::uint16_t>> interaction_bins;

  std::size_t features() const { return bins.size(); }
};

// Index of the bin holding `value` for the given cut points: the number of
// cuts <= value, or cuts.size() + 1 (the missing slot) for non-finite values.
std::size_t bin_index(std::span<const double> cuts, double value);

// Quantile cut points over the finite values, at most `max_bins` bins.
std::vector<double> quantile_cuts(std::vector<double> values, std::size_t max_bins);

BinningSchema build_bins(const FeatureMatrix& features, const EbmHyperparams& hp,
                         std::span<const std::string> names = {});

BinnedDataset apply_bins(const BinningSchema& schema, const FeatureMatrix& features);

void to_json(nlohmann::json& j, const FeatureBins& f);
void from_json(const nlohmann::json& j, FeatureBins& f);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EBM_BINNING_HPP_
