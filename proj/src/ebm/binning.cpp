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

#include "ebmtraj/ebm/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw SchemaError("feature matrix storage does not match " + std::to_string(rows_) + "x" +
                      std::to_string(cols_));
  }
}

void FeatureMatrix::append_row(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) {
    throw SchemaError("row width " + std::to_string(row.size()) + " does not match matrix width " +
                      std::to_string(cols_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

std::size_t bin_index(std::span<const double> cuts, double value) {
  if (!std::isfinite(value)) return cuts.size() + 1;
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), value) -
                                  cuts.begin());
}

std::size_t FeatureBins::bin(double value) const { return bin_index(cuts, value); }

std::size_t FeatureBins::interaction_bin(double value) const {
  return bin_index(interaction_cuts, value);
}

bool BinningSchema::operator==(const BinningSchema& other) const {
  if (features.size() != other.features.size()) return false;
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].cuts != other.features[j].cuts ||
        features[j].interaction_cuts != other.features[j].interaction_cuts) {
      return false;
    }
  }
  return true;
}

namespace {

double cut_between(double lo, double hi) {
  double mid = lo + (hi - lo) / 2.0;
  // Adjacent doubles: put the cut on the upper value so `lo` stays below it.
  return mid > lo ? mid : hi;
}

}  // namespace

std::vector<double> quantile_cuts(std::vector<double> values, std::size_t max_bins) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  std::vector<double> cuts;
  if (values.empty() || max_bins < 2) return cuts;
  std::sort(values.begin(), values.end());

  std::vector<double> distinct = values;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= max_bins) {
    for (std::size_t i = 1; i < distinct.size(); ++i) {
      cuts.push_back(cut_between(distinct[i - 1], distinct[i]));
    }
    return cuts;
  }

  const std::size_t n = values.size();
  for (std::size_t i = 1; i < max_bins; ++i) {
    std::size_t pos = i * n / max_bins;
    if (pos == 0 || pos >= n) continue;
    if (values[pos - 1] == values[pos]) {
      // Inside a run of ties: move the cut to the end of the run.
      auto run_end = std::upper_bound(values.begin() + pos, values.end(), values[pos]);
      if (run_end == values.end()) continue;
      pos = static_cast<std::size_t>(run_end - values.begin());
    }
    double cut = cut_between(values[pos - 1], values[pos]);
    if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
  }
  return cuts;
}

BinningSchema build_bins(const FeatureMatrix& features, const EbmHyperparams& hp,
                         std::span<const std::string> names) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw DataError("cannot build bins: feature matrix is empty");
  }
  if (!names.empty() && names.size() != features.cols()) {
    throw SchemaError("expected " + std::to_string(features.cols()) + " feature names, got " +
                      std::to_string(names.size()));
  }
  BinningSchema schema;
  schema.features.resize(features.cols());
  std::vector<double> column(features.rows());
  for (std::size_t j = 0; j < features.cols(); ++j) {
    FeatureBins& fb = schema.features[j];
    fb.name = names.empty() ? "f" + std::to_string(j) : names[j];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < features.rows(); ++i) {
      column[i] = features(i, j);
      if (std::isfinite(column[i])) {
        lo = std::min(lo, column[i]);
        hi = std::max(hi, column[i]);
      } else {
        fb.has_missing = true;
      }
    }
    fb.min_value = std::isfinite(lo) ? lo : 0.0;
    fb.max_value = std::isfinite(hi) ? hi : 0.0;
    fb.cuts = quantile_cuts(column, hp.max_feature_bins);
    fb.interaction_cuts = quantile_cuts(column, hp.max_interaction_bins);
  }
  return schema;
}

BinnedDataset apply_bins(const BinningSchema& schema, const FeatureMatrix& features) {
  if (features.cols() != schema.size()) {
    throw SchemaError("feature matrix has " + std::to_string(features.cols()) +
                      " columns but the binning schema expects " +
                      std::to_string(schema.size()));
  }
  BinnedDataset out;
  out.schema = schema;
  out.rows = features.rows();
  out.bins.assign(schema.size(), std::vector<std::uint16_t>(features.rows()));
  out.interaction_bins.assign(schema.size(), std::vector<std::uint16_t>(features.rows()));
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const FeatureBins& fb = schema.features[j];
    for (std::size_t i = 0; i < features.rows(); ++i) {
      const double v = features(i, j);
      out.bins[j][i] = static_cast<std::uint16_t>(fb.bin(v));
      out.interaction_bins[j][i] = static_cast<std::uint16_t>(fb.interaction_bin(v));
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const FeatureBins& f) {
  j = nlohmann::json{{"name", f.name},
                     {"cuts", f.cuts},
                     {"interaction_cuts", f.interaction_cuts},
                     {"has_missing", f.has_missing},
                     {"min_value", f.min_value},
                     {"max_value", f.max_value}};
}

void from_json(const nlohmann::json& j, FeatureBins& f) {
  j.at("name").get_to(f.name);
  j.at("cuts").get_to(f.cuts);
  j.at("interaction_cuts").get_to(f.interaction_cuts);
  j.at("has_missing").get_to(f.has_missing);
  j.at("min_value").get_to(f.min_value);
  j.at("max_value").get_to(f.max_value);
}

}  // namespace ebmtraj
