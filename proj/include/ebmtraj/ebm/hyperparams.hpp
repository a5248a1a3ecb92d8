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

#ifndef EBMTRAJ_EBM_HYPERPARAMS_HPP_
#define EBMTRAJ_EBM_HYPERPARAMS_HPP_

#include <cstddef>
#include <cstdint>

#include "json.hpp"

namespace ebmtraj {

// Boosting hyperparameters. Defaults reproduce the published EBM settings:
// 256 feature bins, 32 interaction bins, 5000 rounds, rate 0.01, 3 leaves,
// 8 outer bags and a 15% validation holdout.
struct EbmHyperparams {
  std::size_t max_feature_bins = 256;
  std::size_t max_interaction_bins = 32;
  std::size_t max_rounds = 5000;
  double learning_rate = 0.01;
  std::size_t max_leaves = 3;
  std::size_t outer_bags = 8;
  double validation_fraction = 0.15;
  // Rounds without validation improvement before a bag stops. Zero turns
  // early stopping off and trains every bag on its full sample.
  std::size_t early_stop_patience = 50;
  std::size_t num_pairs = 10;
  std::uint64_t rng_seed = 42;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

void to_json(nlohmann::json& j, const EbmHyperparams& hp);
void from_json(const nlohmann::json& j, EbmHyperparams& hp);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EBM_HYPERPARAMS_HPP_
