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

#include "ebmtraj/ebm/hyperparams.hpp"

#include <string>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {

void EbmHyperparams::validate() const {
  auto fail = [](const std::string& what) {
    throw ConfigError("invalid EBM hyperparameters: " + what);
  };
  if (max_leaves < 2) fail("max_leaves must be >= 2");
  if (max_feature_bins < 2) fail("max_feature_bins must be >= 2");
  if (max_feature_bins > 65000) fail("max_feature_bins must be <= 65000");
  if (max_interaction_bins < 2) fail("max_interaction_bins must be >= 2");
  if (max_interaction_bins > 1024) fail("max_interaction_bins must be <= 1024");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    fail("learning_rate must lie in (0, 1]");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction must lie in (0, 1)");
  }
  if (outer_bags < 1) fail("outer_bags must be >= 1");
  if (max_rounds < 1) fail("max_rounds must be >= 1");
}

void to_json(nlohmann::json& j, const EbmHyperparams& hp) {
  j = nlohmann::json{
      {"max_feature_bins", hp.max_feature_bins},
      {"max_interaction_bins", hp.max_interaction_bins},
      {"max_rounds", hp.max_rounds},
      {"learning_rate", hp.learning_rate},
      {"max_leaves", hp.max_leaves},
      {"outer_bags", hp.outer_bags},
      {"validation_fraction", hp.validation_fraction},
      {"early_stop_patience", hp.early_stop_patience},
      {"num_pairs", hp.num_pairs},
      {"rng_seed", hp.rng_seed},
  };
}

void from_json(const nlohmann::json& j, EbmHyperparams& hp) {
  // Missing keys keep their defaults so partial config blocks are accepted.
  EbmHyperparams d;
  hp.max_feature_bins = j.value("max_feature_bins", d.max_feature_bins);
  hp.max_interaction_bins = j.value("max_interaction_bins", d.max_interaction_bins);
  hp.max_rounds = j.value("max_rounds", d.max_rounds);
  hp.learning_rate = j.value("learning_rate", d.learning_rate);
  hp.max_leaves = j.value("max_leaves", d.max_leaves);
  hp.outer_bags = j.value("outer_bags", d.outer_bags);
  hp.validation_fraction = j.value("validation_fraction", d.validation_fraction);
  hp.early_stop_patience = j.value("early_stop_patience", d.early_stop_patience);
  hp.num_pairs = j.value("num_pairs", d.num_pairs);
  hp.rng_seed = j.value("rng_seed", d.rng_seed);
}

}  // namespace ebmtraj
