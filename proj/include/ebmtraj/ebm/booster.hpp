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

#ifndef EBMTRAJ_EBM_BOOSTER_HPP_
#define EBMTRAJ_EBM_BOOSTER_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/ebm/binning.hpp"
#include "ebmtraj/ebm/hyperparams.hpp"
#include "ebmtraj/ebm/model.hpp"

namespace ebmtraj {

// Called after every boosting round with the bag's weighted training RMSE.
// Installing an observer forces bags to run sequentially.
using RoundObserver =
    std::function<void(std::size_t bag, std::size_t round, double train_rmse)>;

struct PairScore {
  FeaturePair pair;
  double score = 0.0;  // reduction in mean squared residual
};

// Cyclic boosting of one shallow tree per feature per round, averaged over
// outer bags and centered into the intercept.
EbmModel fit_main_effects(const BinnedDataset& binned, std::span<const double> targets,
                          const EbmHyperparams& hp, const RoundObserver& observer = {});

// Ranks every feature pair by how much a single four-cell split on the
// interaction grid reduces the residuals of `model`. Sorted by descending
// score; ties keep ascending pair order.
std::vector<PairScore> detect_interactions(const EbmModel& model, const BinnedDataset& binned,
                                           std::span<const double> targets,
                                           const EbmHyperparams& hp);

// Boosts pair grids on the residuals of `model`, whose existing terms stay
// frozen.
EbmModel fit_pairs(EbmModel model, const BinnedDataset& binned, std::span<const double> targets,
                   std::span<const FeaturePair> pairs, const EbmHyperparams& hp,
                   const RoundObserver& observer = {});

// Full pipeline: bins, main effects, then the best `hp.num_pairs` pairs.
EbmModel train_ebm(const FeatureMatrix& features, std::span<const double> targets,
                   const EbmHyperparams& hp, std::span<const std::string> names = {});

}  // namespace ebmtraj

#endif  // EBMTRAJ_EBM_BOOSTER_HPP_
