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

#ifndef EBMTRAJ_PREDICTOR_PREDICTOR_HPP_
#define EBMTRAJ_PREDICTOR_PREDICTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/ebm/hyperparams.hpp"
#include "ebmtraj/ebm/model.hpp"
#include "ebmtraj/features/features.hpp"
#include "ebmtraj/features/geometry.hpp"
#include "ebmtraj/features/trajectory.hpp"
#include "ebmtraj/modes/modes.hpp"
#include "json.hpp"

namespace ebmtraj {

// Weights of the mode score. lambda1/lambda2 mix the mode-level and the
// global-consistency likelihoods per axis; lambda3/lambda4 mix the axes.
struct ScoringWeights {
  enum class AxisRule { kFromAxisSpread, kFixed };

  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double lambda3 = 0.5;
  double lambda4 = 0.5;
  AxisRule axis_rule = AxisRule::kFromAxisSpread;
  double min_sigma = 1e-3;

  void validate() const;
};

void to_json(nlohmann::json& j, const ScoringWeights& w);
void from_json(const nlohmann::json& j, ScoringWeights& w);

struct AxisModels {
  EbmModel x;
  EbmModel y;
};

struct ClassModels {
  std::vector<std::string> feature_names;
  std::size_t samples = 0;
  AxisModels global;
  ModePartition partition;
  std::vector<AxisModels> modes;  // one per partition mode
  double lambda3 = 0.5;           // axis weights actually used
  double lambda4 = 0.5;
};

struct MultiModalPredictor {
  FeatureConfig features;
  ScoringWeights weights;
  std::size_t top_k = 1;
  std::uint64_t seed = 0;
  std::map<AgentClass, ClassModels> classes;

  // Throws DataError when the class was not trained.
  const ClassModels& models_for(AgentClass c) const;
};

struct TrainingSample {
  std::vector<double> features;
  Vec2 target;  // canonical frame
  AgentClass agent_class = AgentClass::kPedestrian;
};

struct PredictorConfig {
  FeatureConfig features;
  std::vector<std::string> feature_names;  // empty: generic names
  ModePreset preset;
  EbmHyperparams hp;
  ScoringWeights weights;
  std::size_t top_k = 0;  // 0: use the preset value
  std::size_t min_mode_members = 20;
  std::uint64_t seed = 42;  // overrides hp.rng_seed and seeds the partition
};

// Partitions passed in are used as given (the road features of the argo
// schema depend on them, so they have to be fixed before features exist).
MultiModalPredictor train_multimodal(std::span<const TrainingSample> samples,
                                     const PredictorConfig& config,
                                     const std::map<AgentClass, ModePartition>* partitions = nullptr);

struct ModeScore {
  std::size_t mode = 0;
  Vec2 point;
  double log_score = 0.0;
};

std::vector<ModeScore> score_modes(const MultiModalPredictor& predictor,
                                   std::span<const double> features, AgentClass agent_class);

struct RankedPoint {
  std::size_t mode = 0;
  Vec2 point;  // canonical frame
  double probability = 0.0;
};

struct Prediction {
  std::vector<RankedPoint> points;  // descending probability
  CanonicalFrame frame;             // maps points back to scene coordinates

  std::vector<Vec2> scene_points() const;
};

// Softmax over the scores, keep the k best (ties: lower mode id), renormalize.
Prediction rank_modes(std::span<const ModeScore> scores, std::size_t k);

Prediction predict_top_k(const MultiModalPredictor& predictor, std::span<const double> features,
                         AgentClass agent_class, std::size_t k);
Prediction predict_top_k(const MultiModalPredictor& predictor, const FeatureVector& features,
                         AgentClass agent_class, std::size_t k);

// Point predicted by the global per-axis models, canonical frame.
Vec2 predict_unimodal(const MultiModalPredictor& predictor, std::span<const double> features,
                      AgentClass agent_class);

double gaussian_log_density(double x, double mean, double sigma);

void to_json(nlohmann::json& j, const MultiModalPredictor& p);
void from_json(const nlohmann::json& j, MultiModalPredictor& p);

std::string serialize_predictor(const MultiModalPredictor& p);
void save_predictor(const MultiModalPredictor& p, const std::filesystem::path& path);
MultiModalPredictor load_predictor(const std::filesystem::path& path);

}  // namespace ebmtraj

#endif  // EBMTRAJ_PREDICTOR_PREDICTOR_HPP_
