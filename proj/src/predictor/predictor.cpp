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

#include "ebmtraj/predictor/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/ebm/booster.hpp"

namespace ebmtraj {
namespace {

struct AxisData {
  FeatureMatrix matrix;
  std::vector<double> x;
  std::vector<double> y;
};

AxisData gather(std::span<const TrainingSample* const> rows, std::size_t width) {
  AxisData d;
  d.matrix = FeatureMatrix(0, width);
  for (const TrainingSample* s : rows) {
    d.matrix.append_row(s->features);
    d.x.push_back(s->target.x);
    d.y.push_back(s->target.y);
  }
  return d;
}

AxisModels fit_axes(const AxisData& d, const EbmHyperparams& hp,
                    std::span<const std::string> names) {
  return {train_ebm(d.matrix, d.x, hp, names), train_ebm(d.matrix, d.y, hp, names)};
}

std::string axis_rule_name(ScoringWeights::AxisRule r) {
  return r == ScoringWeights::AxisRule::kFixed ? "fixed" : "from_axis_spread";
}

}  // namespace

void ScoringWeights::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || lambda1 + lambda2 == 0.0) {
    throw ConfigError("lambda1 and lambda2 must be non-negative and not both zero");
  }
  if (!(lambda3 >= 0.0) || !(lambda4 >= 0.0)) {
    throw ConfigError("lambda3 and lambda4 must be non-negative");
  }
  if (!(min_sigma > 0.0)) throw ConfigError("min_sigma must be positive");
}

void to_json(nlohmann::json& j, const ScoringWeights& w) {
  j = nlohmann::json{{"lambda1", w.lambda1}, {"lambda2", w.lambda2}, {"lambda3", w.lambda3},
                     {"lambda4", w.lambda4}, {"axis_rule", axis_rule_name(w.axis_rule)},
                     {"min_sigma", w.min_sigma}};
}

void from_json(const nlohmann::json& j, ScoringWeights& w) {
  w.lambda1 = j.value("lambda1", w.lambda1);
  w.lambda2 = j.value("lambda2", w.lambda2);
  w.lambda3 = j.value("lambda3", w.lambda3);
  w.lambda4 = j.value("lambda4", w.lambda4);
  w.min_sigma = j.value("min_sigma", w.min_sigma);
  if (j.contains("axis_rule")) {
    const std::string rule = j.at("axis_rule").get<std::string>();
    if (rule == "fixed") {
      w.axis_rule = ScoringWeights::AxisRule::kFixed;
    } else if (rule == "from_axis_spread") {
      w.axis_rule = ScoringWeights::AxisRule::kFromAxisSpread;
    } else {
      throw ConfigError("unknown axis_rule '" + rule + "'");
    }
  }
}

const ClassModels& MultiModalPredictor::models_for(AgentClass c) const {
  auto it = classes.find(c);
  if (it == classes.end()) {
    throw DataError("predictor has no models for class " + std::string(to_string(c)));
  }
  return it->second;
}

MultiModalPredictor train_multimodal(std::span<const TrainingSample> samples,
                                     const PredictorConfig& config,
                                     const std::map<AgentClass, ModePartition>* partitions) {
  if (samples.empty()) throw DataError("no training samples");
  config.weights.validate();
  if (config.min_mode_members < 2) throw ConfigError("min_mode_members must be at least 2");

  EbmHyperparams hp = config.hp;
  hp.rng_seed = config.seed;
  hp.validate();

  const std::size_t width = samples.front().features.size();
  if (!config.feature_names.empty() && config.feature_names.size() != width) {
    throw SchemaError("feature name count " + std::to_string(config.feature_names.size()) +
                      " does not match sample width " + std::to_string(width));
  }
  std::map<AgentClass, std::vector<const TrainingSample*>> by_class;
  for (const TrainingSample& s : samples) {
    if (s.features.size() != width) {
      throw SchemaError("training samples have inconsistent widths (" + std::to_string(width) +
                        " vs " + std::to_string(s.features.size()) + ")");
    }
    by_class[s.agent_class].push_back(&s);
  }

  MultiModalPredictor predictor;
  predictor.features = config.features;
  predictor.weights = config.weights;
  predictor.top_k = config.top_k == 0 ? config.preset.top_k : config.top_k;
  predictor.seed = config.seed;

  for (const auto& [agent_class, rows] : by_class) {
    ClassModels cm;
    cm.feature_names = config.feature_names;
    cm.samples = rows.size();
    const AxisData all = gather(rows, width);
    cm.global = fit_axes(all, hp, config.feature_names);

    std::vector<Vec2> targets;
    for (const TrainingSample* s : rows) targets.push_back(s->target);
    if (partitions != nullptr) {
      auto it = partitions->find(agent_class);
      if (it == partitions->end()) {
        throw ConfigError("no mode partition supplied for class " +
                          std::string(to_string(agent_class)));
      }
      cm.partition = it->second;
      refresh_mode_stats(cm.partition, targets);
    } else {
      cm.partition = merge_small_modes(build_partition(config.preset, targets, config.seed),
                                       targets, config.min_mode_members);
    }

    const std::vector<std::size_t> labels = assign_all(cm.partition, targets);
    for (std::size_t m = 0; m < cm.partition.size(); ++m) {
      std::vector<const TrainingSample*> members;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (labels[i] == m) members.push_back(rows[i]);
      }
      if (members.empty()) {
        throw DataError("mode " + std::to_string(m) + " of class " +
                        std::string(to_string(agent_class)) + " has no training samples");
      }
      cm.modes.push_back(fit_axes(gather(members, width), hp, config.feature_names));
    }

    if (config.weights.axis_rule == ScoringWeights::AxisRule::kFromAxisSpread) {
      const double sx = cm.global.x.residual_sigma;
      const double sy = cm.global.y.residual_sigma;
      cm.lambda3 = sx + sy > 0.0 ? sx / (sx + sy) : 0.5;
      cm.lambda4 = 1.0 - cm.lambda3;
    } else {
      cm.lambda3 = config.weights.lambda3;
      cm.lambda4 = config.weights.lambda4;
    }
    predictor.classes.emplace(agent_class, std::move(cm));
  }
  return predictor;
}

double gaussian_log_density(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma) - 0.5 * z * z;
}

std::vector<ModeScore> score_modes(const MultiModalPredictor& predictor,
                                   std::span<const double> features, AgentClass agent_class) {
  const ClassModels& cm = predictor.models_for(agent_class);
  const ScoringWeights& w = predictor.weights;
  auto floor_sigma = [&](double s) { return std::max(s, w.min_sigma); };

  const double gx = predict(cm.global.x, features);
  const double gy = predict(cm.global.y, features);
  const double sx_all = floor_sigma(cm.global.x.residual_sigma);
  const double sy_all = floor_sigma(cm.global.y.residual_sigma);

  std::vector<ModeScore> scores;
  for (std::size_t m = 0; m < cm.modes.size(); ++m) {
    const Mode& mode = cm.partition.modes[m];
    const double px = predict(cm.modes[m].x, features);
    const double py = predict(cm.modes[m].y, features);
    const double lx = w.lambda1 * gaussian_log_density(px, mode.centroid.x, floor_sigma(mode.sigma.x)) +
                      w.lambda2 * gaussian_log_density(px, gx, sx_all);
    const double ly = w.lambda1 * gaussian_log_density(py, mode.centroid.y, floor_sigma(mode.sigma.y)) +
                      w.lambda2 * gaussian_log_density(py, gy, sy_all);
    scores.push_back({m, {px, py}, cm.lambda3 * lx + cm.lambda4 * ly});
  }
  return scores;
}

Prediction rank_modes(std::span<const ModeScore> scores, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  Prediction out;
  if (scores.empty()) return out;
  double top = -std::numeric_limits<double>::infinity();
  for (const ModeScore& s : scores) top = std::max(top, s.log_score);

  std::vector<RankedPoint> ranked;
  double total = 0.0;
  for (const ModeScore& s : scores) {
    const double p = std::exp(s.log_score - top);
    total += p;
    ranked.push_back({s.mode, s.point, p});
  }
  for (RankedPoint& r : ranked) r.probability /= total;
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedPoint& a, const RankedPoint& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.mode < b.mode;
  });
  ranked.resize(std::min(k, ranked.size()));
  double kept = 0.0;
  for (const RankedPoint& r : ranked) kept += r.probability;
  for (RankedPoint& r : ranked) r.probability /= kept;
  out.points = std::move(ranked);
  return out;
}

Prediction predict_top_k(const MultiModalPredictor& predictor, std::span<const double> features,
                         AgentClass agent_class, std::size_t k) {
  const std::vector<ModeScore> scores = score_modes(predictor, features, agent_class);
  return rank_modes(scores, k);
}

Prediction predict_top_k(const MultiModalPredictor& predictor, const FeatureVector& features,
                         AgentClass agent_class, std::size_t k) {
  Prediction p = predict_top_k(predictor, std::span<const double>(features.values), agent_class, k);
  p.frame = features.frame;
  return p;
}

std::vector<Vec2> Prediction::scene_points() const {
  std::vector<Vec2> out;
  for (const RankedPoint& r : points) out.push_back(frame.to_scene(r.point));
  return out;
}

Vec2 predict_unimodal(const MultiModalPredictor& predictor, std::span<const double> features,
                      AgentClass agent_class) {
  const ClassModels& cm = predictor.models_for(agent_class);
  return {predict(cm.global.x, features), predict(cm.global.y, features)};
}

void to_json(nlohmann::json& j, const MultiModalPredictor& p) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& [agent_class, cm] : p.classes) {
    nlohmann::json modes = nlohmann::json::array();
    for (const AxisModels& m : cm.modes) modes.push_back({{"x", m.x}, {"y", m.y}});
    classes.push_back({{"class", std::string(to_string(agent_class))},
                       {"feature_names", cm.feature_names},
                       {"samples", cm.samples},
                       {"global", {{"x", cm.global.x}, {"y", cm.global.y}}},
                       {"partition", cm.partition},
                       {"modes", std::move(modes)},
                       {"lambda3", cm.lambda3},
                       {"lambda4", cm.lambda4}});
  }
  j = nlohmann::json{{"format", "ebmtraj.predictor"},
                     {"version", 1},
                     {"schema", std::string(to_string(p.features.schema))},
                     {"history_len", p.features.history_len},
                     {"dt", p.features.dt},
                     {"poc_default", p.features.poc_default},
                     {"weights", p.weights},
                     {"top_k", p.top_k},
                     {"seed", p.seed},
                     {"classes", std::move(classes)}};
}

void from_json(const nlohmann::json& j, MultiModalPredictor& p) {
  if (j.value("format", std::string()) != "ebmtraj.predictor") {
    throw SchemaError("not an ebmtraj predictor document");
  }
  if (j.at("version").get<int>() != 1) {
    throw SchemaError("unsupported predictor version " + j.at("version").dump());
  }
  p = MultiModalPredictor{};
  p.features.schema = parse_schema_id(j.at("schema").get<std::string>());
  p.features.history_len = j.at("history_len").get<std::size_t>();
  p.features.dt = j.at("dt").get<double>();
  p.features.poc_default = j.at("poc_default").get<double>();
  p.weights = j.at("weights").get<ScoringWeights>();
  p.top_k = j.at("top_k").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  for (const nlohmann::json& c : j.at("classes")) {
    ClassModels cm;
    cm.feature_names = c.at("feature_names").get<std::vector<std::string>>();
    cm.samples = c.at("samples").get<std::size_t>();
    cm.global = {c.at("global").at("x").get<EbmModel>(), c.at("global").at("y").get<EbmModel>()};
    cm.partition = c.at("partition").get<ModePartition>();
    for (const nlohmann::json& m : c.at("modes")) {
      cm.modes.push_back({m.at("x").get<EbmModel>(), m.at("y").get<EbmModel>()});
    }
    if (cm.modes.size() != cm.partition.size()) {
      throw SchemaError("predictor has " + std::to_string(cm.modes.size()) + " mode models for " +
                        std::to_string(cm.partition.size()) + " modes");
    }
    cm.lambda3 = c.at("lambda3").get<double>();
    cm.lambda4 = c.at("lambda4").get<double>();
    p.classes.emplace(parse_agent_class(c.at("class").get<std::string>()), std::move(cm));
  }
}

std::string serialize_predictor(const MultiModalPredictor& p) {
  return nlohmann::json(p).dump(1) + "\n";
}

void save_predictor(const MultiModalPredictor& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << serialize_predictor(p);
}

MultiModalPredictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in).get<MultiModalPredictor>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("malformed predictor " + path.string() + ": " + e.what());
  }
}

}  // namespace ebmtraj
