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

#include "ebmtraj/ebm/model.hpp"

#include <fstream>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

constexpr const char* kModelFormat = "ebmtraj.ebm";
constexpr int kModelVersion = 1;

void check_width(const EbmModel& model, std::size_t width) {
  if (width != model.feature_count()) {
    throw SchemaError("input has " + std::to_string(width) + " features but the model expects " +
                      std::to_string(model.feature_count()));
  }
}

}  // namespace

double EbmModel::pair_contribution(const PairShape& pair, std::span<const double> features) const {
  const std::size_t r = binning.features[pair.first].interaction_bin(features[pair.first]);
  const std::size_t c = binning.features[pair.second].interaction_bin(features[pair.second]);
  return pair.at(r, c);
}

EbmModel make_empty_model(const BinningSchema& schema, double intercept) {
  EbmModel model;
  model.intercept = intercept;
  model.binning = schema;
  model.shapes.resize(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    model.shapes[j].feature = j;
    model.shapes[j].contributions.assign(schema.features[j].bin_count(), 0.0);
    model.shapes[j].populations.assign(schema.features[j].bin_count(), 0.0);
  }
  return model;
}

double predict(const EbmModel& model, std::span<const double> features) {
  check_width(model, features.size());
  double y = model.intercept;
  for (const ShapeFunction& s : model.shapes) {
    y += s.contributions[model.binning.features[s.feature].bin(features[s.feature])];
  }
  for (const PairShape& p : model.pairs) y += model.pair_contribution(p, features);
  return y;
}

double predict_binned(const EbmModel& model, const BinnedDataset& data, std::size_t row) {
  double y = model.intercept;
  for (const ShapeFunction& s : model.shapes) {
    y += s.contributions[data.bins[s.feature][row]];
  }
  for (const PairShape& p : model.pairs) {
    y += p.at(data.interaction_bins[p.first][row], data.interaction_bins[p.second][row]);
  }
  return y;
}

std::vector<double> predict_all(const EbmModel& model, const BinnedDataset& data) {
  if (data.features() != model.feature_count()) {
    throw SchemaError("binned dataset has " + std::to_string(data.features()) +
                      " features but the model expects " + std::to_string(model.feature_count()));
  }
  std::vector<double> out(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i) out[i] = predict_binned(model, data, i);
  return out;
}

void to_json(nlohmann::json& j, const EbmModel& model) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const ShapeFunction& s : model.shapes) {
    shapes.push_back({{"feature", s.feature},
                      {"contributions", s.contributions},
                      {"populations", s.populations}});
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairShape& p : model.pairs) {
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"rows", p.rows},
                     {"cols", p.cols},
                     {"contributions", p.contributions},
                     {"populations", p.populations}});
  }
  j = nlohmann::json{
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"hyperparams", model.hyperparams},
      {"binning", model.binning.features},
      {"intercept", model.intercept},
      {"shapes", std::move(shapes)},
      {"pairs", std::move(pairs)},
      {"residual_sigma", model.residual_sigma},
      {"training",
       {{"main_rounds", model.info.main_rounds},
        {"pair_rounds", model.info.pair_rounds},
        {"seed", model.info.seed}}},
  };
}

void from_json(const nlohmann::json& j, EbmModel& model) {
  if (j.value("format", std::string{}) != kModelFormat) {
    throw SchemaError("document is not an ebmtraj EBM model");
  }
  const int version = j.at("version").get<int>();
  if (version != kModelVersion) {
    throw SchemaError("unsupported EBM model version " + std::to_string(version));
  }
  model = EbmModel{};
  j.at("hyperparams").get_to(model.hyperparams);
  j.at("binning").get_to(model.binning.features);
  model.intercept = j.at("intercept").get<double>();
  for (const auto& s : j.at("shapes")) {
    ShapeFunction shape;
    s.at("feature").get_to(shape.feature);
    s.at("contributions").get_to(shape.contributions);
    s.at("populations").get_to(shape.populations);
    if (shape.feature >= model.binning.size() ||
        shape.contributions.size() != model.binning.features[shape.feature].bin_count()) {
      throw SchemaError("shape function does not match its feature's bins");
    }
    model.shapes.push_back(std::move(shape));
  }
  for (const auto& p : j.at("pairs")) {
    PairShape pair;
    p.at("first").get_to(pair.first);
    p.at("second").get_to(pair.second);
    p.at("rows").get_to(pair.rows);
    p.at("cols").get_to(pair.cols);
    p.at("contributions").get_to(pair.contributions);
    p.at("populations").get_to(pair.populations);
    if (pair.first >= model.binning.size() || pair.second >= model.binning.size() ||
        pair.contributions.size() != pair.rows * pair.cols) {
      throw SchemaError("pair grid does not match its features' interaction bins");
    }
    model.pairs.push_back(std::move(pair));
  }
  model.residual_sigma = j.at("residual_sigma").get<double>();
  const auto& t = j.at("training");
  t.at("main_rounds").get_to(model.info.main_rounds);
  t.at("pair_rounds").get_to(model.info.pair_rounds);
  t.at("seed").get_to(model.info.seed);
}

void save_model(const EbmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << nlohmann::json(model).dump(1) << '\n';
}

EbmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return nlohmann::json::parse(in).get<EbmModel>();
}

}  // namespace ebmtraj
