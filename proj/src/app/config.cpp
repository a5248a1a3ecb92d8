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

#include "ebmtraj/app/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

ModePreset parse_modes(const nlohmann::json& j, SchemaId schema) {
  if (j.is_null()) return mode_preset(std::string(to_string(schema)));
  if (j.is_string()) return mode_preset(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("modes must be a preset name or an object");
  reject_unknown(j, {"preset", "kind", "k", "top_k", "x_slices", "y_cuts", "units"}, "modes");

  ModePreset p;
  if (j.contains("preset")) {
    p = mode_preset(j.at("preset").get<std::string>());
  } else {
    const std::string kind = j.value("kind", std::string("kmeans"));
    p.name = "custom";
    if (kind == "kmeans") {
      p.kind = PartitionKind::kKMeans;
    } else if (kind == "grid") {
      p.kind = PartitionKind::kGrid;
    } else {
      throw ConfigError("unknown modes kind '" + kind + "'");
    }
  }
  if (j.contains("k")) p.k = j.at("k").get<std::size_t>();
  if (j.contains("top_k")) p.top_k = j.at("top_k").get<std::size_t>();
  if (j.contains("x_slices")) p.layout.x_slices = j.at("x_slices").get<std::size_t>();
  if (j.contains("y_cuts")) {
    p.layout.y_cuts = j.at("y_cuts").get<std::vector<std::vector<double>>>();
  }
  if (j.contains("units")) {
    const std::string units = j.at("units").get<std::string>();
    if (units == "fraction") {
      p.layout.units = GridLayout::Units::kFraction;
    } else if (units == "absolute") {
      p.layout.units = GridLayout::Units::kAbsolute;
    } else {
      throw ConfigError("grid units must be 'fraction' or 'absolute'");
    }
  }
  if (p.kind == PartitionKind::kGrid) p.k = p.layout.mode_count();
  if (p.k == 0 || p.top_k == 0) throw ConfigError("modes need k >= 1 and top_k >= 1");
  return p;
}

std::pair<double, double> range(const nlohmann::json& j, const char* axis) {
  const auto v = j.at(axis).get<std::vector<double>>();
  if (v.size() != 2 || !(v[0] <= v[1])) {
    throw ConfigError(std::string("outlier range for ") + axis + " must be [low, high]");
  }
  return {v[0], v[1]};
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"description", "schema", "history_len", "horizon_steps", "dt", "window_stride",
                  "poc_default", "modes", "top_k", "min_mode_members", "ebm", "weights",
                  "outliers", "split", "paths", "seed", "synthetic"},
                 "config");
  RunConfig c;
  try {
    c.features.schema = parse_schema_id(j.value("schema", std::string("sdd")));
    c.features.history_len = j.value("history_len", c.features.history_len);
    c.features.dt = j.value("dt", c.features.dt);
    if (j.contains("poc_default")) {
      const nlohmann::json& d = j.at("poc_default");
      if (d.is_string()) {
        if (d.get<std::string>() != "auto") throw ConfigError("poc_default must be a number or \"auto\"");
      } else {
        c.features.poc_default = d.get<double>();
        c.auto_poc_default = false;
      }
    }
    c.horizon_steps = j.value("horizon_steps", c.horizon_steps);
    c.window_stride = j.value("window_stride", c.window_stride);
    c.modes = parse_modes(j.contains("modes") ? j.at("modes") : nlohmann::json(), c.features.schema);
    c.top_k = j.value("top_k", c.top_k);
    c.min_mode_members = j.value("min_mode_members", c.min_mode_members);
    if (j.contains("ebm")) c.ebm = j.at("ebm").get<EbmHyperparams>();
    if (j.contains("weights")) c.weights = j.at("weights").get<ScoringWeights>();

    if (j.contains("outliers")) {
      const nlohmann::json& o = j.at("outliers");
      if (o.is_string() && o.get<std::string>() == "auto") {
        c.auto_outliers = true;
      } else if (o.is_string() && o.get<std::string>() == "none") {
        c.auto_outliers = false;
      } else if (o.is_object()) {
        reject_unknown(o, {"x", "y", "coverage"}, "outliers");
        if (o.contains("x") != o.contains("y")) {
          throw ConfigError("outlier bounds need both x and y ranges");
        }
        if (o.contains("x")) {
          const auto [x0, x1] = range(o, "x");
          const auto [y0, y1] = range(o, "y");
          c.outlier_bounds = Rect{x0, x1, y0, y1};
          c.auto_outliers = false;
        }
        c.outlier_coverage = o.value("coverage", c.outlier_coverage);
      } else {
        throw ConfigError("outliers must be \"auto\", \"none\" or an object");
      }
    }

    if (j.contains("split")) {
      const nlohmann::json& s = j.at("split");
      reject_unknown(s, {"train", "val", "test", "name", "directory"}, "split");
      if (s.contains("name")) {
        c.split.kind = SplitSpec::Kind::kNamed;
        c.split.name = s.at("name").get<std::string>();
        c.split.directory = base_dir / s.value("directory", std::string("splits"));
      } else {
        c.split.kind = SplitSpec::Kind::kFractions;
        c.split.train = s.value("train", c.split.train);
        c.split.val = s.value("val", c.split.val);
        c.split.test = s.value("test", c.split.test);
      }
    }

    if (j.contains("paths")) {
      const nlohmann::json& p = j.at("paths");
      reject_unknown(p, {"data", "grid", "model", "output"}, "paths");
      auto path = [&](const char* key) {
        return p.contains(key) ? base_dir / p.at(key).get<std::string>() : std::filesystem::path();
      };
      c.paths = {path("data"), path("grid"), path("model"), path("output")};
    }
    if (c.paths.output.empty()) c.paths.output = base_dir / "out";

    if (j.contains("synthetic")) {
      SyntheticSpec spec;
      spec.history_len = c.features.history_len;
      spec.horizon_steps = c.horizon_steps;
      spec.dt = c.features.dt;
      from_json(j.at("synthetic"), spec);
      c.synthetic = spec;
    }
    set_seed(c, j.value("seed", c.seed));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.ebm.validate();
  c.weights.validate();
  if (c.features.history_len < 2) throw ConfigError("history_len must be at least 2");
  if (!(c.features.dt > 0.0)) throw ConfigError("dt must be positive");
  if (c.synthetic) c.synthetic->validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

void set_seed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.ebm.rng_seed = seed;
  config.split.seed = seed;
  if (config.synthetic) config.synthetic->seed = seed;
}

}  // namespace ebmtraj
