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

#include "ebmtraj/app/commands.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "ebmtraj/app/synthetic.hpp"
#include "ebmtraj/app/trajectory_csv.hpp"
#include "ebmtraj/common/error.hpp"
#include "ebmtraj/common/log.hpp"
#include "ebmtraj/ebm/binning.hpp"
#include "ebmtraj/explain/explain.hpp"
#include "ebmtraj/explain/export.hpp"
#include "ebmtraj/features/drivable_grid.hpp"

namespace ebmtraj {
namespace {

namespace fs = std::filesystem;

struct Dataset {
  std::vector<TrajectoryRecord> records;
  DatasetSplit split;
};

Dataset load_dataset(const RunConfig& config) {
  if (config.paths.data.empty()) throw ConfigError("config has no paths.data");
  Dataset d;
  d.records = parse_trajectory_csv(config.paths.data);
  if (d.records.empty()) throw DataError("no trajectories in " + config.paths.data.string());
  d.split = split_dataset(d.records, config.split);
  return d;
}

std::vector<Sample> samples_of(const RunConfig& config, const Dataset& d,
                               const std::vector<std::size_t>& part) {
  std::vector<TrajectoryRecord> chosen;
  for (std::size_t i : part) chosen.push_back(d.records[i]);
  // Neighbours come from the whole scene, not only from the chosen split part.
  const SampleSpec spec{config.features.history_len, config.horizon_steps, config.window_stride,
                        config.features.dt};
  std::vector<Sample> all = extract_samples(d.records, spec);
  std::map<std::pair<std::string, std::int64_t>, bool> wanted;
  for (const TrajectoryRecord& r : chosen) wanted[{r.scene, r.track_id}] = true;
  std::vector<Sample> out;
  for (Sample& s : all) {
    if (wanted.count({s.observed.scene, s.observed.track_id})) out.push_back(std::move(s));
  }
  return out;
}

std::optional<DrivableGrid> load_grid(const RunConfig& config) {
  if (config.paths.grid.empty()) return std::nullopt;
  fs::path sidecar = config.paths.grid;
  sidecar.replace_extension(".json");
  return load_drivable_grid(config.paths.grid, sidecar);
}

std::vector<Vec2> canonical_targets(std::span<const Sample> samples) {
  std::vector<Vec2> out;
  for (const Sample& s : samples) out.push_back(sample_frame(s).to_canonical(s.target));
  return out;
}

std::optional<Rect> outlier_bounds(const RunConfig& config, std::span<const Vec2> train_targets) {
  if (config.outlier_bounds) return config.outlier_bounds;
  if (!config.auto_outliers || train_targets.empty()) return std::nullopt;
  return coverage_bounds(train_targets, config.outlier_coverage);
}

using PartitionLookup = std::function<const ModePartition*(AgentClass)>;

PreparedData prepare(const FeatureConfig& features, std::vector<Sample> samples,
                     const std::optional<Rect>& bounds, const DrivableGrid* grid,
                     const PartitionLookup& partition_for) {
  PreparedData out;
  const std::vector<Vec2> targets = canonical_targets(samples);
  std::vector<std::size_t> kept;
  if (bounds) {
    const OutlierFilter f = filter_outliers(targets, *bounds);
    kept = f.kept;
    out.removed_fraction = f.removed_fraction;
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) kept.push_back(i);
  }
  std::size_t skipped = 0;
  for (std::size_t i : kept) {
    const ModePartition* partition = partition_for ? partition_for(samples[i].agent_class) : nullptr;
    if (features.schema == SchemaId::kArgo && partition == nullptr) {
      ++skipped;
      continue;
    }
    const SceneContext context{samples[i].neighbors, grid, partition};
    out.features.push_back(build_features(samples[i].observed, features, context));
    out.targets.push_back(targets[i]);
    out.samples.push_back(std::move(samples[i]));
  }
  if (skipped > 0) warn(std::to_string(skipped) + " samples skipped: no mode partition for their class");
  return out;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::ofstream open_out(const fs::path& file) {
  ensure_parent(file);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot open " + file.string() + " for writing");
  return out;
}

std::string file_token(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return s;
}

std::map<AgentClass, ModePartition> train_partitions(const RunConfig& config,
                                                     std::span<const Sample> samples) {
  std::map<AgentClass, std::vector<Vec2>> by_class;
  const std::vector<Vec2> targets = canonical_targets(samples);
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples[i].agent_class].push_back(targets[i]);
  std::map<AgentClass, ModePartition> out;
  for (const auto& [c, t] : by_class) {
    out.emplace(c, merge_small_modes(build_partition(config.modes, t, config.seed), t,
                                     config.min_mode_members));
  }
  return out;
}

// x midpoint of the union of all mode rectangles.
double layout_mid_x(const std::map<AgentClass, ModePartition>& partitions) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [c, p] : partitions) {
    for (const Mode& m : p.modes) {
      for (const Rect& r : m.extents) {
        lo = std::min(lo, r.x0);
        hi = std::max(hi, r.x1);
      }
    }
  }
  return lo <= hi ? 0.5 * (lo + hi) : 0.0;
}

struct TrainingView {
  FeatureConfig features;
  Dataset data;
  std::optional<DrivableGrid> grid;
  std::optional<Rect> bounds;
  PreparedData train;
};

// Training samples after outlier filtering; partitions only for argo.
TrainingView training_view(const RunConfig& config,
                           std::map<AgentClass, ModePartition>* partitions,
                           const MultiModalPredictor* predictor, bool with_features = true) {
  TrainingView v;
  v.features = predictor != nullptr ? predictor->features : config.features;
  v.data = load_dataset(config);
  v.grid = load_grid(config);
  std::vector<Sample> samples = samples_of(config, v.data, v.data.split.training());
  v.bounds = outlier_bounds(config, canonical_targets(samples));
  if (!with_features) return v;

  PartitionLookup lookup;
  if (config.features.schema == SchemaId::kArgo) {
    if (predictor != nullptr) {
      lookup = [predictor](AgentClass c) -> const ModePartition* {
        auto it = predictor->classes.find(c);
        return it == predictor->classes.end() ? nullptr : &it->second.partition;
      };
    } else {
      std::vector<Sample> kept;
      const std::vector<Vec2> t = canonical_targets(samples);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!v.bounds || v.bounds->contains(t[i])) kept.push_back(samples[i]);
      }
      *partitions = train_partitions(config, kept);
      if (config.auto_poc_default) v.features.poc_default = layout_mid_x(*partitions);
      lookup = [partitions](AgentClass c) -> const ModePartition* {
        auto it = partitions->find(c);
        return it == partitions->end() ? nullptr : &it->second;
      };
    }
  }
  v.train = prepare(v.features, std::move(samples), v.bounds, v.grid ? &*v.grid : nullptr, lookup);
  return v;
}

PreparedData test_view(const RunConfig& config, const MultiModalPredictor& predictor) {
  TrainingView v = training_view(config, nullptr, &predictor, false);
  std::vector<Sample> samples = samples_of(config, v.data, v.data.split.test);
  if (samples.empty()) throw DataError("the test split has no complete windows");
  PartitionLookup lookup = [&predictor](AgentClass c) -> const ModePartition* {
    auto it = predictor.classes.find(c);
    return it == predictor.classes.end() ? nullptr : &it->second.partition;
  };
  PreparedData test =
      prepare(predictor.features, std::move(samples), v.bounds, v.grid ? &*v.grid : nullptr, lookup);
  // Classes the predictor never saw cannot be scored.
  PreparedData known;
  known.removed_fraction = test.removed_fraction;
  std::size_t unknown = 0;
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    if (!predictor.classes.count(test.samples[i].agent_class)) {
      ++unknown;
      continue;
    }
    known.samples.push_back(std::move(test.samples[i]));
    known.features.push_back(std::move(test.features[i]));
    known.targets.push_back(test.targets[i]);
  }
  if (unknown > 0) warn(std::to_string(unknown) + " test samples have a class without models");
  if (known.samples.empty()) throw DataError("no test samples left to score");
  return known;
}

std::size_t pick_k(std::size_t k, const MultiModalPredictor& predictor) {
  return k == 0 ? predictor.top_k : k;
}

}  // namespace

RunConfig resolve_config(const fs::path& config_path, const CommandOverrides& o) {
  RunConfig c = load_run_config(config_path);
  if (o.seed) set_seed(c, *o.seed);
  if (o.out) c.paths.output = *o.out;
  if (o.k) {
    if (*o.k == 0) throw ConfigError("--k must be at least 1");
    c.top_k = *o.k;
  }
  return c;
}

void run_synth(const RunConfig& config, std::ostream& log) {
  if (!config.synthetic) throw ConfigError("config has no synthetic block");
  if (config.paths.data.empty()) throw ConfigError("config has no paths.data to write to");
  const SyntheticDataset d = generate_synthetic(*config.synthetic);
  ensure_parent(config.paths.data);
  write_trajectory_csv(d.records, config.paths.data);

  std::ofstream labels = open_out(config.paths.output / "synthetic_labels.csv");
  labels << "scene,track_id,mode,end_x,end_y\n";
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    labels << d.records[i].scene << ',' << d.records[i].track_id << ',' << d.labels[i] << ','
           << format_number(d.endpoints[i].x) << ',' << format_number(d.endpoints[i].y) << '\n';
  }
  log << "wrote " << d.records.size() << " synthetic tracks to " << config.paths.data.string()
      << '\n';
}

MultiModalPredictor run_train(const RunConfig& config, std::ostream& log) {
  std::map<AgentClass, ModePartition> partitions;
  TrainingView v = training_view(config, &partitions, nullptr);
  if (v.train.samples.empty()) throw DataError("no training samples with a complete window");

  PredictorConfig pc;
  pc.features = v.features;
  pc.preset = config.modes;
  pc.hp = config.ebm;
  pc.weights = config.weights;
  pc.top_k = config.effective_top_k();
  pc.min_mode_members = config.min_mode_members;
  pc.seed = config.seed;

  // One fit per class: argo classes can end up with different mode counts
  // and therefore different feature widths.
  std::map<AgentClass, std::vector<TrainingSample>> by_class;
  for (std::size_t i = 0; i < v.train.samples.size(); ++i) {
    by_class[v.train.samples[i].agent_class].push_back(
        {v.train.features[i].values, v.train.targets[i], v.train.samples[i].agent_class});
  }
  MultiModalPredictor predictor;
  for (const auto& [c, rows] : by_class) {
    const std::size_t modes = partitions.count(c) ? partitions.at(c).size() : 0;
    pc.feature_names = feature_names(v.features, modes);
    MultiModalPredictor part =
        train_multimodal(rows, pc, config.features.schema == SchemaId::kArgo ? &partitions : nullptr);
    if (predictor.classes.empty()) {
      auto classes = std::move(predictor.classes);
      predictor = std::move(part);
      predictor.classes.merge(classes);
    } else {
      predictor.classes.merge(part.classes);
    }
    const ClassModels& cm = predictor.classes.at(c);
    log << "class " << to_string(c) << ": " << cm.samples << " samples, " << cm.partition.size()
        << " modes\n";
  }

  ensure_parent(config.model_path());
  save_predictor(predictor, config.model_path());

  nlohmann::json summary{{"training_samples", v.train.samples.size()},
                         {"removed_fraction", v.train.removed_fraction}};
  if (v.bounds) {
    summary["outlier_bounds"] = {{"x", {v.bounds->x0, v.bounds->x1}}, {"y", {v.bounds->y0, v.bounds->y1}}};
  }
  open_out(config.paths.output / "train_summary.json") << summary.dump(1) << '\n';
  log << "saved predictor to " << config.model_path().string() << '\n';
  return predictor;
}

void run_predict(const RunConfig& config, std::size_t k, std::ostream& log) {
  const MultiModalPredictor predictor = load_predictor(config.model_path());
  const PreparedData test = test_view(config, predictor);
  k = pick_k(k, predictor);
  std::ofstream out = open_out(config.paths.output / "predictions.csv");
  out << "sample_id,rank,x,y,probability\n";
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    const Prediction p = predict_top_k(predictor, test.features[i], test.samples[i].agent_class, k);
    const std::vector<Vec2> scene = p.scene_points();
    for (std::size_t r = 0; r < scene.size(); ++r) {
      out << test.samples[i].id << ',' << r + 1 << ',' << format_number(scene[r].x) << ','
          << format_number(scene[r].y) << ',' << format_number(p.points[r].probability) << '\n';
    }
  }
  log << "wrote predictions for " << test.samples.size() << " samples (k=" << k << ")\n";
}

EvalReport run_evaluate(const RunConfig& config, std::size_t k, std::ostream& log) {
  const MultiModalPredictor predictor = load_predictor(config.model_path());
  const PreparedData test = test_view(config, predictor);
  k = pick_k(k, predictor);
  std::vector<std::vector<Vec2>> predicted;
  std::vector<std::vector<Vec2>> unimodal;
  std::vector<Vec2> truth;
  std::vector<AgentClass> classes;
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    const AgentClass c = test.samples[i].agent_class;
    predicted.push_back(predict_top_k(predictor, test.features[i], c, k).scene_points());
    unimodal.push_back({test.features[i].frame.to_scene(
        predict_unimodal(predictor, test.features[i].values, c))});
    truth.push_back(test.samples[i].target);
    classes.push_back(c);
  }
  EvalReport report = min_fde(predicted, truth, k, classes);
  report.unimodal_fde = min_fde(unimodal, truth, 1).min_fde;
  report.removed_fraction = test.removed_fraction;
  open_out(config.paths.output / "eval_report.json") << nlohmann::json(report).dump(1) << '\n';
  log << format_report(report);
  return report;
}

void run_explain(const RunConfig& config, std::ostream& log) {
  const MultiModalPredictor predictor = load_predictor(config.model_path());
  const TrainingView v = training_view(config, nullptr, &predictor);
  const fs::path dir = config.paths.output / "explain";
  fs::create_directories(dir);

  std::size_t files = 0;
  for (const auto& [c, cm] : predictor.classes) {
    FeatureMatrix reference;
    std::vector<double> first;
    for (std::size_t i = 0; i < v.train.samples.size(); ++i) {
      if (v.train.samples[i].agent_class != c) continue;
      reference.append_row(v.train.features[i].values);
      if (first.empty()) first = v.train.features[i].values;
    }
    if (reference.rows() == 0) {
      warn("no reference samples for class " + std::string(to_string(c)) + "; skipped");
      continue;
    }
    const std::string cls(to_string(c));
    auto export_importance = [&](const ImportanceReport& imp, const std::string& stem) {
      std::ofstream csv = open_out(dir / (stem + "_importance.csv"));
      write_importance_csv(csv, imp);
      open_out(dir / (stem + "_importance.svg")) << importance_svg(imp, stem);
      files += 2;
    };
    auto export_model = [&](const EbmModel& model, const std::string& stem, bool full) {
      const ImportanceReport imp = global_importance(model, apply_bins(model.binning, reference));
      export_importance(imp, stem);
      if (!full) return imp;
      for (TermRef term : model_terms(model)) {
        const DependenceCurve curve = partial_dependence(model, term);
        const std::string name = stem + "_dependence_" + file_token(curve.label);
        std::ofstream dep = open_out(dir / (name + ".csv"));
        write_dependence_csv(dep, curve);
        open_out(dir / (name + ".svg")) << dependence_svg(curve);
        files += 2;
      }
      std::ofstream local = open_out(dir / (stem + "_local.csv"));
      write_local_csv(local, local_explain(model, first));
      ++files;
      return imp;
    };
    // Per-axis reports plus their average.
    export_importance(average_importance(export_model(cm.global.x, cls + "_global_x", true),
                                         export_model(cm.global.y, cls + "_global_y", true)),
                      cls + "_global");
    for (std::size_t m = 0; m < cm.modes.size(); ++m) {
      export_model(cm.modes[m].x, cls + "_mode" + std::to_string(m) + "_x", false);
      export_model(cm.modes[m].y, cls + "_mode" + std::to_string(m) + "_y", false);
    }
  }
  log << "wrote " << files << " explanation files to " << dir.string() << '\n';
}

void run_inspect(const RunConfig& config, std::ostream& out) {
  const MultiModalPredictor predictor = load_predictor(config.model_path());
  out << "schema " << to_string(predictor.features.schema) << ", history "
      << predictor.features.history_len << ", top_k " << predictor.top_k << ", seed "
      << predictor.seed << '\n';
  for (const auto& [c, cm] : predictor.classes) {
    out << "class " << to_string(c) << ": " << cm.samples << " samples, " << cm.partition.size()
        << " modes, lambda3 " << format_number(cm.lambda3) << ", lambda4 "
        << format_number(cm.lambda4) << '\n';
    auto describe = [&](const char* name, const EbmModel& m) {
      out << "  " << name << ": intercept " << format_number(m.intercept) << ", sigma "
          << format_number(m.residual_sigma) << ", " << m.shapes.size() << " shapes, "
          << m.pairs.size() << " pairs";
      for (const PairShape& p : m.pairs) {
        out << " [" << term_label(m, {TermKind::kPair, static_cast<std::size_t>(&p - m.pairs.data())})
            << "]";
      }
      out << '\n';
    };
    describe("global x", cm.global.x);
    describe("global y", cm.global.y);
    for (const Mode& mode : cm.partition.modes) {
      out << "  mode " << mode.id << ": centroid (" << format_number(mode.centroid.x) << ", "
          << format_number(mode.centroid.y) << "), sigma (" << format_number(mode.sigma.x) << ", "
          << format_number(mode.sigma.y) << "), " << mode.members << " members\n";
    }
  }
}

}  // namespace ebmtraj
