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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ebmtraj/app/commands.hpp"
#include "ebmtraj/app/config.hpp"
#include "ebmtraj/app/trajectory_csv.hpp"
#include "ebmtraj/features/drivable_grid.hpp"
#include "ebmtraj/predictor/predictor.hpp"
#include "support/test_data.hpp"

using namespace ebmtraj;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

RunConfig write_and_load(const fs::path& dir, const std::string& text) {
  std::ofstream(dir / "config.json") << text;
  return load_run_config(dir / "config.json");
}

}  // namespace

TEST_CASE("synthetic pedestrians through every command") {
  const fs::path dir = testing::scratch_dir("pipeline_sdd");
  const RunConfig c = write_and_load(dir, R"({
    "schema": "sdd",
    "modes": {"kind": "kmeans", "k": 3, "top_k": 3},
    "ebm": {"max_rounds": 120, "outer_bags": 1, "learning_rate": 0.1, "num_pairs": 1},
    "split": {"train": 0.75, "val": 0.0, "test": 0.25},
    "paths": {"data": "data/trajectories.csv"},
    "seed": 3,
    "synthetic": {"destinations": [[10, 0], [6, 8], [6, -8]], "weights": [0.4, 0.3, 0.3],
                  "noise_sigma": 0.3, "agents": 400, "agents_per_scene": 20}
  })");
  std::ostringstream log;
  run_synth(c, log);
  CHECK(parse_trajectory_csv(c.paths.data).size() == 400);
  CHECK(line_count(c.paths.output / "synthetic_labels.csv") == 401);

  const MultiModalPredictor p = run_train(c, log);
  CHECK(fs::exists(c.model_path()));
  CHECK(fs::exists(c.paths.output / "train_summary.json"));
  CHECK(p.models_for(AgentClass::kPedestrian).partition.size() == 3);

  run_predict(c, 0, log);
  const fs::path preds = c.paths.output / "predictions.csv";
  CHECK(slurp(preds).rfind("sample_id,rank,x,y,probability\n", 0) == 0);
  CHECK(line_count(preds) > 1);

  const EvalReport r = run_evaluate(c, 2, log);
  CHECK(r.k == 2);
  REQUIRE(r.unimodal_fde);
  CHECK(r.min_fde < *r.unimodal_fde);
  const EvalReport r3 = run_evaluate(c, 3, log);
  CHECK(r3.min_fde <= r.min_fde);
  CHECK(fs::exists(c.paths.output / "eval_report.json"));

  run_explain(c, log);
  CHECK(fs::exists(c.paths.output / "explain" / "pedestrian_global_x_importance.csv"));
  CHECK(fs::exists(c.paths.output / "explain" / "pedestrian_global_x_importance.svg"));
  CHECK(fs::exists(c.paths.output / "explain" / "pedestrian_global_importance.csv"));

  std::ostringstream inspect;
  run_inspect(c, inspect);
  CHECK(inspect.str().find("3 modes") != std::string::npos);

  // Retraining with the same seed reproduces the model file.
  const std::string first = slurp(c.model_path());
  run_train(c, log);
  CHECK(slurp(c.model_path()) == first);
}

TEST_CASE("named split over synthetic scenes") {
  const fs::path dir = testing::scratch_dir("pipeline_named");
  fs::create_directories(dir / "splits");
  std::ofstream(dir / "splits" / "mine.json")
      << R"({"train": ["synth_0000", "synth_0001", "synth_0002"], "val": ["synth_0003"],
             "test": ["synth_0004"]})";
  const RunConfig c = write_and_load(dir, R"({
    "modes": {"kind": "kmeans", "k": 2, "top_k": 2},
    "ebm": {"max_rounds": 60, "outer_bags": 1, "num_pairs": 0},
    "split": {"name": "mine"},
    "paths": {"data": "data.csv"},
    "synthetic": {"destinations": [[10, 0], [0, 10]], "weights": [0.5, 0.5], "agents": 250,
                  "agents_per_scene": 50}
  })");
  std::ostringstream log;
  run_synth(c, log);
  const MultiModalPredictor p = run_train(c, log);
  CHECK(p.models_for(AgentClass::kPedestrian).samples == 200);
  const EvalReport r = run_evaluate(c, 2, log);
  CHECK(r.samples + static_cast<std::size_t>(r.removed_fraction * 50.0 + 0.5) == 50);
}

TEST_CASE("vehicles with a drivable grid") {
  const fs::path dir = testing::scratch_dir("pipeline_argo");
  // Drivable everywhere except a band of rows.
  const std::size_t n = 160;
  std::vector<std::uint8_t> cells(n * n, 1);
  for (std::size_t r = 70; r < 75; ++r) {
    for (std::size_t col = 0; col < n; ++col) cells[r * n + col] = 0;
  }
  save_drivable_grid(DrivableGrid(n, n, cells, 1.0, {{-80.0, -80.0}, 0.0}), dir / "grid.pgm",
                     dir / "grid.json");
  const RunConfig c = write_and_load(dir, R"({
    "schema": "argo",
    "history_len": 20,
    "horizon_steps": 30,
    "dt": 0.1,
    "window_stride": 50,
    "modes": "argo",
    "min_mode_members": 4,
    "ebm": {"max_rounds": 30, "outer_bags": 1, "num_pairs": 0},
    "paths": {"data": "argo.csv", "grid": "grid.pgm"},
    "synthetic": {"destinations": [[20, 0], [12, 8], [12, -8]], "weights": [0.4, 0.3, 0.3],
                  "agents": 400, "class": "car", "width": 1.8, "length": 4.5}
  })");
  std::ostringstream log;
  run_synth(c, log);
  const MultiModalPredictor p = run_train(c, log);
  const ClassModels& cm = p.models_for(AgentClass::kCar);
  CHECK(cm.partition.kind == PartitionKind::kGrid);
  CHECK(cm.feature_names.size() == 2 * 19 + 1 + 4 + 2 * cm.partition.size());
  // Directions without a collision point get the layout's x midpoint.
  double lo = 1e300, hi = -1e300;
  for (const Mode& m : cm.partition.modes) {
    for (const Rect& r : m.extents) {
      lo = std::min(lo, r.x0);
      hi = std::max(hi, r.x1);
    }
  }
  CHECK(p.features.poc_default == doctest::Approx(0.5 * (lo + hi)));
  CHECK(p.features.poc_default > 0.0);
  const EvalReport r = run_evaluate(c, 0, log);
  CHECK(r.k == 6);
  REQUIRE(r.unimodal_fde);
  CHECK(r.min_fde < *r.unimodal_fde);
}
