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

#include "ebmtraj/eval/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/common/log.hpp"

namespace ebmtraj {

double final_displacement(std::span<const Vec2> candidates, Vec2 truth, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (candidates.empty()) throw DataError("a sample has no predicted points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min(k, candidates.size()); ++i) {
    best = std::min(best, distance(candidates[i], truth));
  }
  return best;
}

EvalReport min_fde(std::span<const std::vector<Vec2>> predictions, std::span<const Vec2> truth,
                   std::size_t k, std::span<const AgentClass> classes) {
  if (predictions.size() != truth.size()) {
    throw DataError("prediction count " + std::to_string(predictions.size()) +
                    " does not match ground truth count " + std::to_string(truth.size()));
  }
  if (!classes.empty() && classes.size() != truth.size()) {
    throw DataError("class label count does not match the samples");
  }
  if (truth.empty()) throw DataError("no samples to evaluate");
  if (k == 0) throw ConfigError("k must be at least 1");

  EvalReport report;
  report.samples = truth.size();
  report.k = k;
  double total = 0.0;
  std::map<std::string, double> class_sums;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = final_displacement(predictions[i], truth[i], k);
    total += d;
    if (!classes.empty()) {
      const std::string name(to_string(classes[i]));
      class_sums[name] += d;
      ++report.per_class[name].samples;
    }
  }
  report.min_fde = total / static_cast<double>(truth.size());
  for (auto& [name, c] : report.per_class) {
    c.min_fde = class_sums[name] / static_cast<double>(c.samples);
  }
  return report;
}

void to_json(nlohmann::json& j, const EvalReport& r) {
  nlohmann::json classes = nlohmann::json::object();
  for (const auto& [name, c] : r.per_class) {
    classes[name] = {{"samples", c.samples}, {"min_fde", c.min_fde}};
  }
  j = nlohmann::json{{"samples", r.samples},
                     {"k", r.k},
                     {"min_fde", r.min_fde},
                     {"per_class", std::move(classes)},
                     {"removed_fraction", r.removed_fraction}};
  if (r.unimodal_fde) j["unimodal_fde"] = *r.unimodal_fde;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << "class          samples   minFDE@" << r.k << '\n';
  for (const auto& [name, c] : r.per_class) {
    out << name << std::string(name.size() < 15 ? 15 - name.size() : 1, ' ') << c.samples
        << std::string(10 - std::min<std::size_t>(9, std::to_string(c.samples).size()), ' ')
        << c.min_fde << '\n';
  }
  const std::string n = std::to_string(r.samples);
  out << "all            " << n << std::string(10 - std::min<std::size_t>(9, n.size()), ' ')
      << r.min_fde << '\n';
  if (r.unimodal_fde) out << "unimodal FDE   " << *r.unimodal_fde << '\n';
  out << "removed outliers " << r.removed_fraction * 100.0 << "%\n";
  return out.str();
}

OutlierFilter filter_outliers(std::span<const Vec2> points, const Rect& bounds) {
  if (!std::isfinite(bounds.x0) || !std::isfinite(bounds.x1) || !std::isfinite(bounds.y0) ||
      !std::isfinite(bounds.y1)) {
    throw ConfigError("outlier bounds must be finite");
  }
  OutlierFilter f;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (bounds.contains(points[i])) f.kept.push_back(i);
  }
  if (!points.empty()) {
    f.removed_fraction =
        static_cast<double>(points.size() - f.kept.size()) / static_cast<double>(points.size());
  }
  return f;
}

Rect coverage_bounds(std::span<const Vec2> points, double coverage) {
  if (points.empty()) throw DataError("cannot derive outlier bounds from no points");
  if (!(coverage > 0.0 && coverage <= 1.0)) throw ConfigError("coverage must be in (0, 1]");
  const double tail = (1.0 - coverage) / 4.0;
  auto axis = [&](auto get) {
    std::vector<double> v;
    for (Vec2 p : points) v.push_back(get(p));
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const auto cut = static_cast<std::size_t>(std::floor(tail * static_cast<double>(n)));
    return std::pair{v[cut], v[n - 1 - cut]};
  };
  const auto [x0, x1] = axis([](Vec2 p) { return p.x; });
  const auto [y0, y1] = axis([](Vec2 p) { return p.y; });
  return {x0, x1, y0, y1};
}

std::vector<std::size_t> DatasetSplit::training() const {
  std::vector<std::size_t> out = train;
  out.insert(out.end(), val.begin(), val.end());
  return out;
}

namespace {

DatasetSplit split_by_fractions(std::size_t n, const SplitSpec& spec) {
  for (double f : {spec.train, spec.val, spec.test}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("split fractions must lie in [0, 1]");
  }
  if (std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(spec.train * static_cast<double>(n)));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(spec.val * static_cast<double>(n))));
  DatasetSplit s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
               order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

DatasetSplit split_by_name(std::span<const TrajectoryRecord> records, const SplitSpec& spec) {
  const std::filesystem::path file = spec.directory / (spec.name + ".json");
  std::ifstream in(file);
  if (spec.name.empty() || !in) {
    throw ConfigError("unknown split '" + spec.name + "' (no file " + file.string() + ")");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed split file " + file.string() + ": " + e.what());
  }
  auto scenes = [&](const char* key) {
    std::set<std::string> out;
    if (doc.contains(key)) {
      for (const auto& s : doc.at(key)) out.insert(s.get<std::string>());
    }
    return out;
  };
  const std::set<std::string> train = scenes("train"), val = scenes("val"), test = scenes("test");
  DatasetSplit s;
  std::size_t unlisted = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string& scene = records[i].scene;
    if (train.count(scene)) {
      s.train.push_back(i);
    } else if (val.count(scene)) {
      s.val.push_back(i);
    } else if (test.count(scene)) {
      s.test.push_back(i);
    } else {
      ++unlisted;
    }
  }
  if (unlisted > 0) {
    warn(std::to_string(unlisted) + " records belong to scenes not listed in split '" + spec.name +
         "' and were skipped");
  }
  return s;
}

}  // namespace

DatasetSplit split_dataset(std::span<const TrajectoryRecord> records, const SplitSpec& spec) {
  if (records.empty()) throw DataError("cannot split an empty record list");
  if (spec.kind == SplitSpec::Kind::kNamed) return split_by_name(records, spec);
  return split_by_fractions(records.size(), spec);
}

}  // namespace ebmtraj
