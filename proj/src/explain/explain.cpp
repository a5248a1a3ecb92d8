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

#include "ebmtraj/explain/explain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_term(const EbmModel& model, TermRef term) {
  const std::size_t limit = term.kind == TermKind::kMain ? model.shapes.size() : model.pairs.size();
  if (term.index >= limit) {
    throw SchemaError(std::string("unknown ") + (term.kind == TermKind::kMain ? "main" : "pair") +
                      " term " + std::to_string(term.index));
  }
}

// Edges of every bin of a cut list, ending with the missing slot.
void bin_edges(std::span<const double> cuts, double lo, double hi, std::vector<double>& low,
               std::vector<double>& high) {
  const std::size_t value_bins = cuts.size() + 1;
  low.clear();
  high.clear();
  for (std::size_t b = 0; b < value_bins; ++b) {
    low.push_back(b == 0 ? std::min(lo, cuts.empty() ? lo : cuts.front()) : cuts[b - 1]);
    high.push_back(b + 1 == value_bins ? std::max(hi, cuts.empty() ? hi : cuts.back()) : cuts[b]);
  }
  low.push_back(kNaN);
  high.push_back(kNaN);
}

}  // namespace

std::vector<TermRef> model_terms(const EbmModel& model) {
  std::vector<TermRef> terms;
  for (std::size_t j = 0; j < model.shapes.size(); ++j) terms.push_back({TermKind::kMain, j});
  for (std::size_t k = 0; k < model.pairs.size(); ++k) terms.push_back({TermKind::kPair, k});
  return terms;
}

std::string term_label(const EbmModel& model, TermRef term) {
  check_term(model, term);
  const auto& names = model.binning.features;
  if (term.kind == TermKind::kMain) return names[model.shapes[term.index].feature].name;
  const PairShape& p = model.pairs[term.index];
  return names[p.first].name + " & " + names[p.second].name;
}

TermRef find_term(const EbmModel& model, std::string_view label) {
  for (TermRef t : model_terms(model)) {
    if (term_label(model, t) == label) return t;
  }
  throw SchemaError("model has no term named '" + std::string(label) + "'");
}

std::vector<std::size_t> ImportanceReport::ranking() const {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

double ImportanceReport::value_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return values[i];
  }
  throw SchemaError("importance report has no term named '" + std::string(label) + "'");
}

ImportanceReport global_importance(const EbmModel& model, const BinnedDataset& reference) {
  if (reference.rows == 0) throw DataError("importance needs a non-empty reference dataset");
  if (!(reference.schema == model.binning)) {
    throw SchemaError("reference dataset was binned with a different schema than the model");
  }
  ImportanceReport report;
  const double n = static_cast<double>(reference.rows);
  for (const ShapeFunction& s : model.shapes) {
    double acc = 0.0;
    for (std::uint16_t b : reference.bins[s.feature]) acc += std::abs(s.contributions[b]);
    report.labels.push_back(model.binning.features[s.feature].name);
    report.values.push_back(acc / n);
  }
  for (std::size_t k = 0; k < model.pairs.size(); ++k) {
    const PairShape& p = model.pairs[k];
    const auto& rb = reference.interaction_bins[p.first];
    const auto& cb = reference.interaction_bins[p.second];
    double acc = 0.0;
    for (std::size_t i = 0; i < reference.rows; ++i) acc += std::abs(p.at(rb[i], cb[i]));
    report.labels.push_back(term_label(model, {TermKind::kPair, k}));
    report.values.push_back(acc / n);
  }
  return report;
}

ImportanceReport average_importance(const ImportanceReport& a, const ImportanceReport& b) {
  ImportanceReport out;
  std::map<std::string, std::size_t> index;
  auto add = [&](const ImportanceReport& r) {
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      auto [it, inserted] = index.try_emplace(r.labels[i], out.labels.size());
      if (inserted) {
        out.labels.push_back(r.labels[i]);
        out.values.push_back(0.0);
      }
      out.values[it->second] += 0.5 * r.values[i];
    }
  };
  add(a);
  add(b);
  return out;
}

DependenceCurve partial_dependence(const EbmModel& model, TermRef term) {
  check_term(model, term);
  DependenceCurve curve;
  curve.term = term;
  curve.label = term_label(model, term);
  if (term.kind == TermKind::kMain) {
    const ShapeFunction& s = model.shapes[term.index];
    const FeatureBins& fb = model.binning.features[s.feature];
    bin_edges(fb.cuts, fb.min_value, fb.max_value, curve.low, curve.high);
    curve.contributions = s.contributions;
    curve.populations = s.populations;
    curve.rows = s.contributions.size();
    curve.cols = 1;
    return curve;
  }
  const PairShape& p = model.pairs[term.index];
  const FeatureBins& fa = model.binning.features[p.first];
  const FeatureBins& fb = model.binning.features[p.second];
  bin_edges(fa.interaction_cuts, fa.min_value, fa.max_value, curve.low, curve.high);
  bin_edges(fb.interaction_cuts, fb.min_value, fb.max_value, curve.col_low, curve.col_high);
  curve.contributions = p.contributions;
  curve.populations = p.populations;
  curve.rows = p.rows;
  curve.cols = p.cols;
  return curve;
}

LocalExplanation local_explain(const EbmModel& model, std::span<const double> features) {
  if (features.size() != model.feature_count()) {
    throw SchemaError("input has " + std::to_string(features.size()) +
                      " features but the model expects " + std::to_string(model.feature_count()));
  }
  LocalExplanation out;
  out.intercept = model.intercept;
  double y = model.intercept;
  for (const ShapeFunction& s : model.shapes) {
    const FeatureBins& fb = model.binning.features[s.feature];
    const double c = s.contributions[fb.bin(features[s.feature])];
    out.labels.push_back(fb.name);
    out.contributions.push_back(c);
    y += c;
  }
  for (std::size_t k = 0; k < model.pairs.size(); ++k) {
    const double c = model.pair_contribution(model.pairs[k], features);
    out.labels.push_back(term_label(model, {TermKind::kPair, k}));
    out.contributions.push_back(c);
    y += c;
  }
  out.prediction = y;
  return out;
}

}  // namespace ebmtraj
