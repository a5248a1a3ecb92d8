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

#ifndef EBMTRAJ_EXPLAIN_EXPLAIN_HPP_
#define EBMTRAJ_EXPLAIN_EXPLAIN_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ebmtraj/ebm/binning.hpp"
#include "ebmtraj/ebm/model.hpp"

namespace ebmtraj {

enum class TermKind { kMain, kPair };

// Main terms index `EbmModel::shapes`, pair terms index `EbmModel::pairs`.
struct TermRef {
  TermKind kind = TermKind::kMain;
  std::size_t index = 0;

  bool operator==(const TermRef&) const = default;
};

// Every term of the model: main effects in feature order, then pairs.
std::vector<TermRef> model_terms(const EbmModel& model);

// Feature name for main terms, "a & b" for pairs.
std::string term_label(const EbmModel& model, TermRef term);

TermRef find_term(const EbmModel& model, std::string_view label);

struct ImportanceReport {
  std::vector<std::string> labels;
  std::vector<double> values;

  // Term positions sorted by descending importance (stable).
  std::vector<std::size_t> ranking() const;
  double value_of(std::string_view label) const;
};

// Mean absolute contribution of each term over the reference rows.
ImportanceReport global_importance(const EbmModel& model, const BinnedDataset& reference);

// Per-label mean of two reports; a term missing from one report counts as 0.
ImportanceReport average_importance(const ImportanceReport& a, const ImportanceReport& b);

// The stored shape of one term with its bin edges. Main terms have one entry
// per bin (the missing slot last, with NaN edges). Pair terms hold a
// row-major rows x cols grid and per-axis edges.
struct DependenceCurve {
  TermRef term;
  std::string label;
  std::vector<double> low;
  std::vector<double> high;
  std::vector<double> contributions;
  std::vector<double> populations;

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> col_low;
  std::vector<double> col_high;
};

DependenceCurve partial_dependence(const EbmModel& model, TermRef term);

struct LocalExplanation {
  double intercept = 0.0;
  std::vector<std::string> labels;
  std::vector<double> contributions;
  double prediction = 0.0;
};

LocalExplanation local_explain(const EbmModel& model, std::span<const double> features);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EXPLAIN_EXPLAIN_HPP_
