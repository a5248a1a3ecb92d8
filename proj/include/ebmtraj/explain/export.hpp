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

#ifndef EBMTRAJ_EXPLAIN_EXPORT_HPP_
#define EBMTRAJ_EXPLAIN_EXPORT_HPP_

#include <cstddef>
#include <ostream>
#include <string>

#include "ebmtraj/explain/explain.hpp"

namespace ebmtraj {

// Shortest round-trip decimal form; "nan", "inf" and "-inf" for specials.
std::string format_number(double value);

// term,value
void write_importance_csv(std::ostream& out, const ImportanceReport& report);

// Main terms: bin_low,bin_high,contribution,population.
// Pair terms: row_low,row_high,col_low,col_high,contribution,population.
void write_dependence_csv(std::ostream& out, const DependenceCurve& curve);

// term,contribution rows framed by the intercept and the prediction.
void write_local_csv(std::ostream& out, const LocalExplanation& local);

// Horizontal bar chart of the `top_n` most important terms.
std::string importance_svg(const ImportanceReport& report, const std::string& title,
                           std::size_t top_n = 20);

// Step plot for main terms, heatmap for pair terms.
std::string dependence_svg(const DependenceCurve& curve);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EXPLAIN_EXPORT_HPP_
