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

#include "ebmtraj/ebm/booster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

constexpr double kRelativeMinGain = 1e-12;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct BagSample {
  std::vector<std::uint32_t> train_rows;
  std::vector<double> train_weights;
  std::vector<std::uint32_t> validation_rows;
};

// Validation rows are held out first; the training bag is a bootstrap of the
// remainder (or the whole remainder when there is a single bag).
BagSample draw_bag(std::size_t n, const EbmHyperparams& hp, std::size_t bag, std::uint64_t salt) {
  std::mt19937_64 rng(mix_seed(hp.rng_seed, bag, salt));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  std::size_t n_val = 0;
  if (hp.early_stop_patience > 0 && n >= 2) {
    std::shuffle(order.begin(), order.end(), rng);
    n_val = static_cast<std::size_t>(std::llround(hp.validation_fraction * static_cast<double>(n)));
    n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  }
  BagSample bag_sample;
  bag_sample.validation_rows.assign(order.begin(), order.begin() + n_val);
  std::vector<std::uint32_t> pool(order.begin() + n_val, order.end());
  std::sort(bag_sample.validation_rows.begin(), bag_sample.validation_rows.end());
  std::sort(pool.begin(), pool.end());

  if (hp.outer_bags == 1) {
    bag_sample.train_rows = std::move(pool);
    bag_sample.train_weights.assign(bag_sample.train_rows.size(), 1.0);
    return bag_sample;
  }
  std::vector<std::uint32_t> counts(pool.size(), 0);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t i = 0; i < pool.size(); ++i) ++counts[pick(rng)];
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (counts[i] == 0) continue;
    bag_sample.train_rows.push_back(pool[i]);
    bag_sample.train_weights.push_back(static_cast<double>(counts[i]));
  }
  return bag_sample;
}

// A term's cells form a rows x cols grid; main effects use cols == 1.
struct TermLayout {
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::size_t cells() const { return rows * cols; }
};

struct Histogram {
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::vector<double> sums;
  std::vector<double> weights;
};

class RegionTree {
 public:
  explicit RegionTree(const Histogram& h) : h_(h), stride_(h.cols + 1) {
    ps_.assign((h.rows + 1) * stride_, 0.0);
    pw_.assign((h.rows + 1) * stride_, 0.0);
    for (std::size_t r = 0; r < h.rows; ++r) {
      for (std::size_t c = 0; c < h.cols; ++c) {
        const std::size_t cell = r * h.cols + c;
        at(ps_, r + 1, c + 1) = h.sums[cell] + at(ps_, r, c + 1) + at(ps_, r + 1, c) - at(ps_, r, c);
        at(pw_, r + 1, c + 1) =
            h.weights[cell] + at(pw_, r, c + 1) + at(pw_, r + 1, c) - at(pw_, r, c);
      }
    }
    double full_fit = 0.0;
    for (std::size_t cell = 0; cell < h.sums.size(); ++cell) {
      if (h.weights[cell] > 0.0) full_fit += h.sums[cell] * h.sums[cell] / h.weights[cell];
    }
    min_gain_ = kRelativeMinGain * full_fit;
  }

  // Best-first growth up to `max_leaves` leaves. Writes each cell's leaf
  // mean into `values` and returns false when no split was worth making.
  bool grow(std::size_t max_leaves, std::vector<double>& values) {
    std::vector<Region> leaves;
    leaves.push_back(evaluate({0, h_.rows, 0, h_.cols}));
    while (leaves.size() < max_leaves) {
      std::size_t best = leaves.size();
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].gain > min_gain_ &&
            (best == leaves.size() || leaves[i].gain > leaves[best].gain)) {
          best = i;
        }
      }
      if (best == leaves.size()) break;
      Region parent = leaves[best];
      Region lo = parent;
      Region hi = parent;
      if (parent.split_axis == 0) {
        lo.r1 = parent.split_at;
        hi.r0 = parent.split_at;
      } else {
        lo.c1 = parent.split_at;
        hi.c0 = parent.split_at;
      }
      leaves[best] = evaluate(lo);
      leaves.insert(leaves.begin() + static_cast<std::ptrdiff_t>(best) + 1, evaluate(hi));
    }
    if (leaves.size() < 2) return false;
    values.assign(h_.rows * h_.cols, 0.0);
    for (const Region& leaf : leaves) {
      const double v = leaf.weight > 0.0 ? leaf.sum / leaf.weight : 0.0;
      for (std::size_t r = leaf.r0; r < leaf.r1; ++r) {
        for (std::size_t c = leaf.c0; c < leaf.c1; ++c) values[r * h_.cols + c] = v;
      }
    }
    return true;
  }

 private:
  struct Region {
    std::size_t r0, r1, c0, c1;
    double sum = 0.0;
    double weight = 0.0;
    double gain = 0.0;
    int split_axis = 0;
    std::size_t split_at = 0;
  };

  double& at(std::vector<double>& v, std::size_t r, std::size_t c) { return v[r * stride_ + c]; }
  double rect(const std::vector<double>& v, std::size_t r0, std::size_t r1, std::size_t c0,
              std::size_t c1) const {
    return v[r1 * stride_ + c1] - v[r0 * stride_ + c1] - v[r1 * stride_ + c0] + v[r0 * stride_ + c0];
  }

  Region evaluate(Region reg) const {
    reg.sum = rect(ps_, reg.r0, reg.r1, reg.c0, reg.c1);
    reg.weight = rect(pw_, reg.r0, reg.r1, reg.c0, reg.c1);
    reg.gain = 0.0;
    if (reg.weight <= 0.0) return reg;
    const double parent = reg.sum * reg.sum / reg.weight;
    auto consider = [&](int axis, std::size_t k, double s_lo, double w_lo) {
      const double w_hi = reg.weight - w_lo;
      if (w_lo <= 0.0 || w_hi <= 0.0) return;
      const double s_hi = reg.sum - s_lo;
      const double gain = s_lo * s_lo / w_lo + s_hi * s_hi / w_hi - parent;
      if (gain > reg.gain) {
        reg.gain = gain;
        reg.split_axis = axis;
        reg.split_at = k;
      }
    };
    for (std::size_t k = reg.r0 + 1; k < reg.r1; ++k) {
      consider(0, k, rect(ps_, reg.r0, k, reg.c0, reg.c1), rect(pw_, reg.r0, k, reg.c0, reg.c1));
    }
    for (std::size_t k = reg.c0 + 1; k < reg.c1; ++k) {
      consider(1, k, rect(ps_, reg.r0, reg.r1, reg.c0, k), rect(pw_, reg.r0, reg.r1, reg.c0, k));
    }
    return reg;
  }

  const Histogram& h_;
  std::size_t stride_;
  std::vector<double> ps_;
  std::vector<double> pw_;
  double min_gain_ = 0.0;
};

struct BagResult {
  double offset = 0.0;
  std::vector<std::vector<double>> values;       // per term, per cell
  std::vector<std::vector<double>> populations;  // per term, per cell (bag weights)
  std::size_t rounds = 0;
};

struct BoostProblem {
  std::vector<TermLayout> layouts;
  std::vector<std::vector<std::uint32_t>> cells;  // per term, cell of every row
  std::vector<bool> learnable;
  std::span<const double> base;  // quantity to fit, per row
  bool fit_offset = true;
};

double rmse(std::span<const double> r) {
  if (r.empty()) return 0.0;
  double acc = 0.0;
  for (double v : r) acc += v * v;
  return std::sqrt(acc / static_cast<double>(r.size()));
}

BagResult boost_bag(const BoostProblem& prob, const BagSample& sample, const EbmHyperparams& hp,
                    std::size_t bag, const RoundObserver& observer) {
  const std::size_t n_terms = prob.layouts.size();
  const std::size_t n_train = sample.train_rows.size();
  const std::size_t n_val = sample.validation_rows.size();
  const std::vector<double>& w = sample.train_weights;
  const double total_w = std::accumulate(w.begin(), w.end(), 0.0);

  BagResult out;
  if (prob.fit_offset) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_train; ++i) acc += w[i] * prob.base[sample.train_rows[i]];
    out.offset = acc / total_w;
  }

  std::vector<double> res(n_train);
  std::vector<double> val_res(n_val);
  for (std::size_t i = 0; i < n_train; ++i) res[i] = prob.base[sample.train_rows[i]] - out.offset;
  for (std::size_t i = 0; i < n_val; ++i) {
    val_res[i] = prob.base[sample.validation_rows[i]] - out.offset;
  }

  // Compact per-bag copies of each term's cell indices.
  std::vector<std::vector<std::uint32_t>> train_cells(n_terms), val_cells(n_terms);
  out.values.resize(n_terms);
  out.populations.resize(n_terms);
  for (std::size_t t = 0; t < n_terms; ++t) {
    const auto& all = prob.cells[t];
    train_cells[t].resize(n_train);
    val_cells[t].resize(n_val);
    for (std::size_t i = 0; i < n_train; ++i) train_cells[t][i] = all[sample.train_rows[i]];
    for (std::size_t i = 0; i < n_val; ++i) val_cells[t][i] = all[sample.validation_rows[i]];
    out.values[t].assign(prob.layouts[t].cells(), 0.0);
    out.populations[t].assign(prob.layouts[t].cells(), 0.0);
    for (std::size_t i = 0; i < n_train; ++i) out.populations[t][train_cells[t][i]] += w[i];
  }

  const bool use_validation = n_val > 0 && hp.early_stop_patience > 0;
  double best_val = use_validation ? rmse(val_res) : 0.0;
  std::vector<std::vector<double>> best_values = out.values;
  std::size_t best_round = 0;
  std::size_t stall = 0;

  Histogram hist;
  std::vector<double> leaf_values;
  std::vector<double> update;
  std::size_t round = 0;
  while (round < hp.max_rounds) {
    ++round;
    bool changed = false;
    for (std::size_t t = 0; t < n_terms; ++t) {
      if (!prob.learnable[t]) continue;
      const TermLayout& layout = prob.layouts[t];
      hist.rows = layout.rows;
      hist.cols = layout.cols;
      hist.sums.assign(layout.cells(), 0.0);
      hist.weights = out.populations[t];
      const std::uint32_t* tc = train_cells[t].data();
      for (std::size_t i = 0; i < n_train; ++i) hist.sums[tc[i]] += w[i] * res[i];

      RegionTree tree(hist);
      if (!tree.grow(hp.max_leaves, leaf_values)) continue;
      changed = true;
      update.resize(leaf_values.size());
      std::vector<double>& values = out.values[t];
      for (std::size_t c = 0; c < leaf_values.size(); ++c) {
        update[c] = hp.learning_rate * leaf_values[c];
        values[c] += update[c];
      }
      for (std::size_t i = 0; i < n_train; ++i) res[i] -= update[tc[i]];
      const std::uint32_t* vc = val_cells[t].data();
      for (std::size_t i = 0; i < n_val; ++i) val_res[i] -= update[vc[i]];
    }

    if (observer) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n_train; ++i) acc += w[i] * res[i] * res[i];
      observer(bag, round, std::sqrt(acc / total_w));
    }
    if (!changed) break;
    if (use_validation) {
      const double v = rmse(val_res);
      if (v < best_val) {
        best_val = v;
        best_values = out.values;
        best_round = round;
        stall = 0;
      } else if (++stall >= hp.early_stop_patience) {
        break;
      }
    }
  }
  if (use_validation) {
    out.values = std::move(best_values);
    out.rounds = best_round;
  } else {
    out.rounds = round;
  }
  return out;
}

std::vector<BagResult> run_bags(const BoostProblem& prob, std::size_t n, const EbmHyperparams& hp,
                                std::uint64_t salt, const RoundObserver& observer) {
  std::vector<BagSample> samples;
  samples.reserve(hp.outer_bags);
  for (std::size_t b = 0; b < hp.outer_bags; ++b) samples.push_back(draw_bag(n, hp, b, salt));

  std::vector<BagResult> results(hp.outer_bags);
  const bool parallel = !observer && hp.outer_bags > 1 && std::thread::hardware_concurrency() > 1;
  if (parallel) {
    std::vector<std::future<BagResult>> futures;
    for (std::size_t b = 0; b < hp.outer_bags; ++b) {
      futures.push_back(std::async(std::launch::async, [&, b] {
        return boost_bag(prob, samples[b], hp, b, observer);
      }));
    }
    for (std::size_t b = 0; b < hp.outer_bags; ++b) results[b] = futures[b].get();
  } else {
    for (std::size_t b = 0; b < hp.outer_bags; ++b) {
      results[b] = boost_bag(prob, samples[b], hp, b, observer);
    }
  }
  return results;
}

struct CombinedTerms {
  double offset = 0.0;
  std::vector<std::vector<double>> values;
};

// Centers every bag's terms on its own population, averages the bags with
// per-cell population weights, then recenters on the full-data populations.
CombinedTerms combine_bags(std::vector<BagResult>& bags,
                           const std::vector<std::vector<double>>& full_populations) {
  CombinedTerms out;
  const std::size_t n_terms = full_populations.size();
  for (BagResult& bag : bags) {
    for (std::size_t t = 0; t < n_terms; ++t) {
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c < bag.values[t].size(); ++c) {
        num += bag.populations[t][c] * bag.values[t][c];
        den += bag.populations[t][c];
      }
      if (den <= 0.0) continue;
      const double mean = num / den;
      for (double& v : bag.values[t]) v -= mean;
      bag.offset += mean;
    }
    out.offset += bag.offset;
  }
  out.offset /= static_cast<double>(bags.size());

  out.values.resize(n_terms);
  for (std::size_t t = 0; t < n_terms; ++t) {
    const std::size_t cells = full_populations[t].size();
    out.values[t].assign(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
      double num = 0.0, den = 0.0, plain = 0.0;
      for (const BagResult& bag : bags) {
        num += bag.populations[t][c] * bag.values[t][c];
        den += bag.populations[t][c];
        plain += bag.values[t][c];
      }
      out.values[t][c] = den > 0.0 ? num / den : plain / static_cast<double>(bags.size());
    }
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      num += full_populations[t][c] * out.values[t][c];
      den += full_populations[t][c];
    }
    if (den > 0.0) {
      const double mean = num / den;
      for (double& v : out.values[t]) v -= mean;
      out.offset += mean;
    }
  }
  return out;
}

void check_targets(const BinnedDataset& binned, std::span<const double> targets) {
  if (targets.size() != binned.rows) {
    throw SchemaError("got " + std::to_string(targets.size()) + " targets for " +
                      std::to_string(binned.rows) + " rows");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!std::isfinite(targets[i])) {
      throw DataError("target at row " + std::to_string(i) + " is not finite");
    }
  }
}

double residual_spread(const EbmModel& model, const BinnedDataset& binned,
                       std::span<const double> targets) {
  const std::size_t n = binned.rows;
  std::vector<double> r(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = targets[i] - predict_binned(model, binned, i);
    mean += r[i];
  }
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (double v : r) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

EbmModel fit_main_effects(const BinnedDataset& binned, std::span<const double> targets,
                          const EbmHyperparams& hp, const RoundObserver& observer) {
  hp.validate();
  check_targets(binned, targets);
  const std::size_t n = binned.rows;
  if (n < 2) throw DataError("need at least 2 rows to fit, got " + std::to_string(n));
  if (binned.features() != binned.schema.size()) {
    throw SchemaError("binned dataset does not match its schema");
  }

  EbmModel model = make_empty_model(binned.schema);
  model.hyperparams = hp;
  model.info.seed = hp.rng_seed;

  BoostProblem prob;
  prob.base = targets;
  std::vector<std::vector<double>> full_pop(binned.features());
  bool any_learnable = false;
  for (std::size_t j = 0; j < binned.features(); ++j) {
    const FeatureBins& fb = binned.schema.features[j];
    prob.layouts.push_back({fb.bin_count(), 1});
    prob.cells.emplace_back(binned.bins[j].begin(), binned.bins[j].end());
    full_pop[j].assign(fb.bin_count(), 0.0);
    for (std::uint16_t b : binned.bins[j]) full_pop[j][b] += 1.0;
    const auto occupied = std::count_if(full_pop[j].begin(), full_pop[j].end(),
                                        [](double p) { return p > 0.0; });
    prob.learnable.push_back(occupied >= 2);
    any_learnable = any_learnable || occupied >= 2;
    model.shapes[j].populations = full_pop[j];
  }

  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  if (!any_learnable || *lo == *hi) {
    if (*lo == *hi) {
      model.intercept = *lo;
    } else {
      model.intercept = std::accumulate(targets.begin(), targets.end(), 0.0) /
                        static_cast<double>(n);
    }
    model.residual_sigma = residual_spread(model, binned, targets);
    return model;
  }

  std::vector<BagResult> bags = run_bags(prob, n, hp, /*salt=*/0, observer);
  for (const BagResult& bag : bags) model.info.main_rounds.push_back(bag.rounds);
  CombinedTerms combined = combine_bags(bags, full_pop);
  model.intercept = combined.offset;
  for (std::size_t j = 0; j < binned.features(); ++j) {
    model.shapes[j].contributions = std::move(combined.values[j]);
  }
  model.residual_sigma = residual_spread(model, binned, targets);
  return model;
}

std::vector<PairScore> detect_interactions(const EbmModel& model, const BinnedDataset& binned,
                                           std::span<const double> targets,
                                           const EbmHyperparams& hp) {
  (void)hp;
  check_targets(binned, targets);
  if (binned.schema != model.binning) {
    throw SchemaError("binned dataset was built with a different binning schema");
  }
  const std::size_t p = binned.features();
  std::vector<PairScore> scores;
  if (p < 2 || binned.rows == 0) return scores;

  const std::size_t n = binned.rows;
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = targets[i] - predict_binned(model, binned, i);

  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) {
      const std::size_t rows = binned.schema.features[j].interaction_bin_count();
      const std::size_t cols = binned.schema.features[k].interaction_bin_count();
      // Prefix sums over the grid: P[r][c] covers [0, r) x [0, c).
      const std::size_t stride = cols + 1;
      std::vector<double> ps((rows + 1) * stride, 0.0), pw((rows + 1) * stride, 0.0);
      const auto& bj = binned.interaction_bins[j];
      const auto& bk = binned.interaction_bins[k];
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cell = (bj[i] + 1) * stride + (bk[i] + 1);
        ps[cell] += res[i];
        pw[cell] += 1.0;
      }
      for (std::size_t r = 1; r <= rows; ++r) {
        for (std::size_t c = 1; c <= cols; ++c) {
          const std::size_t at = r * stride + c;
          ps[at] += ps[at - stride] + ps[at - 1] - ps[at - stride - 1];
          pw[at] += pw[at - stride] + pw[at - 1] - pw[at - stride - 1];
        }
      }
      auto rect = [&](const std::vector<double>& v, std::size_t r0, std::size_t r1,
                      std::size_t c0, std::size_t c1) {
        return v[r1 * stride + c1] - v[r0 * stride + c1] - v[r1 * stride + c0] +
               v[r0 * stride + c0];
      };
      const double total_s = rect(ps, 0, rows, 0, cols);
      const double total_w = rect(pw, 0, rows, 0, cols);
      const double parent = total_s * total_s / total_w;
      double best = 0.0;
      for (std::size_t a = 1; a < rows; ++a) {
        for (std::size_t b = 1; b < cols; ++b) {
          double fit = 0.0;
          const std::size_t rs[3] = {0, a, rows};
          const std::size_t cs[3] = {0, b, cols};
          for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
              const double cw = rect(pw, rs[u], rs[u + 1], cs[v], cs[v + 1]);
              if (cw <= 0.0) continue;
              const double cs_sum = rect(ps, rs[u], rs[u + 1], cs[v], cs[v + 1]);
              fit += cs_sum * cs_sum / cw;
            }
          }
          best = std::max(best, fit - parent);
        }
      }
      scores.push_back({{j, k}, best / static_cast<double>(n)});
    }
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const PairScore& a, const PairScore& b) { return a.score > b.score; });
  return scores;
}

EbmModel fit_pairs(EbmModel model, const BinnedDataset& binned, std::span<const double> targets,
                   std::span<const FeaturePair> pairs, const EbmHyperparams& hp,
                   const RoundObserver& observer) {
  if (pairs.empty()) return model;
  hp.validate();
  check_targets(binned, targets);
  if (binned.schema != model.binning) {
    throw SchemaError("binned dataset was built with a different binning schema");
  }
  const std::size_t n = binned.rows;
  const std::size_t p = binned.features();
  if (n < 2) throw DataError("need at least 2 rows to fit pairs, got " + std::to_string(n));

  std::vector<FeaturePair> wanted;
  for (FeaturePair fp : pairs) {
    if (fp.first >= p || fp.second >= p) {
      throw SchemaError("pair (" + std::to_string(fp.first) + ", " + std::to_string(fp.second) +
                        ") is out of range for " + std::to_string(p) + " features");
    }
    if (fp.first == fp.second) {
      throw SchemaError("pair (" + std::to_string(fp.first) + ", " + std::to_string(fp.second) +
                        ") repeats a feature");
    }
    if (fp.first > fp.second) std::swap(fp.first, fp.second);
    const bool dup = std::find(wanted.begin(), wanted.end(), fp) != wanted.end() ||
                     std::any_of(model.pairs.begin(), model.pairs.end(), [&](const PairShape& s) {
                       return s.first == fp.first && s.second == fp.second;
                     });
    if (dup) {
      throw SchemaError("pair (" + std::to_string(fp.first) + ", " + std::to_string(fp.second) +
                        ") is listed twice");
    }
    wanted.push_back(fp);
  }

  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = targets[i] - predict_binned(model, binned, i);

  BoostProblem prob;
  prob.base = base;
  prob.fit_offset = false;
  std::vector<std::vector<double>> full_pop;
  for (const FeaturePair& fp : wanted) {
    const std::size_t rows = binned.schema.features[fp.first].interaction_bin_count();
    const std::size_t cols = binned.schema.features[fp.second].interaction_bin_count();
    prob.layouts.push_back({rows, cols});
    std::vector<std::uint32_t> cells(n);
    std::vector<double> pop(rows * cols, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cells[i] = static_cast<std::uint32_t>(binned.interaction_bins[fp.first][i] * cols +
                                            binned.interaction_bins[fp.second][i]);
      pop[cells[i]] += 1.0;
    }
    const auto occupied = std::count_if(pop.begin(), pop.end(), [](double v) { return v > 0.0; });
    prob.learnable.push_back(occupied >= 2);
    prob.cells.push_back(std::move(cells));
    full_pop.push_back(std::move(pop));
  }

  std::vector<BagResult> bags = run_bags(prob, n, hp, /*salt=*/1, observer);
  model.info.pair_rounds.clear();
  for (const BagResult& bag : bags) model.info.pair_rounds.push_back(bag.rounds);
  CombinedTerms combined = combine_bags(bags, full_pop);
  model.intercept += combined.offset;
  for (std::size_t t = 0; t < wanted.size(); ++t) {
    PairShape shape;
    shape.first = wanted[t].first;
    shape.second = wanted[t].second;
    shape.rows = prob.layouts[t].rows;
    shape.cols = prob.layouts[t].cols;
    shape.contributions = std::move(combined.values[t]);
    shape.populations = std::move(full_pop[t]);
    model.pairs.push_back(std::move(shape));
  }
  model.residual_sigma = residual_spread(model, binned, targets);
  return model;
}

EbmModel train_ebm(const FeatureMatrix& features, std::span<const double> targets,
                   const EbmHyperparams& hp, std::span<const std::string> names) {
  hp.validate();
  BinningSchema schema = build_bins(features, hp, names);
  BinnedDataset binned = apply_bins(schema, features);
  EbmModel model = fit_main_effects(binned, targets, hp);
  if (hp.num_pairs == 0 || binned.features() < 2) return model;

  std::vector<FeaturePair> chosen;
  for (const PairScore& s : detect_interactions(model, binned, targets, hp)) {
    if (chosen.size() >= hp.num_pairs) break;
    if (s.score > 0.0) chosen.push_back(s.pair);
  }
  return fit_pairs(std::move(model), binned, targets, chosen, hp);
}

}  // namespace ebmtraj
