// Copyright 2026 The ucode Authors. All Rights Reserved.
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

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ucode/assign.hpp"
#include "ucode/community.hpp"
#include "ucode/error.hpp"
#include "ucode/gcn.hpp"
#include "ucode/graph.hpp"
#include "ucode/loss.hpp"
#include "ucode/metrics.hpp"
#include "ucode/modularity.hpp"

namespace ucode {

/// Full-batch training configuration. Defaults are the non-overlapping setup.
struct TrainConfig {
  int epochs = 1000;
  double lr = 1e-3;
  int hidden = 256;
  int k = 16;
  double delta = 0.0;
  double weight_decay = 1e-1;
  std::uint64_t seed = 0;
  bool amplify = false;
  PermPolicy perm_policy = PermPolicy::resample_each_epoch;
  double dropout = 0.0;
  // Scale on Q_M before the sigmoid. Raw Q_M grows with graph size and
  // saturates the loss early; the 1/(4|E|) modularity prefactor keeps it in range.
  QmScale qm_normalization = QmScale::paper_quarter;
  double epsilon = 1e-12;

  static TrainConfig overlapping() {
    TrainConfig c;
    c.hidden = 128;
    c.weight_decay = 1e-2;
    c.delta = 0.85;
    return c;
  }

  LossConfig loss_config() const {
    LossConfig l;
    l.delta = delta;
    l.amplify = amplify;
    l.perm_policy = perm_policy;
    l.epsilon = epsilon;
    l.normalization = qm_normalization;
    return l;
  }

  void check() const {
    if (epochs < 1) throw InputError("epochs must be >= 1");
    if (!(lr > 0.0)) throw InputError("learning rate must be positive");
    if (hidden < 1) throw InputError("hidden size must be positive");
    if (k < 2) throw InputError("k must be >= 2");
    if (!(weight_decay >= 0.0)) throw InputError("weight decay must be non-negative");
    loss_config().check();
  }
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double trace_qm = 0.0;    // trace of the unscaled Q_M of the training output
  double modularity = 0.0;  // standard_half modularity of its hard assignment
  double seconds = 0.0;     // wall time since training started
};

struct TrainHistory {
  std::vector<EpochRecord> records;

  /// Mean loss over the first / last `fraction` of epochs (at least one).
  double head_mean(double fraction = 0.1) const { return window_mean(fraction, true); }
  double tail_mean(double fraction = 0.1) const { return window_mean(fraction, false); }

 private:
  double window_mean(double fraction, bool head) const {
    if (records.empty()) return 0.0;
    auto w = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(records.size())));
    w = std::max<std::size_t>(1, std::min(w, records.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < w; ++i) s += records[head ? i : records.size() - 1 - i].loss;
    return s / static_cast<double>(w);
  }
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
  Matrix output;  // eval-mode network output, unbounded
  Matrix hidden;  // eval-mode first-layer representation

  CommunityAssignment assignment() const { return CommunityAssignment::clamped(output); }
};

namespace detail {

inline Matrix clamp01(const Matrix& m) { return m.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace detail

/// Trains the two-layer network on one graph. Deterministic given cfg.seed.
///
/// Each epoch: train-mode forward, loss against a derangement (resampled or
/// fixed per cfg.perm_policy), backward, Adam step. The raw network output
/// feeds the loss; with amplify on, its [0,1]-clamped copy does.
inline TrainResult train(const AttributedGraph& g, const TrainConfig& cfg) {
  cfg.check();
  if (g.num_edges() == 0) throw InputError("training needs a graph with at least one edge");
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(cfg.seed);
  const SparseSymMatrix ahat = normalized_adjacency(g);
  const LossConfig loss_cfg = cfg.loss_config();
  const double scale = qm_scale_factor(g, cfg.qm_normalization);

  TrainResult res;
  res.params = init_params(g.feature_dim(), cfg.hidden, cfg.k, rng);
  AdamState adam = AdamState::zeros_like(res.params);
  const Permutation fixed = sample_permutation(cfg.k, rng);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const ForwardCache cache = forward(ahat, g.features(), res.params, Mode::train, rng, cfg.dropout);
    const Permutation perm =
        cfg.perm_policy == PermPolicy::resample_each_epoch ? sample_permutation(cfg.k, rng) : fixed;
    const Matrix loss_input = cfg.amplify ? detail::clamp01(cache.output) : cache.output;
    LossEvaluation ev = evaluate_loss(g, loss_input, loss_cfg, perm, true);
    if (!std::isfinite(ev.loss))
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch), epoch);
    if (cfg.amplify) {
      // clamp passes gradient only inside the box
      ev.grad_c = ev.grad_c.binaryExpr(cache.output, [](double gr, double v) {
        return (v >= 0.0 && v <= 1.0) ? gr : 0.0;
      });
    }
    const ModelGrads grads = backward(ahat, res.params, cache, ev.grad_c);
    update_running_stats(res.params, cache);
    adam_step(res.params, grads, adam, cfg.lr, cfg.weight_decay);
    if (!res.params.all_finite())
      throw NumericError("non-finite parameters at epoch " + std::to_string(epoch), epoch);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = ev.loss;
    rec.trace_qm = ev.qm.trace() / scale;
    rec.modularity = modularity_score(g, hard_assign(detail::clamp01(cache.output)));
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.history.records.push_back(rec);
  }

  const ForwardCache final_pass = forward_eval(ahat, g.features(), res.params);
  res.output = final_pass.output;
  res.hidden = final_pass.hidden;
  return res;
}

enum class EvalMode { hard, overlap };

/// Named scores in report order; values in [0,1] unless scaled.
struct MetricsReport {
  std::vector<std::pair<std::string, double>> entries;
  double scale = 100.0;

  void add(std::string name, double raw_value) { entries.emplace_back(std::move(name), raw_value); }

  std::optional<double> get(const std::string& name) const {
    for (const auto& [k, v] : entries)
      if (k == name) return v * scale;
    return std::nullopt;
  }
};

using Prediction = std::variant<Partition, Cover>;

/// Scores a prediction against ground truth. Graph-dependent scores
/// (conductance, modularity) are added only when `g` is given.
inline MetricsReport evaluate_prediction(const AttributedGraph* g, const Prediction& pred,
                                         const GroundTruth& truth, EvalMode mode,
                                         double scale = 100.0) {
  MetricsReport r;
  r.scale = scale;
  if (mode == EvalMode::hard) {
    const auto* t = std::get_if<Partition>(&truth);
    const auto* p = std::get_if<Partition>(&pred);
    if (!t || !p) throw InputError("hard mode needs a partition for both truth and prediction");
    r.add("nmi", nmi(*t, *p));
    r.add("f1", pairwise_f1(*t, *p));
    if (g) {
      if (static_cast<int>(p->size()) != g->num_nodes())
        throw InputError("prediction has " + std::to_string(p->size()) + " nodes, graph has " +
                         std::to_string(g->num_nodes()));
      r.add("conductance", conductance(*g, *p).mean);
      r.add("modularity", modularity_score(*g, *p, ModularityNorm::standard_half));
      r.add("modularity_quarter", modularity_score(*g, *p, ModularityNorm::paper_quarter));
    }
    return r;
  }
  const auto* t = std::get_if<Cover>(&truth);
  const auto* p = std::get_if<Cover>(&pred);
  if (!t || !p) throw InputError("overlap mode needs a cover for both truth and prediction");
  r.add("onmi", onmi(*t, *p));
  r.add("recall", recall_best_match(*t, *p));
  r.add("f1", pairwise_f1(*t, *p));
  if (g) {
    if (p->n != static_cast<std::size_t>(g->num_nodes()))
      throw InputError("prediction has " + std::to_string(p->n) + " nodes, graph has " +
                       std::to_string(g->num_nodes()));
    r.add("conductance", conductance(*g, *p).mean);
    const auto c = CommunityAssignment::indicator(*p);
    r.add("modularity", modularity_score(*g, c, ModularityNorm::standard_half));
    r.add("modularity_quarter", modularity_score(*g, c, ModularityNorm::paper_quarter));
  }
  return r;
}

/// Converts a soft assignment (argmax, or exp-mean threshold in overlap
/// mode) and scores it.
inline MetricsReport evaluate(const AttributedGraph& g, const CommunityAssignment& c,
                              const GroundTruth& truth, EvalMode mode, double scale = 100.0) {
  if (mode == EvalMode::hard) {
    if (!std::holds_alternative<Partition>(truth))
      throw InputError("hard mode needs partition ground truth");
    return evaluate_prediction(&g, hard_assign(c), truth, mode, scale);
  }
  if (!std::holds_alternative<Cover>(truth))
    throw InputError("overlap mode needs cover ground truth");
  return evaluate_prediction(&g, overlap_assign(c, threshold_p1(c)), truth, mode, scale);
}

}  // namespace ucode
