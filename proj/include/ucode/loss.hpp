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

// Contrastive community-modularity loss.
//
// For a k x k community modularity matrix Q and a derangement p of the
// communities, the loss is
//
//   L = -1/(2k) sum_i [ y_i log s(Q_ii) + (1 - y_{k+i}) log(1 - s(Q_{p(i),i})) ]
//
// with s the logistic sigmoid and y = (1,...,1, delta,...,delta). The first
// term pulls every community's own modularity up; the second pushes the
// modularity between community i and a different community p(i) down, with
// delta relaxing the push so that shared members are not penalized fully.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ucode/error.hpp"
#include "ucode/graph.hpp"
#include "ucode/modularity.hpp"

namespace ucode {

struct TargetVector {
  std::vector<double> y;  // length 2k

  int k() const { return static_cast<int>(y.size() / 2); }
  double delta() const { return y.empty() ? 0.0 : y.back(); }
};

inline TargetVector target_vector(int k, double delta) {
  if (k < 2) throw InputError("target vector needs k >= 2, got " + std::to_string(k));
  if (!(delta >= 0.0 && delta < 1.0))
    throw InputError("delta must lie in [0,1), got " + std::to_string(delta));
  TargetVector t;
  t.y.assign(static_cast<std::size_t>(2 * k), 1.0);
  std::fill(t.y.begin() + k, t.y.end(), delta);
  return t;
}

enum class PermPolicy { fixed_derangement, resample_each_epoch };

/// Scale applied to Q_M before the sigmoid.
enum class QmScale {
  raw,            // Q_M as is
  paper_quarter,  // Q_M / (4|E|)
  standard_half,  // Q_M / (2|E|)
};

struct LossConfig {
  double delta = 0.0;
  bool amplify = false;
  PermPolicy perm_policy = PermPolicy::resample_each_epoch;
  double epsilon = 1e-12;
  QmScale normalization = QmScale::raw;

  void check() const {
    if (!(delta >= 0.0 && delta < 1.0))
      throw InputError("delta must lie in [0,1), got " + std::to_string(delta));
    if (!(epsilon > 0.0 && epsilon <= 1e-6))
      throw InputError("epsilon must lie in (0, 1e-6], got " + std::to_string(epsilon));
  }
};

/// A bijection on {0..k-1}; p[i] is the row paired with column i.
struct Permutation {
  std::vector<int> p;

  int k() const { return static_cast<int>(p.size()); }

  bool is_derangement() const {
    std::vector<char> seen(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= k() || seen[static_cast<std::size_t>(p[i])]) return false;
      seen[static_cast<std::size_t>(p[i])] = 1;
      if (p[i] == static_cast<int>(i)) return false;
    }
    return true;
  }

  /// i -> i+1 mod k; the swap when k = 2.
  static Permutation cyclic_shift(int k) {
    Permutation out;
    out.p.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.p[static_cast<std::size_t>(i)] = (i + 1) % k;
    return out;
  }
};

/// Uniform derangement by rejection: shuffle until no fixed point
/// (expected ~e draws).
template <class Rng>
Permutation sample_permutation(int k, Rng& rng) {
  if (k < 2) throw InputError("a derangement needs k >= 2");
  Permutation out;
  out.p.resize(static_cast<std::size_t>(k));
  do {
    std::iota(out.p.begin(), out.p.end(), 0);
    // Fisher-Yates with our own index draws so the sequence does not depend
    // on the standard library's shuffle implementation.
    for (int i = k - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(out.p[static_cast<std::size_t>(i)], out.p[static_cast<std::size_t>(pick(rng))]);
    }
  } while (!out.is_derangement());
  return out;
}

namespace detail {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace detail

/// Row-normalize, then elementwise log with entries floored at epsilon.
/// Rows summing to zero become uniform 1/k.
inline Matrix amplify(const Matrix& c, double epsilon) {
  const auto k = c.cols();
  Matrix out(c.rows(), k);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const double s = c.row(i).sum();
    for (Eigen::Index j = 0; j < k; ++j) {
      const double v = s > 0.0 ? c(i, j) / s : 1.0 / static_cast<double>(k);
      out(i, j) = std::log(std::max(v, epsilon));
    }
  }
  return out;
}

inline void check_loss_dims(const Matrix& qm, const TargetVector& y, const Permutation& perm) {
  if (qm.rows() != qm.cols())
    throw InputError("community modularity matrix must be square");
  if (y.k() != qm.rows() || static_cast<Eigen::Index>(y.y.size()) != 2 * qm.rows())
    throw InputError("target vector has length " + std::to_string(y.y.size()) + ", expected " +
                     std::to_string(2 * qm.rows()));
  if (perm.k() != qm.rows())
    throw InputError("permutation has size " + std::to_string(perm.k()) + ", expected " +
                     std::to_string(qm.rows()));
  if (!perm.is_derangement()) throw InputError("permutation must be a derangement");
}

/// Loss value for a given community modularity matrix.
///
/// log s(x) is evaluated in its stable form and floored at log(epsilon); there
/// is no ceiling at log(1 - epsilon), so saturated configurations still order
/// correctly.
inline double ucode_loss(const Matrix& qm, const TargetVector& y, const Permutation& perm,
                         double epsilon = 1e-12) {
  check_loss_dims(qm, y, perm);
  const int k = y.k();
  const double floor = std::log(epsilon);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double intra = std::max(detail::log_sigmoid(qm(i, i)), floor);
    const double inter = std::max(detail::log_sigmoid(-qm(perm.p[ii], i)), floor);
    sum += y.y[ii] * intra + (1.0 - y.y[ii + static_cast<std::size_t>(k)]) * inter;
  }
  return -sum / (2.0 * k);
}

/// dL/dQ_M. Non-zero only on the diagonal and the permuted diagonal.
inline Matrix ucode_loss_grad_qm(const Matrix& qm, const TargetVector& y, const Permutation& perm,
                                 double epsilon = 1e-12) {
  check_loss_dims(qm, y, perm);
  const int k = y.k();
  const double floor = std::log(epsilon);
  const double scale = -1.0 / (2.0 * k);
  Matrix g = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double qd = qm(i, i);
    if (detail::log_sigmoid(qd) > floor) g(i, i) += scale * y.y[ii] * detail::sigmoid(-qd);
    const int r = perm.p[ii];
    const double qo = qm(r, i);
    if (detail::log_sigmoid(-qo) > floor)
      g(r, i) += -scale * (1.0 - y.y[ii + static_cast<std::size_t>(k)]) * detail::sigmoid(qo);
  }
  return g;
}

inline double qm_scale_factor(const AttributedGraph& g, QmScale s) {
  const double m = static_cast<double>(g.num_edges());
  switch (s) {
    case QmScale::paper_quarter: return 1.0 / (4.0 * m);
    case QmScale::standard_half: return 1.0 / (2.0 * m);
    case QmScale::raw: break;
  }
  return 1.0;
}

struct LossEvaluation {
  double loss = 0.0;
  Matrix qm;      // Q_M after amplify/scale, as fed to the loss
  Matrix grad_c;  // dL/dC, filled only when requested
};

/// Loss of an assignment matrix end to end: optional amplify, Q_M, scale, loss.
/// When `with_grad` is set also returns dL/dC by the chain rule
///   dL/dZ = (A Z - d (d^T Z) / 2|E|) (G + G^T) * scale,
/// composed with the amplify Jacobian when enabled.
inline LossEvaluation evaluate_loss(const AttributedGraph& g, const Matrix& c,
                                    const LossConfig& cfg, const Permutation& perm,
                                    bool with_grad = true) {
  cfg.check();
  const auto k = static_cast<int>(c.cols());
  const TargetVector y = target_vector(k, cfg.delta);
  const Matrix z = cfg.amplify ? amplify(c, cfg.epsilon) : c;
  const double scale = qm_scale_factor(g, cfg.normalization);

  LossEvaluation out;
  out.qm = community_modularity_matrix(g, z) * scale;
  out.loss = ucode_loss(out.qm, y, perm, cfg.epsilon);
  if (!with_grad) return out;

  const Matrix gq = ucode_loss_grad_qm(out.qm, y, perm, cfg.epsilon) * scale;
  const Matrix sym = gq + gq.transpose();
  const Vector d = degree_column(g);
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  const Eigen::RowVectorXd dz = d.transpose() * z;
  Matrix bz = adjacency(g).multiply(z);
  bz.noalias() -= d * dz / two_m;
  Matrix gz = bz * sym;

  if (!cfg.amplify) {
    out.grad_c = std::move(gz);
    return out;
  }
  out.grad_c = Matrix::Zero(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const double s = c.row(i).sum();
    if (!(s > 0.0)) continue;  // uniform fallback is constant
    double shared = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) / s > cfg.epsilon) {
        out.grad_c(i, j) = gz(i, j) / c(i, j);
        shared += gz(i, j);
      }
    }
    out.grad_c.row(i).array() -= shared / s;
  }
  return out;
}

inline double loss_of_assignment(const AttributedGraph& g, const Matrix& c, const LossConfig& cfg,
                                 const Permutation& perm) {
  return evaluate_loss(g, c, cfg, perm, false).loss;
}

/// dL/dC for an n x k assignment matrix.
inline Matrix ucode_loss_grad(const AttributedGraph& g, const Matrix& c, const LossConfig& cfg,
                              const Permutation& perm) {
  return evaluate_loss(g, c, cfg, perm, true).grad_c;
}

}  // namespace ucode
