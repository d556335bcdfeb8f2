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

// Two-layer graph convolution network with hand-written backward pass.
//
//   P0 = A_hat X W0        Z0 = BN0(P0)    H = SiLU(Z0)
//   P1 = A_hat H W1        Z1 = BN1(P1)    C = RReLU(Z1)
//
// Batch norm sits on each layer's pre-activation. Optional inverted dropout
// is applied to the input of each layer in train mode (off by default).

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "ucode/error.hpp"
#include "ucode/graph.hpp"

namespace ucode {

enum class Mode { train, eval };

inline constexpr double kRreluLower = 1.0 / 8.0;
inline constexpr double kRreluUpper = 1.0 / 3.0;
inline constexpr double kRreluEvalSlope = (kRreluLower + kRreluUpper) / 2.0;  // 11/48
inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.9;  // weight on the old running value

inline double silu(double x) {
  if (x >= 0.0) return x / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return x * e / (1.0 + e);
}

inline double silu_derivative(double x) {
  const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return s * (1.0 + x * (1.0 - s));
}

/// Leaky rectifier with slope `a` on the negative side.
inline double rrelu(double x, double a) { return x >= 0.0 ? x : a * x; }

inline double rrelu_eval(double x) { return rrelu(x, kRreluEvalSlope); }

template <class Rng>
double rrelu_train(double x, Rng& rng, double* slope_out = nullptr) {
  std::uniform_real_distribution<double> dist(kRreluLower, kRreluUpper);
  const double a = dist(rng);
  if (slope_out) *slope_out = a;
  return rrelu(x, a);
}

struct BatchNormParams {
  Vector gamma;
  Vector beta;
  Vector running_mean;
  Vector running_var;

  static BatchNormParams identity(Eigen::Index m) {
    return {Vector::Ones(m), Vector::Zero(m), Vector::Zero(m), Vector::Ones(m)};
  }
};

struct BatchNormCache {
  Matrix x_hat;
  Vector batch_mean;
  Vector batch_var;
  Vector inv_std;
};

/// Per-column standardization then scale-shift. Train mode uses batch
/// statistics (population variance); eval mode uses the running statistics.
inline Matrix batch_norm(const Matrix& x, const BatchNormParams& p, Mode mode,
                         BatchNormCache* cache = nullptr) {
  const auto n = x.rows();
  if (p.gamma.size() != x.cols())
    throw InputError("batch norm has " + std::to_string(p.gamma.size()) + " channels, input has " +
                     std::to_string(x.cols()));
  Vector mean, var;
  if (mode == Mode::train) {
    if (n < 2) throw InputError("batch norm in train mode needs at least 2 rows");
    mean = x.colwise().mean().transpose();
    var = (x.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
  } else {
    mean = p.running_mean;
    var = p.running_var;
  }
  const Vector inv_std = (var.array() + kBatchNormEps).rsqrt().matrix();
  Matrix x_hat = ((x.rowwise() - mean.transpose()).array().rowwise() *
                  inv_std.transpose().array())
                     .matrix();
  Matrix y = ((x_hat.array().rowwise() * p.gamma.transpose().array()).rowwise() +
              p.beta.transpose().array())
                 .matrix();
  if (cache) {
    cache->x_hat = std::move(x_hat);
    cache->batch_mean = std::move(mean);
    cache->batch_var = std::move(var);
    cache->inv_std = inv_std;
  }
  return y;
}

struct BatchNormGrads {
  Matrix dx;
  Vector dgamma;
  Vector dbeta;
};

/// Exact train-mode batch-norm backward.
inline BatchNormGrads batch_norm_backward(const Matrix& dy, const BatchNormParams& p,
                                          const BatchNormCache& c) {
  const double n = static_cast<double>(dy.rows());
  BatchNormGrads g;
  g.dbeta = dy.colwise().sum().transpose();
  g.dgamma = (dy.array() * c.x_hat.array()).colwise().sum().transpose();
  const Matrix dx_hat = (dy.array().rowwise() * p.gamma.transpose().array()).matrix();
  const Eigen::RowVectorXd sum_dx_hat = dx_hat.colwise().sum();
  const Eigen::RowVectorXd sum_dx_hat_xhat = (dx_hat.array() * c.x_hat.array()).colwise().sum();
  Matrix centered = n * dx_hat;
  centered.rowwise() -= sum_dx_hat;
  centered.array() -= c.x_hat.array().rowwise() * sum_dx_hat_xhat.array();
  g.dx = (centered.array().rowwise() * (c.inv_std.transpose().array() / n)).matrix();
  return g;
}

struct ModelParams {
  Matrix w0;  // l x h
  Matrix w1;  // h x k
  BatchNormParams bn0;
  BatchNormParams bn1;
  // Bumped on every optimizer update; used to reject stale forward caches.
  std::uint64_t version = 0;

  int input_dim() const { return static_cast<int>(w0.rows()); }
  int hidden_dim() const { return static_cast<int>(w0.cols()); }
  int output_dim() const { return static_cast<int>(w1.cols()); }

  bool all_finite() const {
    return w0.allFinite() && w1.allFinite() && bn0.gamma.allFinite() && bn0.beta.allFinite() &&
           bn1.gamma.allFinite() && bn1.beta.allFinite() &&
           (bn0.running_var.array() >= 0.0).all() && (bn1.running_var.array() >= 0.0).all();
  }
};

/// Glorot-uniform weights, identity batch norm.
template <class Rng>
ModelParams init_params(int input_dim, int hidden_dim, int output_dim, Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
    throw InputError("layer sizes must be positive");
  auto glorot = [&rng](int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    return w;
  };
  ModelParams p;
  p.w0 = glorot(input_dim, hidden_dim);
  p.w1 = glorot(hidden_dim, output_dim);
  p.bn0 = BatchNormParams::identity(hidden_dim);
  p.bn1 = BatchNormParams::identity(output_dim);
  return p;
}

struct ForwardCache {
  Mode mode = Mode::eval;
  std::uint64_t params_version = 0;
  int n = 0, l = 0, h = 0, k = 0;
  Matrix ax;      // A_hat X (after input dropout)
  Matrix z0;      // BN0 output
  Matrix hidden;  // SiLU(z0), before dropout
  Matrix drop1;   // hidden-layer dropout mask (scaled), empty if unused
  Matrix ah;      // A_hat H (after dropout)
  Matrix z1;      // BN1 output
  Matrix slopes;  // RReLU negative slopes, n x k
  Matrix output;  // raw RReLU output, unbounded
  BatchNormCache bn0;
  BatchNormCache bn1;
};

namespace detail {

inline ForwardCache forward_impl(const SparseSymMatrix& ahat, const Matrix& x,
                                 const ModelParams& p, Mode mode, Matrix slopes,
                                 const Matrix* drop0, Matrix drop1) {
  if (x.rows() != ahat.dim())
    throw InputError("features have " + std::to_string(x.rows()) + " rows, A_hat has dimension " +
                     std::to_string(ahat.dim()));
  if (x.cols() != p.w0.rows())
    throw InputError("feature width " + std::to_string(x.cols()) + " does not match W0 rows " +
                     std::to_string(p.w0.rows()));
  if (p.w0.cols() != p.w1.rows())
    throw InputError("W0 columns " + std::to_string(p.w0.cols()) + " do not match W1 rows " +
                     std::to_string(p.w1.rows()));
  if (p.bn0.gamma.size() != p.w0.cols() || p.bn1.gamma.size() != p.w1.cols())
    throw InputError("batch norm sizes do not match layer widths");

  ForwardCache c;
  c.mode = mode;
  c.params_version = p.version;
  c.n = static_cast<int>(x.rows());
  c.l = static_cast<int>(x.cols());
  c.h = p.hidden_dim();
  c.k = p.output_dim();

  c.ax = drop0 ? ahat.multiply(x.cwiseProduct(*drop0)) : ahat.multiply(x);
  c.z0 = batch_norm(c.ax * p.w0, p.bn0, mode, &c.bn0);
  c.hidden = c.z0.unaryExpr([](double v) { return silu(v); });
  c.drop1 = std::move(drop1);
  c.ah = c.drop1.size() ? ahat.multiply(c.hidden.cwiseProduct(c.drop1)) : ahat.multiply(c.hidden);
  c.z1 = batch_norm(c.ah * p.w1, p.bn1, mode, &c.bn1);
  c.slopes = std::move(slopes);
  c.output = c.z1.binaryExpr(c.slopes, [](double v, double a) { return rrelu(v, a); });
  return c;
}

template <class Rng>
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = keep(rng) ? 1.0 / (1.0 - rate) : 0.0;
  return m;
}

}  // namespace detail

/// Forward pass. Train mode samples RReLU slopes (and dropout masks when
/// `dropout` > 0) from `rng`; eval mode is deterministic and ignores `rng`.
template <class Rng>
ForwardCache forward(const SparseSymMatrix& ahat, const Matrix& x, const ModelParams& p, Mode mode,
                     Rng& rng, double dropout = 0.0) {
  const auto n = x.rows();
  const auto k = p.w1.cols();
  if (mode == Mode::eval)
    return detail::forward_impl(ahat, x, p, mode, Matrix::Constant(n, k, kRreluEvalSlope), nullptr,
                                Matrix());
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InputError("dropout must lie in [0,1)");
  Matrix drop0, drop1;
  if (dropout > 0.0) {
    drop0 = detail::dropout_mask(n, x.cols(), dropout, rng);
    drop1 = detail::dropout_mask(n, p.w0.cols(), dropout, rng);
  }
  std::uniform_real_distribution<double> slope(kRreluLower, kRreluUpper);
  Matrix slopes(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) slopes(i, j) = slope(rng);
  return detail::forward_impl(ahat, x, p, mode, std::move(slopes),
                              dropout > 0.0 ? &drop0 : nullptr, std::move(drop1));
}

/// Eval-mode forward; no randomness involved.
inline ForwardCache forward_eval(const SparseSymMatrix& ahat, const Matrix& x,
                                 const ModelParams& p) {
  std::mt19937_64 unused(0);
  return forward(ahat, x, p, Mode::eval, unused);
}

/// Train-mode forward with caller-supplied RReLU slopes and no dropout.
inline ForwardCache forward_with_slopes(const SparseSymMatrix& ahat, const Matrix& x,
                                        const ModelParams& p, const Matrix& slopes) {
  if (slopes.rows() != x.rows() || slopes.cols() != p.w1.cols())
    throw InputError("slope matrix shape does not match n x k");
  return detail::forward_impl(ahat, x, p, Mode::train, slopes, nullptr, Matrix());
}

/// Folds the batch statistics of a train-mode pass into the running ones.
inline void update_running_stats(ModelParams& p, const ForwardCache& c) {
  if (c.mode != Mode::train) return;
  auto blend = [](Vector& running, const Vector& batch) {
    running = kBatchNormMomentum * running + (1.0 - kBatchNormMomentum) * batch;
  };
  blend(p.bn0.running_mean, c.bn0.batch_mean);
  blend(p.bn0.running_var, c.bn0.batch_var);
  blend(p.bn1.running_mean, c.bn1.batch_mean);
  blend(p.bn1.running_var, c.bn1.batch_var);
}

struct ModelGrads {
  Matrix w0;
  Matrix w1;
  Vector gamma0, beta0;
  Vector gamma1, beta1;
};

/// Reverse-mode pass through the network for an upstream gradient dL/dC.
inline ModelGrads backward(const SparseSymMatrix& ahat, const ModelParams& p,
                           const ForwardCache& c, const Matrix& grad_c) {
  if (c.mode != Mode::train) throw InputError("backward needs a train-mode forward cache");
  if (c.params_version != p.version)
    throw InputError("forward cache is stale: parameters changed since the forward pass");
  if (c.l != p.input_dim() || c.h != p.hidden_dim() || c.k != p.output_dim() ||
      ahat.dim() != c.n)
    throw InputError("forward cache shapes do not match the parameters");
  if (grad_c.rows() != c.n || grad_c.cols() != c.k)
    throw InputError("upstream gradient is " + std::to_string(grad_c.rows()) + "x" +
                     std::to_string(grad_c.cols()) + ", expected " + std::to_string(c.n) + "x" +
                     std::to_string(c.k));

  ModelGrads g;
  const Matrix dz1 = grad_c.binaryExpr(c.z1.binaryExpr(c.slopes, [](double z, double a) {
    return z >= 0.0 ? 1.0 : a;
  }), [](double gc, double s) { return gc * s; });
  auto bn1 = batch_norm_backward(dz1, p.bn1, c.bn1);
  g.gamma1 = std::move(bn1.dgamma);
  g.beta1 = std::move(bn1.dbeta);
  g.w1 = c.ah.transpose() * bn1.dx;
  Matrix dh = ahat.multiply(bn1.dx * p.w1.transpose());  // A_hat is symmetric
  if (c.drop1.size()) dh = dh.cwiseProduct(c.drop1);
  const Matrix dz0 =
      dh.binaryExpr(c.z0, [](double gh, double z) { return gh * silu_derivative(z); });
  auto bn0 = batch_norm_backward(dz0, p.bn0, c.bn0);
  g.gamma0 = std::move(bn0.dgamma);
  g.beta0 = std::move(bn0.dbeta);
  g.w0 = c.ax.transpose() * bn0.dx;
  return g;
}

struct AdamMoment {
  Matrix m;
  Matrix v;
};

struct AdamState {
  long t = 0;
  AdamMoment w0, w1, gamma0, beta0, gamma1, beta1;

  static AdamState zeros_like(const ModelParams& p) {
    auto z = [](Eigen::Index r, Eigen::Index c) {
      return AdamMoment{Matrix::Zero(r, c), Matrix::Zero(r, c)};
    };
    AdamState s;
    s.w0 = z(p.w0.rows(), p.w0.cols());
    s.w1 = z(p.w1.rows(), p.w1.cols());
    s.gamma0 = z(p.bn0.gamma.size(), 1);
    s.beta0 = z(p.bn0.beta.size(), 1);
    s.gamma1 = z(p.bn1.gamma.size(), 1);
    s.beta1 = z(p.bn1.beta.size(), 1);
    return s;
  }
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// One bias-corrected Adam update of a single tensor at step t (t >= 1),
/// plus the decoupled decay term lr * weight_decay * param.
template <class Derived, class GradDerived>
void adam_update(Eigen::MatrixBase<Derived>& param, const Eigen::MatrixBase<GradDerived>& grad,
                 AdamMoment& mom, long t, double lr, double weight_decay) {
  if (mom.m.rows() != param.rows() || mom.m.cols() != param.cols() ||
      grad.rows() != param.rows() || grad.cols() != param.cols())
    throw InputError("adam state shape does not match the parameter");
  mom.m = kAdamBeta1 * mom.m + (1.0 - kAdamBeta1) * grad;
  mom.v = kAdamBeta2 * mom.v + (1.0 - kAdamBeta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t));
  const auto step = ((mom.m.array() / c1) / ((mom.v.array() / c2).sqrt() + kAdamEps)).matrix();
  param -= lr * step + lr * weight_decay * param;
}

/// Adam over all parameters; weight decay applies to W0 and W1 only.
inline void adam_step(ModelParams& p, const ModelGrads& g, AdamState& s, double lr,
                      double weight_decay) {
  ++s.t;
  adam_update(p.w0, g.w0, s.w0, s.t, lr, weight_decay);
  adam_update(p.w1, g.w1, s.w1, s.t, lr, weight_decay);
  adam_update(p.bn0.gamma, g.gamma0, s.gamma0, s.t, lr, 0.0);
  adam_update(p.bn0.beta, g.beta0, s.beta0, s.t, lr, 0.0);
  adam_update(p.bn1.gamma, g.gamma1, s.gamma1, s.t, lr, 0.0);
  adam_update(p.bn1.beta, g.beta1, s.beta1, s.t, lr, 0.0);
  ++p.version;
}

}  // namespace ucode
