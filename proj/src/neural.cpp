// Copyright 2026 The esum Authors.
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

#include "esum/neural.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esum/error.hpp"

namespace esum {

namespace {

[[noreturn]] void ShapeError(const std::string &what) {
  throw Error(ErrorCode::kShapeMismatch, what);
}

}  // namespace

void GradientTape::Zero() {
  for (auto &l : layers) {
    std::fill(l.weights.data().begin(), l.weights.data().end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto &l = layers_[i];
    if (l.bias.size() != l.out_dim()) {
      ShapeError("layer " + std::to_string(i) + ": bias size " +
                 std::to_string(l.bias.size()) + " != " +
                 std::to_string(l.out_dim()));
    }
    if (i > 0 && layers_[i - 1].out_dim() != l.in_dim()) {
      ShapeError("layer " + std::to_string(i) + " input " +
                 std::to_string(l.in_dim()) + " does not chain with output " +
                 std::to_string(layers_[i - 1].out_dim()));
    }
  }
}

Mlp Mlp::Create(std::span<const std::size_t> dims, Activation hidden_activation,
                Activation output_activation, std::mt19937_64 &rng) {
  if (dims.size() < 2) ShapeError("an MLP needs at least one layer");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    std::size_t in = dims[i], out = dims[i + 1];
    if (in == 0 || out == 0) ShapeError("zero-width layer");
    DenseLayer layer;
    layer.weights = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation =
        i + 2 == dims.size() ? output_activation : hidden_activation;
    double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double &w : layer.weights.data()) w = Uniform(rng, -limit, limit);
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::in_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim();
}

std::size_t Mlp::out_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim();
}

Vec Mlp::Forward(std::span<const double> x, MlpCache *cache) const {
  if (x.size() != in_dim()) {
    ShapeError("MLP input has " + std::to_string(x.size()) +
               " values, expected " + std::to_string(in_dim()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->pre_activations.clear();
  }
  Vec current(x.begin(), x.end());
  for (const auto &layer : layers_) {
    Vec z(layer.out_dim());
    for (std::size_t r = 0; r < z.size(); ++r) {
      double acc = layer.bias[r];
      for (std::size_t c = 0; c < current.size(); ++c) {
        acc += layer.weights(r, c) * current[c];
      }
      z[r] = acc;
    }
    Vec out = z;
    if (layer.activation == Activation::kRelu) {
      // NaN passes through so non-finite values reach the loss check.
      for (double &v : out) v = v < 0.0 ? 0.0 : v;
    }
    if (cache) {
      cache->inputs.push_back(std::move(current));
      cache->pre_activations.push_back(std::move(z));
    }
    current = std::move(out);
  }
  return current;
}

Vec Mlp::Backward(const MlpCache &cache, std::span<const double> grad_out,
                  GradientTape &tape) const {
  if (cache.inputs.size() != layers_.size() ||
      tape.layers.size() != layers_.size()) {
    ShapeError("cache or tape does not match the MLP");
  }
  if (grad_out.size() != out_dim()) {
    ShapeError("upstream gradient has " + std::to_string(grad_out.size()) +
               " values, expected " + std::to_string(out_dim()));
  }
  Vec g(grad_out.begin(), grad_out.end());
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const auto &layer = layers_[li];
    const auto &input = cache.inputs[li];
    const auto &z = cache.pre_activations[li];
    auto &lg = tape.layers[li];
    if (layer.activation == Activation::kRelu) {
      for (std::size_t r = 0; r < g.size(); ++r) {
        if (!(z[r] > 0.0)) g[r] = 0.0;
      }
    }
    Vec g_in(layer.in_dim(), 0.0);
    for (std::size_t r = 0; r < g.size(); ++r) {
      double gr = g[r];
      lg.bias[r] += gr;
      if (gr == 0.0) continue;
      for (std::size_t c = 0; c < input.size(); ++c) {
        lg.weights(r, c) += gr * input[c];
        g_in[c] += layer.weights(r, c) * gr;
      }
    }
    g = std::move(g_in);
  }
  return g;
}

GradientTape Mlp::MakeTape() const {
  GradientTape tape;
  for (const auto &l : layers_) {
    tape.layers.push_back({Matrix(l.out_dim(), l.in_dim()), Vec(l.out_dim(), 0.0)});
  }
  return tape;
}

std::vector<std::span<double>> Mlp::ParameterBlocks() {
  std::vector<std::span<double>> blocks;
  for (auto &l : layers_) {
    blocks.push_back(l.weights.data());
    blocks.push_back(l.bias);
  }
  return blocks;
}

std::vector<std::span<const double>> Mlp::ParameterBlocks() const {
  std::vector<std::span<const double>> blocks;
  for (const auto &l : layers_) {
    blocks.push_back(l.weights.data());
    blocks.push_back(l.bias);
  }
  return blocks;
}

std::vector<std::span<double>> TapeBlocks(GradientTape &tape) {
  std::vector<std::span<double>> blocks;
  for (auto &l : tape.layers) {
    blocks.push_back(l.weights.data());
    blocks.push_back(l.bias);
  }
  return blocks;
}

double UniformUnit(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

Vec Softmax(std::span<const double> z) {
  if (z.empty()) ShapeError("softmax of an empty vector");
  double m = *std::max_element(z.begin(), z.end());
  Vec out(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - m);
    sum += out[i];
  }
  for (double &v : out) v /= sum;
  return out;
}

Vec SoftmaxBackward(std::span<const double> a, std::span<const double> grad_a) {
  if (a.size() != grad_a.size()) ShapeError("softmax backward size mismatch");
  double inner = Dot(a, grad_a);
  Vec dz(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) dz[i] = a[i] * (grad_a[i] - inner);
  return dz;
}

double Dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    ShapeError("dot product of vectors of length " + std::to_string(u.size()) +
               " and " + std::to_string(v.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

double Norm(std::span<const double> u) { return std::sqrt(Dot(u, u)); }

double Cosine(std::span<const double> u, std::span<const double> v) {
  double dot = Dot(u, v);
  double nu = Norm(u), nv = Norm(v);
  if (nu < kCosineEpsilon || nv < kCosineEpsilon) return 0.0;
  return dot / (nu * nv);
}

void CosineBackward(std::span<const double> u, std::span<const double> v,
                    double scale, std::span<double> grad_u,
                    std::span<double> grad_v) {
  if (grad_u.size() != u.size() || grad_v.size() != v.size()) {
    ShapeError("cosine backward size mismatch");
  }
  double dot = Dot(u, v);
  double nu = Norm(u), nv = Norm(v);
  if (nu < kCosineEpsilon || nv < kCosineEpsilon) return;
  double inv = 1.0 / (nu * nv);
  double c = dot * inv;
  double cu = c / (nu * nu);
  double cv = c / (nv * nv);
  for (std::size_t i = 0; i < u.size(); ++i) {
    grad_u[i] += scale * (v[i] * inv - cu * u[i]);
    grad_v[i] += scale * (u[i] * inv - cv * v[i]);
  }
}

MseResult MseLoss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    ShapeError("MSE over predictions of length " + std::to_string(pred.size()) +
               " and targets of length " + std::to_string(target.size()));
  }
  double n = static_cast<double>(pred.size());
  MseResult out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double diff = pred[i] - target[i];
    out.loss += diff * diff;
    out.grad[i] = 2.0 * diff / n;
  }
  out.loss /= n;
  return out;
}

AdamState MakeAdamState(std::span<const std::span<double>> params, double lr,
                        double beta1, double beta2, double eps) {
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0)) {
    throw Error(ErrorCode::kUsage, "Adam betas must lie in (0, 1)");
  }
  AdamState state;
  state.lr = lr;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.eps = eps;
  for (const auto &p : params) {
    state.m.emplace_back(p.size(), 0.0);
    state.v.emplace_back(p.size(), 0.0);
  }
  return state;
}

void AdamStep(std::span<const std::span<double>> params,
              std::span<const std::span<double>> grads, AdamState &state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    ShapeError("Adam: parameter, gradient and state block counts differ");
  }
  ++state.step_count;
  double t = static_cast<double>(state.step_count);
  double bc1 = 1.0 - std::pow(state.beta1, t);
  double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto &m = state.m[b];
    auto &v = state.v[b];
    if (p.size() != g.size() || p.size() != m.size()) {
      ShapeError("Adam: block " + std::to_string(b) + " size mismatch");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      double m_hat = m[i] / bc1;
      double v_hat = v[i] / bc2;
      p[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

double GradCheck(const std::function<double()> &loss,
                 std::span<const std::span<double>> params,
                 std::span<const std::span<double>> analytic, double h) {
  if (params.size() != analytic.size()) {
    ShapeError("gradient check: block counts differ");
  }
  double worst = 0.0;
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto a = analytic[b];
    if (p.size() != a.size()) ShapeError("gradient check: block size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      double saved = p[i];
      p[i] = saved + h;
      double plus = loss();
      p[i] = saved - h;
      double minus = loss();
      p[i] = saved;
      double numeric = (plus - minus) / (2.0 * h);
      double err = std::abs(a[i] - numeric) /
                   std::max(1e-8, std::abs(a[i]) + std::abs(numeric));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace esum
