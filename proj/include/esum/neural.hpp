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

// Small dense-network toolkit: fully connected layers, hand-written reverse
// mode, Adam, and a central-difference gradient checker. Everything is
// double precision and single-sample; there is no batching.

#ifndef ESUM_NEURAL_HPP_
#define ESUM_NEURAL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace esum {

using Vec = std::vector<double>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Activation { kRelu, kLinear };

struct DenseLayer {
  Matrix weights;  // [out x in]
  Vec bias;        // [out]
  Activation activation = Activation::kLinear;

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
};

// Per-layer inputs and pre-activations of one forward pass.
struct MlpCache {
  std::vector<Vec> inputs;
  std::vector<Vec> pre_activations;
};

struct LayerGrad {
  Matrix weights;
  Vec bias;
};

// Gradient accumulators mirroring one Mlp.
struct GradientTape {
  std::vector<LayerGrad> layers;

  void Zero();
};

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  // Layer widths: dims[0] is the input, dims[i+1] the output of layer i.
  // Hidden layers use hidden_activation, the last uses output_activation.
  // Weights are Glorot-uniform from rng, biases zero.
  static Mlp Create(std::span<const std::size_t> dims,
                    Activation hidden_activation,
                    Activation output_activation, std::mt19937_64 &rng);

  std::size_t in_dim() const;
  std::size_t out_dim() const;
  const std::vector<DenseLayer> &layers() const { return layers_; }
  std::vector<DenseLayer> &layers() { return layers_; }

  // Throws Error(kShapeMismatch).
  Vec Forward(std::span<const double> x, MlpCache *cache = nullptr) const;

  // Accumulates parameter gradients into tape and returns dL/dx.
  Vec Backward(const MlpCache &cache, std::span<const double> grad_out,
               GradientTape &tape) const;

  GradientTape MakeTape() const;

  // Parameter blocks in a fixed order: W0, b0, W1, b1, ...
  std::vector<std::span<double>> ParameterBlocks();
  std::vector<std::span<const double>> ParameterBlocks() const;

 private:
  std::vector<DenseLayer> layers_;
};

// Blocks of a tape in the same order as Mlp::ParameterBlocks.
std::vector<std::span<double>> TapeBlocks(GradientTape &tape);

// Uniform double in [0, 1) built from the top 53 bits, so draws are identical
// across standard library implementations.
double UniformUnit(std::mt19937_64 &rng);
double Uniform(std::mt19937_64 &rng, double lo, double hi);

Vec Softmax(std::span<const double> z);

// Backward of softmax: given outputs a and upstream dL/da, returns dL/dz.
Vec SoftmaxBackward(std::span<const double> a, std::span<const double> grad_a);

double Dot(std::span<const double> u, std::span<const double> v);
double Norm(std::span<const double> u);

// Returns 0 when either norm is below kCosineEpsilon.
inline constexpr double kCosineEpsilon = 1e-12;
double Cosine(std::span<const double> u, std::span<const double> v);

// Adds scale * d cos(u, v) / du to grad_u and scale * d cos / dv to grad_v.
// Both are zero in the degenerate-norm case.
void CosineBackward(std::span<const double> u, std::span<const double> v,
                    double scale, std::span<double> grad_u,
                    std::span<double> grad_v);

struct MseResult {
  double loss = 0.0;
  Vec grad;
};
MseResult MseLoss(std::span<const double> pred, std::span<const double> target);

struct AdamState {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step_count = 0;
  std::vector<Vec> m;
  std::vector<Vec> v;
};

// Sizes m and v after the given blocks (zero-filled).
AdamState MakeAdamState(std::span<const std::span<double>> params,
                        double lr = 0.01, double beta1 = 0.9,
                        double beta2 = 0.999, double eps = 1e-8);

// One bias-corrected Adam update. With zero moments, a zero gradient leaves
// the parameter untouched. Throws Error(kShapeMismatch).
void AdamStep(std::span<const std::span<double>> params,
              std::span<const std::span<double>> grads, AdamState &state);

// Central-difference check of analytic gradients.
//
// loss() must evaluate the scalar loss at the current parameter values;
// analytic holds dloss/dparam at the unperturbed point, block for block.
// Returns max over parameters of |a - n| / max(1e-8, |a| + |n|).
double GradCheck(const std::function<double()> &loss,
                 std::span<const std::span<double>> params,
                 std::span<const std::span<double>> analytic,
                 double h = 1e-5);

}  // namespace esum

#endif  // ESUM_NEURAL_HPP_
