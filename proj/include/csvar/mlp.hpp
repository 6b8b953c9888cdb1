// Copyright 2026 The csvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Single-hidden-layer classifier used by the federated simulator:
//   probs = softmax(relu(x W1 + b1) W2 + b2)
// with mean cross-entropy loss and analytic backprop.
#ifndef CSVAR_MLP_HPP_
#define CSVAR_MLP_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "csvar/image.hpp"

namespace csvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ModelParams {
  Matrix w1;  // input_dim x hidden
  Vector b1;  // hidden
  Matrix w2;  // hidden x num_classes
  Vector b2;  // num_classes

  int input_dim() const noexcept { return static_cast<int>(w1.rows()); }
  int hidden() const noexcept { return static_cast<int>(w1.cols()); }
  int num_classes() const noexcept { return static_cast<int>(w2.cols()); }

  bool same_shape(const ModelParams& other) const noexcept;
  bool all_finite() const;
  std::size_t parameter_count() const noexcept;

  // Concatenation w1 (row-major), b1, w2 (row-major), b2.
  std::vector<double> flatten() const;
  static ModelParams unflatten(std::span<const double> flat, int input_dim, int hidden,
                               int num_classes);

  // this += scale * other
  void axpy(double scale, const ModelParams& other);

  bool operator==(const ModelParams& other) const;
};

// Weights ~ U(-b, b) with b = sqrt(6 / (fan_in + fan_out)) per layer, drawn
// with Rng::uniform() in flatten() order; biases zero.
ModelParams init_model(int input_dim, int hidden, int num_classes, std::uint64_t seed);

double glorot_bound(int fan_in, int fan_out);

// Rows of `batch` are flattened samples. Returns n x num_classes row-wise
// softmax (max-subtracted). Throws kShapeMismatch on a column mismatch.
Matrix forward(const ModelParams& params, const Matrix& batch);

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

LossAndGrad loss_and_grad(const ModelParams& params, const Matrix& batch,
                          std::span<const int> labels);

// Cross-entropy of each row, in row order.
std::vector<double> per_sample_losses(const ModelParams& params, const Matrix& batch,
                                      std::span<const int> labels);

double accuracy(const ModelParams& params, const Matrix& batch, std::span<const int> labels);

// n x (H*W*C) matrix of pixel values / 255, one image per row in the
// image's interleaved byte order.
Matrix to_features(std::span<const ImageTensor> images);

// Raw parameters as little-endian float64 in flatten() order, with a JSON
// header next to it (same stem, ".json") recording the shape.
void save_model(const ModelParams& params, const std::filesystem::path& bin_path);
// Accepts either the .bin or the .json path.
ModelParams load_model(const std::filesystem::path& path);

}  // namespace csvar

#endif  // CSVAR_MLP_HPP_
