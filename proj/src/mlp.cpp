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
#include "csvar/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "csvar/dataset.hpp"
#include "csvar/error.hpp"
#include "csvar/rng.hpp"

namespace csvar {

namespace {

void check_batch(const ModelParams& params, const Matrix& batch, std::size_t labels) {
  if (batch.cols() != params.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "batch has " + std::to_string(batch.cols()) + " features, model expects " +
                    std::to_string(params.input_dim()));
  }
  if (static_cast<std::size_t>(batch.rows()) != labels) {
    throw Error(ErrorCode::kShapeMismatch, "batch rows and label count differ");
  }
}

void check_labels(const ModelParams& params, std::span<const int> labels) {
  for (int y : labels) {
    if (y < 0 || y >= params.num_classes()) {
      throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(y));
    }
  }
}

// Pre-activation of the hidden layer and the output logits.
struct Activations {
  Matrix hidden_pre;
  Matrix logits;
};

Activations activations(const ModelParams& p, const Matrix& batch) {
  Activations a;
  a.hidden_pre = (batch * p.w1).rowwise() + p.b1.transpose();
  a.logits = (a.hidden_pre.cwiseMax(0.0) * p.w2).rowwise() + p.b2.transpose();
  return a;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out = logits.colwise() - logits.rowwise().maxCoeff();
  out = out.array().exp().matrix();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

// -log softmax(logits)[row, label] via log-sum-exp.
double cross_entropy(const Matrix& logits, Eigen::Index row, int label) {
  const double m = logits.row(row).maxCoeff();
  const double lse = m + std::log((logits.row(row).array() - m).exp().sum());
  return lse - logits(row, label);
}

void put_le64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    bits >>= 8;
  }
}

double get_le64(std::string_view in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

bool ModelParams::same_shape(const ModelParams& o) const noexcept {
  return w1.rows() == o.w1.rows() && w1.cols() == o.w1.cols() && b1.size() == o.b1.size() &&
         w2.rows() == o.w2.rows() && w2.cols() == o.w2.cols() && b2.size() == o.b2.size();
}

bool ModelParams::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

std::size_t ModelParams::parameter_count() const noexcept {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (Eigen::Index r = 0; r < w1.rows(); ++r)
    for (Eigen::Index c = 0; c < w1.cols(); ++c) flat.push_back(w1(r, c));
  for (Eigen::Index i = 0; i < b1.size(); ++i) flat.push_back(b1(i));
  for (Eigen::Index r = 0; r < w2.rows(); ++r)
    for (Eigen::Index c = 0; c < w2.cols(); ++c) flat.push_back(w2(r, c));
  for (Eigen::Index i = 0; i < b2.size(); ++i) flat.push_back(b2(i));
  return flat;
}

ModelParams ModelParams::unflatten(std::span<const double> flat, int input_dim, int hidden,
                                   int num_classes) {
  if (input_dim < 1 || hidden < 1 || num_classes < 1) {
    throw Error(ErrorCode::kShapeMismatch, "model dimensions must be >= 1");
  }
  const std::size_t expected = static_cast<std::size_t>(input_dim) * hidden + hidden +
                               static_cast<std::size_t>(hidden) * num_classes + num_classes;
  if (flat.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, "flat parameter count " +
                                               std::to_string(flat.size()) + " != " +
                                               std::to_string(expected));
  }
  ModelParams p;
  p.w1.resize(input_dim, hidden);
  p.b1.resize(hidden);
  p.w2.resize(hidden, num_classes);
  p.b2.resize(num_classes);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < p.w1.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w1.cols(); ++c) p.w1(r, c) = flat[k++];
  for (Eigen::Index i = 0; i < p.b1.size(); ++i) p.b1(i) = flat[k++];
  for (Eigen::Index r = 0; r < p.w2.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w2.cols(); ++c) p.w2(r, c) = flat[k++];
  for (Eigen::Index i = 0; i < p.b2.size(); ++i) p.b2(i) = flat[k++];
  return p;
}

void ModelParams::axpy(double scale, const ModelParams& other) {
  if (!same_shape(other)) throw Error(ErrorCode::kShapeMismatch, "parameter shapes differ");
  w1 += scale * other.w1;
  b1 += scale * other.b1;
  w2 += scale * other.w2;
  b2 += scale * other.b2;
}

bool ModelParams::operator==(const ModelParams& o) const {
  return same_shape(o) && w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
}

double glorot_bound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ModelParams init_model(int input_dim, int hidden, int num_classes, std::uint64_t seed) {
  if (input_dim < 1 || hidden < 1 || num_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "model dimensions must be >= 1");
  }
  ModelParams p;
  p.w1.resize(input_dim, hidden);
  p.b1 = Vector::Zero(hidden);
  p.w2.resize(hidden, num_classes);
  p.b2 = Vector::Zero(num_classes);
  Rng rng(seed);
  const double bound1 = glorot_bound(input_dim, hidden);
  for (Eigen::Index r = 0; r < p.w1.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w1.cols(); ++c)
      p.w1(r, c) = bound1 * (2.0 * rng.uniform() - 1.0);
  const double bound2 = glorot_bound(hidden, num_classes);
  for (Eigen::Index r = 0; r < p.w2.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w2.cols(); ++c)
      p.w2(r, c) = bound2 * (2.0 * rng.uniform() - 1.0);
  return p;
}

Matrix forward(const ModelParams& params, const Matrix& batch) {
  if (batch.cols() != params.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "batch feature count does not match model");
  }
  return softmax_rows(activations(params, batch).logits);
}

LossAndGrad loss_and_grad(const ModelParams& params, const Matrix& batch,
                          std::span<const int> labels) {
  check_batch(params, batch, labels.size());
  check_labels(params, labels);
  const Eigen::Index n = batch.rows();
  LossAndGrad out;
  if (n == 0) {
    out.grad = params;
    out.grad.w1.setZero();
    out.grad.b1.setZero();
    out.grad.w2.setZero();
    out.grad.b2.setZero();
    return out;
  }
  const Activations a = activations(params, batch);
  const Matrix hidden = a.hidden_pre.cwiseMax(0.0);

  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) loss += cross_entropy(a.logits, i, labels[i]);
  out.loss = loss / static_cast<double>(n);

  // d(mean CE)/d logits = (softmax - onehot) / n
  Matrix d_logits = softmax_rows(a.logits);
  for (Eigen::Index i = 0; i < n; ++i) d_logits(i, labels[i]) -= 1.0;
  d_logits /= static_cast<double>(n);

  out.grad.w2 = hidden.transpose() * d_logits;
  out.grad.b2 = d_logits.colwise().sum().transpose();
  const Matrix d_hidden =
      (d_logits * params.w2.transpose()).cwiseProduct((a.hidden_pre.array() > 0.0).cast<double>().matrix());
  out.grad.w1 = batch.transpose() * d_hidden;
  out.grad.b1 = d_hidden.colwise().sum().transpose();
  return out;
}

std::vector<double> per_sample_losses(const ModelParams& params, const Matrix& batch,
                                      std::span<const int> labels) {
  check_batch(params, batch, labels.size());
  check_labels(params, labels);
  std::vector<double> losses;
  if (batch.rows() == 0) return losses;
  const Activations a = activations(params, batch);
  losses.reserve(labels.size());
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    losses.push_back(cross_entropy(a.logits, i, labels[i]));
  }
  return losses;
}

double accuracy(const ModelParams& params, const Matrix& batch, std::span<const int> labels) {
  check_batch(params, batch, labels.size());
  if (batch.rows() == 0) return 0.0;
  const Matrix logits = activations(params, batch).logits;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch.rows());
}

Matrix to_features(std::span<const ImageTensor> images) {
  if (images.empty()) return Matrix(0, 0);
  const auto dim = static_cast<Eigen::Index>(images.front().size());
  Matrix x(static_cast<Eigen::Index>(images.size()), dim);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<Eigen::Index>(images[i].size()) != dim) {
      throw Error(ErrorCode::kShapeMismatch, "images differ in size");
    }
    const auto bytes = images[i].data();
    for (Eigen::Index j = 0; j < dim; ++j) {
      x(static_cast<Eigen::Index>(i), j) = static_cast<double>(bytes[static_cast<std::size_t>(j)]) / 255.0;
    }
  }
  return x;
}

void save_model(const ModelParams& params, const std::filesystem::path& bin_path) {
  const std::vector<double> flat = params.flatten();
  std::string payload;
  payload.reserve(flat.size() * 8);
  for (double v : flat) put_le64(payload, v);
  write_file(bin_path, payload);

  nlohmann::json header;
  header["format"] = "csvar-mlp";
  header["dtype"] = "float64";
  header["endianness"] = "little";
  header["input_dim"] = params.input_dim();
  header["hidden"] = params.hidden();
  header["num_classes"] = params.num_classes();
  header["order"] = {"w1", "b1", "w2", "b2"};
  header["matrix_layout"] = "row-major";
  header["count"] = flat.size();
  header["data"] = bin_path.filename().string();
  auto json_path = bin_path;
  json_path.replace_extension(".json");
  write_file(json_path, header.dump(2) + "\n");
}

ModelParams load_model(const std::filesystem::path& path) {
  auto json_path = path;
  json_path.replace_extension(".json");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_file(json_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, std::string("model header: ") + e.what());
  }
  const auto input_dim = header.value("input_dim", 0);
  const auto hidden = header.value("hidden", 0);
  const auto classes = header.value("num_classes", 0);
  const auto bin_path = json_path.parent_path() / header.value("data", std::string());
  const std::string payload = read_file(bin_path);
  if (payload.size() % 8 != 0) {
    throw Error(ErrorCode::kTruncatedFile, "model payload is not a whole number of float64");
  }
  std::vector<double> flat(payload.size() / 8);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = get_le64(payload, i * 8);
  return ModelParams::unflatten(flat, input_dim, hidden, classes);
}

}  // namespace csvar
