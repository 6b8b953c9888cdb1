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
// Independent reference implementations used by the unit tests and the
// acceptance runner. They deliberately avoid the library's own helpers.
#ifndef CSVAR_TESTS_ORACLES_HPP_
#define CSVAR_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "csvar/image.hpp"
#include "csvar/mlp.hpp"

namespace csvar::oracle {

// 2^ceil(log2(sqrt(max(H, W)))) evaluated in floating point, floored at 2.
inline int region_size_formula(int h, int w) {
  const double e = std::ceil(std::log2(std::sqrt(static_cast<double>(std::max(h, w)))));
  return std::max(2, static_cast<int>(std::lround(std::exp2(e))));
}

inline double two_pass_variance(const ImageTensor& img, const Rect& r) {
  double total = 0.0;
  const double n = static_cast<double>(r.height) * r.width;
  for (int c = 0; c < img.channels(); ++c) {
    double mean = 0.0;
    for (int y = r.y; y < r.y + r.height; ++y)
      for (int x = r.x; x < r.x + r.width; ++x) mean += img.at(y, x, c);
    mean /= n;
    double ss = 0.0;
    for (int y = r.y; y < r.y + r.height; ++y)
      for (int x = r.x; x < r.x + r.width; ++x) {
        const double d = img.at(y, x, c) - mean;
        ss += d * d;
      }
    total += ss / n;
  }
  return total / img.channels();
}

// Block size per region (row-major) from scratch: region size by formula,
// two-pass variances, median by full sort, strict threshold.
inline std::vector<int> block_size_plan(const ImageTensor& img) {
  const int s = region_size_formula(img.height(), img.width());
  std::vector<double> vars;
  for (int ry = 0; ry < img.height(); ry += s)
    for (int rx = 0; rx < img.width(); rx += s) vars.push_back(two_pass_variance(img, Rect{ry, rx, s, s}));
  std::vector<double> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  std::vector<int> plan;
  plan.reserve(vars.size());
  for (double v : vars) plan.push_back(v > median ? std::max(1, s / 4) : std::max(1, s / 2));
  return plan;
}

// Mean cross-entropy straight from the definition, one sample at a time.
inline double reference_loss(const ModelParams& p, const Matrix& x, std::span<const int> labels) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> hidden(static_cast<std::size_t>(p.hidden()));
    for (int j = 0; j < p.hidden(); ++j) {
      double z = p.b1(j);
      for (int k = 0; k < p.input_dim(); ++k) z += x(i, k) * p.w1(k, j);
      hidden[static_cast<std::size_t>(j)] = std::max(0.0, z);
    }
    std::vector<double> logits(static_cast<std::size_t>(p.num_classes()));
    for (int c = 0; c < p.num_classes(); ++c) {
      double z = p.b2(c);
      for (int j = 0; j < p.hidden(); ++j) z += hidden[static_cast<std::size_t>(j)] * p.w2(j, c);
      logits[static_cast<std::size_t>(c)] = z;
    }
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - m);
    total += m + std::log(sum) - logits[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
  }
  return total / static_cast<double>(x.rows());
}

// Smallest |pre-activation| over the batch; finite differences are only
// meaningful away from the ReLU kink.
inline double min_abs_preactivation(const ModelParams& p, const Matrix& x) {
  const Matrix z = (x * p.w1).rowwise() + p.b1.transpose();
  return z.cwiseAbs().minCoeff();
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// Central differences with step h on every parameter. Relative error per
// entry is |a - n| / max(|a|, |n|, floor).
inline GradCheck finite_difference_check(const ModelParams& params, const ModelParams& analytic,
                                         const Matrix& x, std::span<const int> labels, double h,
                                         double floor = 1e-6) {
  std::vector<double> flat = params.flatten();
  const std::vector<double> grad = analytic.flatten();
  GradCheck out;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double orig = flat[i];
    flat[i] = orig + h;
    const double up = reference_loss(
        ModelParams::unflatten(flat, params.input_dim(), params.hidden(), params.num_classes()), x, labels);
    flat[i] = orig - h;
    const double down = reference_loss(
        ModelParams::unflatten(flat, params.input_dim(), params.hidden(), params.num_classes()), x, labels);
    flat[i] = orig;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(grad[i]), floor});
    out.max_rel_error = std::max(out.max_rel_error, std::abs(numeric - grad[i]) / denom);
    ++out.checked;
  }
  return out;
}

// Fraction of (member, non-member) pairs where the member scores higher,
// ties counting one half.
inline double pairwise_auc(std::span<const double> members, std::span<const double> nonmembers) {
  double wins = 0.0;
  for (double m : members)
    for (double n : nonmembers) wins += m > n ? 1.0 : (m == n ? 0.5 : 0.0);
  return wins / (static_cast<double>(members.size()) * static_cast<double>(nonmembers.size()));
}

}  // namespace csvar::oracle

#endif  // CSVAR_TESTS_ORACLES_HPP_
