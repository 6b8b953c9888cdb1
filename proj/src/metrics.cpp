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
#include "csvar/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "csvar/error.hpp"

namespace csvar {

namespace {

// Pearson correlation of channel ca of `a` with channel cb of `b`; 0 when
// either side has zero variance. Moments are accumulated as exact integers,
// so the result depends only on the multiset of co-located value pairs.
double channel_correlation(const ImageTensor& a, int ca, const ImageTensor& b, int cb) {
  using Wide = __int128;
  const std::size_t n = a.pixel_count();
  const auto da = a.data();
  const auto db = b.data();
  const auto sa = static_cast<std::size_t>(a.channels());
  const auto sb = static_cast<std::size_t>(b.channels());
  std::int64_t sum_a = 0;
  std::int64_t sum_b = 0;
  std::int64_t sum_aa = 0;
  std::int64_t sum_bb = 0;
  std::int64_t sum_ab = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::int64_t xa = da[p * sa + static_cast<std::size_t>(ca)];
    const std::int64_t xb = db[p * sb + static_cast<std::size_t>(cb)];
    sum_a += xa;
    sum_b += xb;
    sum_aa += xa * xa;
    sum_bb += xb * xb;
    sum_ab += xa * xb;
  }
  const Wide count = static_cast<Wide>(n);
  const Wide cov = count * sum_ab - Wide{sum_a} * sum_b;
  const Wide var_a = count * sum_aa - Wide{sum_a} * sum_a;
  const Wide var_b = count * sum_bb - Wide{sum_b} * sum_b;
  if (var_a == 0 || var_b == 0) return 0.0;
  const double r = static_cast<double>(cov) /
                   std::sqrt(static_cast<double>(var_a) * static_cast<double>(var_b));
  return std::clamp(r, -1.0, 1.0);
}

void require_same_shape(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "images must have identical non-empty shapes");
  }
}

}  // namespace

double ncc(const ImageTensor& original, const ImageTensor& other) {
  require_same_shape(original, other);
  double total = 0.0;
  for (int c = 0; c < original.channels(); ++c) {
    total += channel_correlation(original, c, other, c);
  }
  return total / original.channels();
}

double inter_channel_correlation(const ImageTensor& image) {
  if (image.channels() != 3) {
    throw Error(ErrorCode::kNotColorImage, "inter-channel correlation needs 3 channels");
  }
  const double rg = std::abs(channel_correlation(image, 0, image, 1));
  const double rb = std::abs(channel_correlation(image, 0, image, 2));
  const double gb = std::abs(channel_correlation(image, 1, image, 2));
  return (rg + rb + gb) / 3.0;
}

double per_channel_histogram_l1(const ImageTensor& a, const ImageTensor& b) {
  require_same_shape(a, b);
  const auto channels = static_cast<std::size_t>(a.channels());
  double distance = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    std::array<long long, 256> diff{};
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
      ++diff[a.data()[p * channels + c]];
      --diff[b.data()[p * channels + c]];
    }
    for (long long d : diff) distance += static_cast<double>(std::llabs(d));
  }
  return distance / static_cast<double>(a.size());
}

std::string ObfuscationReport::to_json() const {
  nlohmann::json j;
  j["ncc"] = mean_ncc;
  j["inter_channel_corr_delta"] =
      inter_channel_corr_delta ? nlohmann::json(*inter_channel_corr_delta) : nlohmann::json(nullptr);
  j["histogram_l1"] = per_channel_histogram_l1;
  return j.dump(2) + "\n";
}

ObfuscationReport obfuscation_report(const ImageTensor& original,
                                     const ImageTensor& transformed) {
  ObfuscationReport r;
  r.mean_ncc = ncc(original, transformed);
  if (original.channels() == 3) {
    r.inter_channel_corr_delta =
        inter_channel_correlation(original) - inter_channel_correlation(transformed);
  }
  r.per_channel_histogram_l1 = per_channel_histogram_l1(original, transformed);
  return r;
}

}  // namespace csvar
