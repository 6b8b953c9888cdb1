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
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "csvar/metrics.hpp"
#include "csvar/shuffler.hpp"
#include "test_support.hpp"

namespace csvar {
namespace {

using testing::random_image;

ImageTensor inverted(const ImageTensor& img) {
  ImageTensor out = img;
  for (auto& v : out.data()) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

TEST(Ncc, SelfInverseConstant) {
  std::mt19937_64 gen(91);
  const ImageTensor img = random_image(gen, 16, 16, 3);
  EXPECT_NEAR(ncc(img, img), 1.0, 1e-12);
  EXPECT_NEAR(ncc(img, inverted(img)), -1.0, 1e-12);
  EXPECT_EQ(ncc(img, ImageTensor::filled(16, 16, 3, 40)), 0.0);
  EXPECT_CSVAR_ERROR(ncc(img, ImageTensor(16, 15, 3)), kShapeMismatch);
}

TEST(Ncc, SymmetricAndAffineInvariant) {
  std::mt19937_64 gen(92);
  for (int t = 0; t < 50; ++t) {
    const ImageTensor a = random_image(gen, 12, 12, t % 2 ? 3 : 1);
    const ImageTensor b = random_image(gen, 12, 12, t % 2 ? 3 : 1);
    EXPECT_NEAR(ncc(a, b), ncc(b, a), 1e-12);
    // v -> 2v/4 + 30 keeps every value in range and the variance nonzero.
    ImageTensor scaled = b;
    for (auto& v : scaled.data()) v = static_cast<std::uint8_t>(v / 4 * 2 + 30);
    ImageTensor b_quant = b;
    for (auto& v : b_quant.data()) v = static_cast<std::uint8_t>(v / 4);
    EXPECT_NEAR(ncc(a, scaled), ncc(a, b_quant), 1e-9);
    const double r = ncc(a, b);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(InterChannel, GreyIsOneNoiseIsNearZero) {
  std::mt19937_64 gen(93);
  ImageTensor grey(32, 32, 3);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      const auto v = static_cast<std::uint8_t>(gen());
      for (int c = 0; c < 3; ++c) grey.at(y, x, c) = v;
    }
  EXPECT_NEAR(inter_channel_correlation(grey), 1.0, 1e-12);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) worst = std::max(worst, inter_channel_correlation(random_image(gen, 32, 32, 3)));
  EXPECT_LT(worst, 0.1);
  double mean = 0.0;
  for (int t = 0; t < 200; ++t) mean += inter_channel_correlation(random_image(gen, 32, 32, 3));
  EXPECT_LT(mean / 200, 0.05);
  EXPECT_CSVAR_ERROR(inter_channel_correlation(ImageTensor(4, 4, 1)), kNotColorImage);
}

TEST(HistogramL1, Examples) {
  std::mt19937_64 gen(94);
  const ImageTensor img = random_image(gen, 32, 32, 3);
  EXPECT_EQ(per_channel_histogram_l1(img, img), 0.0);
  ShuffleConfig cfg;
  cfg.master_seed = 1;
  EXPECT_EQ(per_channel_histogram_l1(img, csvar_shuffle(img, cfg, 0)), 0.0);
  EXPECT_GT(per_channel_histogram_l1(img, gaussian_obfuscate(img, 50.0, 3)), 0.0);
  EXPECT_DOUBLE_EQ(per_channel_histogram_l1(ImageTensor::filled(4, 4, 3, 0), ImageTensor::filled(4, 4, 3, 255)),
                   2.0);
  EXPECT_DOUBLE_EQ(per_channel_histogram_l1(ImageTensor::filled(4, 4, 1, 0), ImageTensor::filled(4, 4, 1, 255)),
                   2.0);
  EXPECT_CSVAR_ERROR(per_channel_histogram_l1(img, ImageTensor(32, 32, 1)), kShapeMismatch);
}

TEST(ObfuscationReport, FieldsAndJson) {
  std::mt19937_64 gen(95);
  const ImageTensor img = random_image(gen, 32, 32, 3);
  const ObfuscationReport self = obfuscation_report(img, img);
  EXPECT_NEAR(self.mean_ncc, 1.0, 1e-12);
  EXPECT_EQ(self.per_channel_histogram_l1, 0.0);
  ASSERT_TRUE(self.inter_channel_corr_delta.has_value());
  EXPECT_EQ(*self.inter_channel_corr_delta, 0.0);
  const auto json = nlohmann::json::parse(self.to_json());
  EXPECT_TRUE(json.contains("ncc"));
  EXPECT_TRUE(json.contains("inter_channel_corr_delta"));
  EXPECT_TRUE(json.contains("histogram_l1"));

  const ImageTensor grey = random_image(gen, 8, 8, 1);
  const ObfuscationReport g = obfuscation_report(grey, grey);
  EXPECT_FALSE(g.inter_channel_corr_delta.has_value());
  EXPECT_TRUE(nlohmann::json::parse(g.to_json())["inter_channel_corr_delta"].is_null());
}

}  // namespace
}  // namespace csvar
