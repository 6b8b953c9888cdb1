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
#include <vector>

#include <gtest/gtest.h>

#include "csvar/regions.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace csvar {
namespace {

using testing::random_image;

using oracle::two_pass_variance;

TEST(RegionSize, KnownShapes) {
  EXPECT_EQ(region_size(224, 224), 16);
  EXPECT_EQ(region_size(32, 32), 8);
  EXPECT_EQ(region_size(28, 28), 8);
  EXPECT_EQ(region_size(1, 1), 2);
  EXPECT_EQ(region_size(4, 1), 2);
  EXPECT_EQ(region_size(5, 3), 4);
}

TEST(RegionSize, MatchesFormulaOnGrid) {
  for (int h = 1; h <= 1024; h += 7)
    for (int w = 1; w <= 1024; w += 13) ASSERT_EQ(region_size(h, w), oracle::region_size_formula(h, w)) << h << "x" << w;
}

TEST(RegionSize, RejectsNonPositive) {
  EXPECT_CSVAR_ERROR(region_size(0, 5), kInvalidArgument);
  EXPECT_CSVAR_ERROR(region_size(5, -1), kInvalidArgument);
}

TEST(RegionSize, PowerOfTwoAndDoublingBound) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> dim(1, 2048);
  for (int t = 0; t < 5000; ++t) {
    const int h = dim(gen);
    const int w = dim(gen);
    const int s = region_size(h, w);
    EXPECT_EQ(s & (s - 1), 0);
    EXPECT_GE(static_cast<long long>(s) * s, std::max(h, w));
    if (s > 2) {
      EXPECT_LT(static_cast<long long>(s / 2) * (s / 2), std::max(h, w));
    }
    const int s2 = region_size(2 * h, 2 * w);
    EXPECT_GE(s2, s);
    EXPECT_LE(s2, 2 * s);
  }
}

TEST(ReflectPad, MnistShape) {
  std::mt19937_64 gen(1);
  const ImageTensor img = random_image(gen, 28, 28, 1);
  const ImageTensor out = reflect_pad_to_multiple(img, 8);
  ASSERT_EQ(out.height(), 32);
  ASSERT_EQ(out.width(), 32);
  for (int y = 0; y < 28; ++y)
    for (int x = 0; x < 28; ++x) EXPECT_EQ(out.at(y, x, 0), img.at(y, x, 0));
  // Reflect-101: row 28 mirrors row 26, row 31 mirrors row 23.
  for (int x = 0; x < 28; ++x) {
    EXPECT_EQ(out.at(28, x, 0), img.at(26, x, 0));
    EXPECT_EQ(out.at(31, x, 0), img.at(23, x, 0));
  }
  EXPECT_EQ(out.at(29, 30, 0), img.at(25, 24, 0));
}

TEST(ReflectPad, IdentityAndRectangular) {
  std::mt19937_64 gen(2);
  const ImageTensor img = random_image(gen, 32, 32, 3);
  EXPECT_EQ(reflect_pad_to_multiple(img, 8), img);
  const ImageTensor tall = reflect_pad_to_multiple(random_image(gen, 30, 28, 1), 8);
  EXPECT_EQ(tall.height(), 32);
  EXPECT_EQ(tall.width(), 32);
  const ImageTensor tiny = reflect_pad_to_multiple(random_image(gen, 1, 1, 3), 2);
  EXPECT_EQ(tiny.height(), 2);
  EXPECT_EQ(tiny.width(), 2);
}

TEST(ReflectPad, InteriorNeverAltered) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> dim(1, 40);
  for (int t = 0; t < 300; ++t) {
    const ImageTensor img = random_image(gen, dim(gen), dim(gen), t % 2 ? 3 : 1);
    const int s = region_size(img.height(), img.width());
    const ImageTensor out = reflect_pad_to_multiple(img, s);
    ASSERT_EQ(out.height() % s, 0);
    ASSERT_EQ(out.width() % s, 0);
    ASSERT_EQ(out.crop(Rect{0, 0, img.height(), img.width()}), img);
  }
}

TEST(PartitionRegions, GridShapes) {
  const RegionGrid big = partition_regions(ImageTensor(224, 224, 3), 16);
  EXPECT_EQ(big.rows, 14);
  EXPECT_EQ(big.cols, 14);
  EXPECT_EQ(big.regions.size(), 196u);
  EXPECT_EQ(partition_regions(ImageTensor(16, 16, 1), 16).regions.size(), 1u);
  const RegionGrid tall = partition_regions(ImageTensor(32, 16, 1), 16);
  EXPECT_EQ(tall.rows, 2);
  EXPECT_EQ(tall.cols, 1);
  EXPECT_EQ(tall.at(1, 0).rect, (Rect{16, 0, 16, 16}));
}

TEST(PartitionRegions, RejectsNonDivisible) {
  EXPECT_CSVAR_ERROR(partition_regions(ImageTensor(28, 28, 1), 8), kNonDivisibleDimensions);
}

TEST(PartitionRegions, TilesEveryPixelExactlyOnce) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> mult(1, 6);
  for (int s : {2, 4, 8, 16}) {
    for (int t = 0; t < 20; ++t) {
      const int h = s * mult(gen);
      const int w = s * mult(gen);
      const RegionGrid grid = partition_regions(ImageTensor(h, w, 1), s);
      std::vector<int> paint(static_cast<std::size_t>(h) * w, -1);
      for (std::size_t i = 0; i < grid.regions.size(); ++i) {
        const Rect& r = grid.regions[i].rect;
        for (int y = r.y; y < r.y + r.height; ++y)
          for (int x = r.x; x < r.x + r.width; ++x) {
            int& cell = paint[static_cast<std::size_t>(y) * w + x];
            ASSERT_EQ(cell, -1) << "overlap at " << y << "," << x;
            cell = static_cast<int>(i);
          }
      }
      for (int v : paint) ASSERT_NE(v, -1);
    }
  }
}

TEST(RegionVariance, Examples) {
  EXPECT_EQ(region_variance(ImageTensor::filled(4, 4, 3, 77), Rect{0, 0, 4, 4}), 0.0);

  ImageTensor board(4, 4, 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) board.at(y, x, 0) = (y + x) % 2 ? 255 : 0;
  EXPECT_DOUBLE_EQ(region_variance(board, Rect{0, 0, 4, 4}), 16256.25);
}

TEST(RegionVariance, ChannelAverage) {
  // Ten pixels per channel; deviations from 100 with squared sums 100,
  // 200 and 300 give per-channel variances 10, 20 and 30.
  const int devs[3][10] = {{5, -5, 5, -5, 0, 0, 0, 0, 0, 0},
                           {10, -10, 0, 0, 0, 0, 0, 0, 0, 0},
                           {10, -10, 5, -5, 5, -5, 0, 0, 0, 0}};
  ImageTensor img(1, 10, 3);
  for (int c = 0; c < 3; ++c)
    for (int x = 0; x < 10; ++x) img.at(0, x, c) = static_cast<std::uint8_t>(100 + devs[c][x]);
  EXPECT_DOUBLE_EQ(region_variance(img, Rect{0, 0, 1, 10}), 20.0);
}

TEST(RegionVariance, OutOfBounds) {
  const ImageTensor img(8, 8, 1);
  EXPECT_CSVAR_ERROR(region_variance(img, Rect{4, 4, 8, 8}), kRegionOutOfBounds);
  EXPECT_CSVAR_ERROR(region_variance(img, Rect{-1, 0, 2, 2}), kRegionOutOfBounds);
  EXPECT_CSVAR_ERROR(region_variance(img, Rect{0, 0, 0, 2}), kRegionOutOfBounds);
}

TEST(RegionVariance, MatchesTwoPassOracle) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> dim(1, 48);
  for (int t = 0; t < 500; ++t) {
    const ImageTensor img = random_image(gen, dim(gen), dim(gen), t % 3 == 0 ? 1 : 3);
    std::uniform_int_distribution<int> ys(0, img.height() - 1);
    std::uniform_int_distribution<int> xs(0, img.width() - 1);
    const int y = ys(gen);
    const int x = xs(gen);
    const Rect r{y, x, std::uniform_int_distribution<int>(1, img.height() - y)(gen),
                 std::uniform_int_distribution<int>(1, img.width() - x)(gen)};
    const double expected = two_pass_variance(img, r);
    const double got = region_variance(img, r);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(std::abs(got - expected), 1e-9 * std::max(1.0, expected));
  }
}

TEST(RegionVariance, ZeroIffChannelwiseConstant) {
  ImageTensor img(4, 4, 3);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      img.at(y, x, 0) = 10;
      img.at(y, x, 1) = 200;
      img.at(y, x, 2) = 33;
    }
  EXPECT_EQ(region_variance(img, Rect{0, 0, 4, 4}), 0.0);
  img.at(3, 3, 2) = 34;
  EXPECT_GT(region_variance(img, Rect{0, 0, 4, 4}), 0.0);
}

TEST(VarianceMap, UniformImage) {
  const ImageTensor img = ImageTensor::filled(32, 32, 3, 90);
  const VarianceMap map = variance_map(img, partition_regions(img, 8));
  EXPECT_EQ(map.rows, 4);
  EXPECT_EQ(map.cols, 4);
  for (double v : map.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(map.median, 0.0);
}

TEST(VarianceMap, MedianRule) {
  const std::vector<double> even{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(median_of(even), 2.5);
  const std::vector<double> odd{5.0, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(median_of(odd), 3.0);
  EXPECT_EQ(median_of(std::vector<double>{}), 0.0);
}

TEST(VarianceMap, SubjectBrighterThanBackground) {
  std::mt19937_64 gen(6);
  const ImageTensor img = testing::textured_subject(gen, 64, 64, 3);
  const RegionGrid grid = partition_regions(img, 16);
  const VarianceMap map = variance_map(img, grid);
  for (const Region& r : grid.regions) {
    EXPECT_DOUBLE_EQ(map.at(r.row, r.col), two_pass_variance(img, r.rect));
  }
  // Centre regions (subject) against corner regions (flat gradient).
  EXPECT_GT(map.at(1, 1), 100.0 * std::max(1.0, map.at(0, 0)));
  EXPECT_GT(map.at(2, 2), 100.0 * std::max(1.0, map.at(3, 3)));
}

}  // namespace
}  // namespace csvar
