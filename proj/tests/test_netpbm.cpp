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
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "csvar/dataset.hpp"
#include "csvar/netpbm.hpp"
#include "csvar/regions.hpp"
#include "test_support.hpp"

namespace csvar {
namespace {

using testing::random_image;

TEST(Netpbm, GreyHeaderLayout) {
  ImageTensor img(2, 2, 1, {1, 2, 3, 4});
  const std::string bytes = encode_netpbm(img);
  EXPECT_EQ(bytes, std::string("P5\n2 2\n255\n\x01\x02\x03\x04", 15));
  EXPECT_EQ(decode_netpbm(bytes), img);
}

TEST(Netpbm, ColourHeaderLayout) {
  ImageTensor img(1, 2, 3, {10, 20, 30, 40, 50, 60});
  const std::string bytes = encode_netpbm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n2 1\n255\n");
  EXPECT_EQ(bytes.size(), 17u);
  EXPECT_EQ(decode_netpbm(bytes), img);
}

TEST(Netpbm, RoundTripRandomImages) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int t = 0; t < 200; ++t) {
    const ImageTensor img = random_image(gen, dim(gen), dim(gen), t % 2 ? 3 : 1);
    const std::string bytes = encode_netpbm(img);
    const ImageTensor back = decode_netpbm(bytes);
    ASSERT_EQ(back, img);
    ASSERT_EQ(encode_netpbm(back), bytes);
  }
}

TEST(Netpbm, ReaderAcceptsCommentsAndWhitespace) {
  const std::string bytes = std::string("P5 # grey\n# comment line\n 2\t1 \n255\n", 35) + "\x07\x08";
  const ImageTensor img = decode_netpbm(bytes);
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.height(), 1);
  EXPECT_EQ(img.at(0, 1, 0), 8);
}

TEST(Netpbm, Errors) {
  EXPECT_CSVAR_ERROR(decode_netpbm("P6\n1 1\n65535\n\0\0\0\0\0\0"), kUnsupportedMaxval);
  EXPECT_CSVAR_ERROR(decode_netpbm("P3\n1 1\n255\n1 2 3"), kMalformedHeader);
  EXPECT_CSVAR_ERROR(decode_netpbm("P5\n2 2\n255\n\x01"), kMalformedHeader);
  EXPECT_CSVAR_ERROR(decode_netpbm("P5\n0 2\n255\n"), kMalformedHeader);
  EXPECT_CSVAR_ERROR(decode_netpbm("P5\n2"), kMalformedHeader);
  EXPECT_CSVAR_ERROR(decode_netpbm(""), kMalformedHeader);
  EXPECT_CSVAR_ERROR(read_image("/nonexistent/file.pgm"), kIoError);
}

TEST(Netpbm, FileRoundTrip) {
  std::mt19937_64 gen(32);
  const auto dir = testing::scratch_dir("netpbm");
  const ImageTensor img = random_image(gen, 9, 13, 3);
  write_image(dir / "x.ppm", img);
  EXPECT_EQ(read_image(dir / "x.ppm"), img);
  EXPECT_EQ(read_file(dir / "x.ppm"), encode_netpbm(img));
}

TEST(Heatmap, UniformMapIsMidGrey) {
  VarianceMap vmap;
  vmap.rows = 2;
  vmap.cols = 3;
  vmap.values.assign(6, 0.0);
  const ImageTensor heat = variance_heatmap(vmap);
  EXPECT_EQ(heat, ImageTensor::filled(2, 3, 1, 128));
}

TEST(Heatmap, MinBlackMaxWhite) {
  VarianceMap vmap;
  vmap.rows = 1;
  vmap.cols = 3;
  vmap.values = {0.0, 50.0, 100.0};
  const ImageTensor heat = variance_heatmap(vmap);
  EXPECT_EQ(heat.at(0, 0, 0), 0);
  EXPECT_EQ(heat.at(0, 1, 0), 128);  // round(127.5)
  EXPECT_EQ(heat.at(0, 2, 0), 255);
  VarianceMap empty;
  EXPECT_CSVAR_ERROR(variance_heatmap(empty), kInvalidArgument);
}

TEST(Heatmap, OrderMatchesVariances) {
  std::mt19937_64 gen(33);
  const ImageTensor img = testing::textured_subject(gen, 64, 64, 3);
  const VarianceMap vmap = variance_map(img, partition_regions(img, 16));
  const ImageTensor heat = variance_heatmap(vmap);
  for (std::size_t i = 0; i < vmap.values.size(); ++i) {
    for (std::size_t j = 0; j < vmap.values.size(); ++j) {
      if (vmap.values[i] > vmap.values[j]) {
        EXPECT_GE(heat.data()[i], heat.data()[j]);
      }
    }
  }
  EXPECT_GT(heat.at(1, 1, 0), heat.at(0, 0, 0));
  const auto dir = testing::scratch_dir("heatmap");
  write_variance_heatmap(vmap, dir / "heat.pgm");
  EXPECT_EQ(read_image(dir / "heat.pgm"), heat);
}

}  // namespace
}  // namespace csvar
