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
// Region grid and region-variance: the sensitivity signal that drives the
// adaptive block partitioning in shuffler.hpp.
#ifndef CSVAR_REGIONS_HPP_
#define CSVAR_REGIONS_HPP_

#include <span>
#include <vector>

#include "csvar/image.hpp"

namespace csvar {

// Side length S of the square regions: 2^ceil(log2(sqrt(max(H, W)))),
// i.e. the smallest power of two whose square is >= max(H, W), floored at 2.
// 224x224 -> 16, 32x32 -> 8.
int region_size(int height, int width);

// Grows the image to the next multiple of `s` in both dimensions by mirroring
// interior pixels across the bottom/right edges (reflect-101: the edge row
// itself is not repeated). Interior pixels are untouched; an image that is
// already divisible is returned as-is.
ImageTensor reflect_pad_to_multiple(const ImageTensor& image, int s);

struct Region {
  int row = 0;
  int col = 0;
  Rect rect;
};

struct RegionGrid {
  int region_size = 0;
  int rows = 0;
  int cols = 0;
  std::vector<Region> regions;  // row-major

  const Region& at(int row, int col) const {
    return regions[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(col)];
  }
};

// Throws kNonDivisibleDimensions unless both dimensions are multiples of s.
RegionGrid partition_regions(const ImageTensor& image, int s);

// Channel-averaged population variance of the pixels inside `region`.
// Throws kRegionOutOfBounds for rectangles that leave the image.
double region_variance(const ImageTensor& image, const Rect& region);

struct VarianceMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major, rows * cols
  double median = 0.0;

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
  double min() const;
  double max() const;
};

// Median; an even count averages the two middle values. Empty input -> 0.
double median_of(std::span<const double> values);

VarianceMap variance_map(const ImageTensor& image, const RegionGrid& grid);

}  // namespace csvar

#endif  // CSVAR_REGIONS_HPP_
