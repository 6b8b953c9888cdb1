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
#include "csvar/regions.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "csvar/error.hpp"

namespace csvar {

int region_size(int height, int width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "region_size needs positive dimensions");
  }
  const std::int64_t longest = std::max(height, width);
  std::int64_t s = 1;
  while (s * s < longest) s *= 2;
  return static_cast<int>(std::max<std::int64_t>(s, 2));
}

namespace {

// Maps an index past the end back into [0, n) by reflect-101 folding.
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  return i < n ? i : period - i;
}

}  // namespace

ImageTensor reflect_pad_to_multiple(const ImageTensor& image, int s) {
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "pad multiple must be >= 1");
  const int h = image.height();
  const int w = image.width();
  const int out_h = (h + s - 1) / s * s;
  const int out_w = (w + s - 1) / s * s;
  if (out_h == h && out_w == w) return image;

  const int c = image.channels();
  ImageTensor out(out_h, out_w, c);
  for (int y = 0; y < out_h; ++y) {
    const int sy = reflect_index(y, h);
    for (int x = 0; x < out_w; ++x) {
      const int sx = reflect_index(x, w);
      for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = image.at(sy, sx, ch);
    }
  }
  return out;
}

RegionGrid partition_regions(const ImageTensor& image, int s) {
  if (s < 1 || image.height() % s != 0 || image.width() % s != 0) {
    throw Error(ErrorCode::kNonDivisibleDimensions,
                std::to_string(image.height()) + "x" + std::to_string(image.width()) +
                    " is not a multiple of region size " + std::to_string(s));
  }
  RegionGrid grid;
  grid.region_size = s;
  grid.rows = image.height() / s;
  grid.cols = image.width() / s;
  grid.regions.reserve(static_cast<std::size_t>(grid.rows) *
                       static_cast<std::size_t>(grid.cols));
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      grid.regions.push_back(Region{r, c, Rect{r * s, c * s, s, s}});
    }
  }
  return grid;
}

double region_variance(const ImageTensor& image, const Rect& region) {
  if (!image.contains(region) || region.height < 1 || region.width < 1) {
    throw Error(ErrorCode::kRegionOutOfBounds, "region outside image bounds");
  }
  const int channels = image.channels();
  const auto n = static_cast<std::uint64_t>(region.height) *
                 static_cast<std::uint64_t>(region.width);
  double total = 0.0;
  for (int c = 0; c < channels; ++c) {
    // Integer moments are exact; n*sum(v^2) - sum(v)^2 = n^2 * variance.
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (int y = region.y; y < region.y + region.height; ++y) {
      for (int x = region.x; x < region.x + region.width; ++x) {
        const std::uint64_t v = image.at(y, x, c);
        sum += v;
        sum_sq += v * v;
      }
    }
    using Wide = unsigned __int128;
    const Wide scaled = Wide{n} * sum_sq - Wide{sum} * sum;
    total += static_cast<double>(scaled) / (static_cast<double>(n) * static_cast<double>(n));
  }
  return total / channels;
}

double VarianceMap::min() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double VarianceMap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double median_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

VarianceMap variance_map(const ImageTensor& image, const RegionGrid& grid) {
  VarianceMap map;
  map.rows = grid.rows;
  map.cols = grid.cols;
  map.values.reserve(grid.regions.size());
  for (const Region& region : grid.regions) {
    map.values.push_back(region_variance(image, region.rect));
  }
  map.median = median_of(map.values);
  return map;
}

}  // namespace csvar
