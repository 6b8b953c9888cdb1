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
#include "csvar/shuffler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "csvar/error.hpp"
#include "csvar/rng.hpp"

namespace csvar {

namespace {

constexpr std::uint64_t kNoiseDomain = 0x6e6f697365ULL;  // "noise"

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check_block_size(int s, int block_size) {
  if (block_size < 1 || s % block_size != 0) {
    throw Error(ErrorCode::kBlockSizeMismatch,
                "block size " + std::to_string(block_size) + " does not divide region size " +
                    std::to_string(s));
  }
}

// Copies the blocks of `region` (inside src) to dst so that destination
// block k receives source block perm[k], for channels [c_begin, c_end).
void permute_blocks(const ImageTensor& src, ImageTensor& dst, const Rect& region,
                    int block_size, std::span<const std::size_t> perm, int c_begin,
                    int c_end) {
  const int per_side = region.width / block_size;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const int dst_by = static_cast<int>(k) / per_side;
    const int dst_bx = static_cast<int>(k) % per_side;
    const int src_by = static_cast<int>(perm[k]) / per_side;
    const int src_bx = static_cast<int>(perm[k]) % per_side;
    for (int dy = 0; dy < block_size; ++dy) {
      const int sy = region.y + src_by * block_size + dy;
      const int ty = region.y + dst_by * block_size + dy;
      for (int dx = 0; dx < block_size; ++dx) {
        const int sx = region.x + src_bx * block_size + dx;
        const int tx = region.x + dst_bx * block_size + dx;
        for (int c = c_begin; c < c_end; ++c) dst.at(ty, tx, c) = src.at(sy, sx, c);
      }
    }
  }
}

std::size_t block_count(int s, int block_size) {
  const auto per_side = static_cast<std::size_t>(s / block_size);
  return per_side * per_side;
}

void check_square_region(const ImageTensor& region, int block_size) {
  if (region.height() != region.width()) {
    throw Error(ErrorCode::kBlockSizeMismatch, "region must be square");
  }
  check_block_size(region.height(), block_size);
}

}  // namespace

std::string_view to_string(ShuffleMode mode) {
  return mode == ShuffleMode::kSpatialOnly ? "spatial-only" : "channel-wise";
}

ShuffleMode parse_shuffle_mode(std::string_view text) {
  if (text == "spatial-only" || text == "spatial") return ShuffleMode::kSpatialOnly;
  if (text == "channel-wise" || text == "channel") return ShuffleMode::kChannelWise;
  throw Error(ErrorCode::kInvalidArgument, "unknown shuffle mode '" + std::string(text) + "'");
}

void ShuffleConfig::validate(int s) const {
  if (block_size_override) {
    const int bs = *block_size_override;
    if (!is_power_of_two(bs) || s % bs != 0) {
      throw Error(ErrorCode::kInvalidOverride,
                  "block size " + std::to_string(bs) +
                      " must be a power of two dividing region size " + std::to_string(s));
    }
  }
  if (dp_sigma) {
    if (!(*dp_sigma >= 0.0) || !std::isfinite(*dp_sigma)) {
      throw Error(ErrorCode::kInvalidArgument, "dp sigma must be finite and >= 0");
    }
    if (block_size_override) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dp sigma and block size override are mutually exclusive");
    }
  }
}

PartitionPlan plan_partition(const VarianceMap& vmap, int s,
                             std::optional<int> block_size_override) {
  if (s < 2 || !is_power_of_two(s)) {
    throw Error(ErrorCode::kInvalidArgument,
                "region size must be a power of two >= 2, got " + std::to_string(s));
  }
  if (block_size_override &&
      (!is_power_of_two(*block_size_override) || s % *block_size_override != 0)) {
    throw Error(ErrorCode::kInvalidOverride,
                "block size " + std::to_string(*block_size_override) +
                    " does not divide region size " + std::to_string(s));
  }
  PartitionPlan plan;
  plan.region_size = s;
  plan.rows = vmap.rows;
  plan.cols = vmap.cols;
  plan.block_sizes.reserve(vmap.values.size());
  const int fine = std::max(1, s / 4);
  const int coarse = std::max(1, s / 2);
  for (double v : vmap.values) {
    if (block_size_override) {
      plan.block_sizes.push_back(*block_size_override);
    } else {
      plan.block_sizes.push_back(v > vmap.median ? fine : coarse);
    }
  }
  return plan;
}

std::uint64_t derive_region_seed(std::uint64_t master_seed, std::uint64_t image_id,
                                 std::uint64_t epoch, std::uint64_t region_row,
                                 std::uint64_t region_col, std::uint64_t channel) {
  const std::array<std::uint64_t, 5> words{image_id, epoch, region_row, region_col, channel};
  return combine_seed(master_seed, words);
}

std::uint64_t derive_noise_seed(std::uint64_t master_seed, std::uint64_t image_id,
                                std::uint64_t epoch) {
  const std::array<std::uint64_t, 2> words{image_id, epoch};
  return combine_seed(master_seed ^ kNoiseDomain, words);
}

ImageTensor spatial_shuffle_region(const ImageTensor& region, int block_size,
                                   std::uint64_t seed) {
  check_square_region(region, block_size);
  const int s = region.height();
  const auto perm = seeded_permutation(block_count(s, block_size), seed);
  ImageTensor out = region;
  permute_blocks(region, out, Rect{0, 0, s, s}, block_size, perm, 0, region.channels());
  return out;
}

ImageTensor channel_shuffle_region(const ImageTensor& region, int block_size,
                                   std::span<const std::uint64_t> seeds) {
  check_square_region(region, block_size);
  if (seeds.size() != static_cast<std::size_t>(region.channels())) {
    throw Error(ErrorCode::kInvalidArgument, "need exactly one seed per channel");
  }
  const int s = region.height();
  ImageTensor out = region;
  for (int c = 0; c < region.channels(); ++c) {
    const auto perm = seeded_permutation(block_count(s, block_size), seeds[c]);
    permute_blocks(region, out, Rect{0, 0, s, s}, block_size, perm, c, c + 1);
  }
  return out;
}

ImageTensor csvar_shuffle(const ImageTensor& image, const ShuffleConfig& config,
                          std::uint64_t image_id) {
  if (config.dp_sigma) {
    throw Error(ErrorCode::kInvalidArgument, "csvar_shuffle called with a dp sigma set");
  }
  const int s = region_size(image.height(), image.width());
  config.validate(s);
  const RegionGrid grid = partition_regions(image, s);
  const VarianceMap vmap = variance_map(image, grid);
  const PartitionPlan plan = plan_partition(vmap, s, config.block_size_override);

  ImageTensor out = image;
  const int channels = image.channels();
  for (const Region& region : grid.regions) {
    const int bs = plan.at(region.row, region.col);
    const std::size_t blocks = block_count(s, bs);
    if (blocks < 2) continue;
    const auto row = static_cast<std::uint64_t>(region.row);
    const auto col = static_cast<std::uint64_t>(region.col);
    if (config.mode == ShuffleMode::kSpatialOnly) {
      const auto perm = seeded_permutation(
          blocks, derive_region_seed(config.master_seed, image_id, config.epoch, row, col, 0));
      permute_blocks(image, out, region.rect, bs, perm, 0, channels);
    } else {
      for (int c = 0; c < channels; ++c) {
        const auto perm = seeded_permutation(
            blocks, derive_region_seed(config.master_seed, image_id, config.epoch, row, col,
                                       static_cast<std::uint64_t>(c)));
        permute_blocks(image, out, region.rect, bs, perm, c, c + 1);
      }
    }
  }
  return out;
}

ImageTensor gaussian_obfuscate(const ImageTensor& image, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return image;
  Rng rng(seed);
  ImageTensor out = image;
  for (std::uint8_t& v : out.data()) {
    const double noisy = std::round(static_cast<double>(v) + sigma * rng.normal());
    v = static_cast<std::uint8_t>(std::clamp(noisy, 0.0, 255.0));
  }
  return out;
}

ImageTensor obfuscate(const ImageTensor& image, const ShuffleConfig& config,
                      std::uint64_t image_id) {
  if (config.dp_sigma) {
    config.validate(region_size(image.height(), image.width()));
    return gaussian_obfuscate(image, *config.dp_sigma,
                              derive_noise_seed(config.master_seed, image_id, config.epoch));
  }
  return csvar_shuffle(image, config, image_id);
}

}  // namespace csvar
