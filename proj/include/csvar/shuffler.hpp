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
// Variance-guided block shuffling.
//
// Each S x S region of an image is cut into BS x BS blocks and the blocks are
// permuted inside the region; pixels never leave their region. BS comes from
// the region's variance relative to the image's median region variance:
// S/4 for regions strictly above the median, S/2 otherwise. In channel-wise
// mode every channel plane gets its own permutation, so co-located R/G/B
// values end up coming from different blocks.
//
// Seeds are derived per (master seed, image, epoch, region, channel) with
// derive_region_seed() and drive a Fisher-Yates shuffle (see rng.hpp), so a
// given (seed, epoch, image) always yields the same bytes.
#ifndef CSVAR_SHUFFLER_HPP_
#define CSVAR_SHUFFLER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csvar/image.hpp"
#include "csvar/regions.hpp"

namespace csvar {

enum class ShuffleMode { kSpatialOnly, kChannelWise };

std::string_view to_string(ShuffleMode mode);
// Accepts "spatial-only"/"spatial" and "channel-wise"/"channel".
ShuffleMode parse_shuffle_mode(std::string_view text);

struct ShuffleConfig {
  std::uint64_t master_seed = 0;
  std::uint64_t epoch = 0;
  ShuffleMode mode = ShuffleMode::kChannelWise;
  // Replaces the variance-guided block size in every region.
  std::optional<int> block_size_override;
  // Selects the Gaussian-noise baseline instead of shuffling.
  std::optional<double> dp_sigma;

  // Throws kInvalidOverride / kInvalidArgument when the fields are
  // inconsistent for region size `s`.
  void validate(int s) const;
};

struct PartitionPlan {
  int region_size = 0;
  int rows = 0;
  int cols = 0;
  std::vector<int> block_sizes;  // row-major

  int at(int row, int col) const {
    return block_sizes[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(col)];
  }
};

PartitionPlan plan_partition(const VarianceMap& vmap, int s,
                             std::optional<int> block_size_override = std::nullopt);

std::uint64_t derive_region_seed(std::uint64_t master_seed, std::uint64_t image_id,
                                 std::uint64_t epoch, std::uint64_t region_row,
                                 std::uint64_t region_col, std::uint64_t channel);

// Seed for the Gaussian baseline; separate domain from the shuffle seeds.
std::uint64_t derive_noise_seed(std::uint64_t master_seed, std::uint64_t image_id,
                                std::uint64_t epoch);

// `region` is one S x S region as a standalone image. Block k (row-major
// over the (S/BS)^2 grid) of the output holds source block perm[k].
ImageTensor spatial_shuffle_region(const ImageTensor& region, int block_size,
                                   std::uint64_t seed);

// One seed per channel; channel c is permuted with seeds[c].
ImageTensor channel_shuffle_region(const ImageTensor& region, int block_size,
                                   std::span<const std::uint64_t> seeds);

// Full pipeline: grid, variance map, partition plan, then per-region
// shuffling in config.mode. Image dimensions must be multiples of
// region_size(H, W); pad with reflect_pad_to_multiple() first.
ImageTensor csvar_shuffle(const ImageTensor& image, const ShuffleConfig& config,
                          std::uint64_t image_id);

// v -> clamp(round(v + N(0, sigma^2)), 0, 255), independently per value.
ImageTensor gaussian_obfuscate(const ImageTensor& image, double sigma, std::uint64_t seed);

// Dispatches on config: Gaussian baseline when dp_sigma is set (seeded by
// derive_noise_seed), csvar_shuffle otherwise.
ImageTensor obfuscate(const ImageTensor& image, const ShuffleConfig& config,
                      std::uint64_t image_id);

}  // namespace csvar

#endif  // CSVAR_SHUFFLER_HPP_
