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
#ifndef CSVAR_DATASET_HPP_
#define CSVAR_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csvar/image.hpp"

namespace csvar {

struct LabeledDataset {
  std::vector<ImageTensor> images;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const noexcept { return images.size(); }
  bool empty() const noexcept { return images.empty(); }
  int height() const { return images.empty() ? 0 : images.front().height(); }
  int width() const { return images.empty() ? 0 : images.front().width(); }
  int channels() const { return images.empty() ? 0 : images.front().channels(); }

  // Throws kShapeMismatch / kCountMismatch / kLabelOutOfRange.
  void validate() const;
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

// IDX (MNIST) pair: images magic 0x00000803 with 3 big-endian u32 dims
// (count, rows, cols), labels magic 0x00000801 with one dim (count).
LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);
LabeledDataset parse_idx(std::string_view images_bytes, std::string_view labels_bytes);

// CIFAR-10 binary batches: 3073-byte records, one label byte (0-9) followed
// by 1024 R, 1024 G and 1024 B values. Converted to interleaved RGB.
LabeledDataset load_cifar_bin(std::span<const std::filesystem::path> paths);
LabeledDataset parse_cifar_bin(std::string_view bytes);

// Reflect-pads every image to a multiple of region_size(H, W) so each region
// is exactly S x S (MNIST 28x28 -> 32x32).
LabeledDataset pad_to_region_multiple(const LabeledDataset& dataset);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace csvar

#endif  // CSVAR_DATASET_HPP_
