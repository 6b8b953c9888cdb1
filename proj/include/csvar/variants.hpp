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
// Offline epoch variants.
//
// Layout of an output directory:
//   epoch_0000.bin ... one blob per epoch: every image in dataset order,
//                      each stored channel-planar (C planes of H*W bytes)
//   manifest.json      written last, after every blob is on disk
//
// Labels are never copied; the manifest's "source" names the base dataset.
#ifndef CSVAR_VARIANTS_HPP_
#define CSVAR_VARIANTS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csvar/dataset.hpp"
#include "csvar/image.hpp"
#include "csvar/shuffler.hpp"

namespace csvar {

std::string sha256_hex(std::string_view bytes);

struct VariantFile {
  std::uint64_t epoch = 0;
  std::string path;  // relative to the manifest's directory
  std::string sha256;
};

struct DatasetManifest {
  std::string source;
  std::size_t count = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  int num_classes = 0;
  std::uint64_t epochs = 0;
  std::uint64_t master_seed = 0;
  std::string mode;  // "spatial-only", "channel-wise" or "dp"
  std::optional<int> block_size;
  std::optional<double> dp_sigma;
  std::vector<VariantFile> files;

  std::string to_json() const;
  static DatasetManifest from_json(std::string_view text);
};

// Per-epoch obfuscated copies of `images`: result[e][i] = obfuscate(images[i])
// under `config` with epoch e and image id i.
using EpochVariants = std::vector<std::vector<ImageTensor>>;
EpochVariants generate_variants(std::span<const ImageTensor> images,
                                const ShuffleConfig& config, std::uint64_t epochs);

std::string encode_variant_blob(std::span<const ImageTensor> images);
std::vector<ImageTensor> decode_variant_blob(std::string_view bytes, std::size_t count,
                                             int height, int width, int channels);

// Writes epochs blobs plus manifest.json into out_dir (created if needed).
// config.epoch is ignored; every epoch in [0, epochs) is produced.
DatasetManifest generate_epoch_variants(const LabeledDataset& dataset,
                                        const ShuffleConfig& config, std::uint64_t epochs,
                                        const std::filesystem::path& out_dir,
                                        std::string source);

// Parses a manifest and verifies every listed checksum against the files on
// disk (kChecksumMismatch / kMissingVariant).
DatasetManifest load_manifest(const std::filesystem::path& manifest_path);

// Reads one epoch blob named by the manifest, checking its checksum.
std::vector<ImageTensor> load_epoch_variant(const DatasetManifest& manifest,
                                            const std::filesystem::path& manifest_dir,
                                            std::uint64_t epoch);

EpochVariants load_all_variants(const std::filesystem::path& manifest_path);

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each
// index is visited exactly once; fn must not share mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace csvar

#endif  // CSVAR_VARIANTS_HPP_
