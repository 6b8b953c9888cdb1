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
#include "csvar/dataset.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "csvar/error.hpp"
#include "csvar/regions.hpp"

namespace csvar {

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
constexpr std::size_t kCifarRecord = 3073;
constexpr int kCifarSide = 32;
constexpr int kCifarClasses = 10;
constexpr int kMnistClasses = 10;
// Dimensions above this are treated as corrupt headers.
constexpr std::uint32_t kMaxIdxSide = 1 << 15;

std::uint32_t read_be32(std::string_view bytes, std::size_t at) {
  const auto b = [&](std::size_t i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i]));
  };
  return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

}  // namespace

void LabeledDataset::validate() const {
  if (images.size() != labels.size()) {
    throw Error(ErrorCode::kCountMismatch, std::to_string(images.size()) + " images vs " +
                                               std::to_string(labels.size()) + " labels");
  }
  for (const ImageTensor& img : images) {
    if (!img.same_shape(images.front())) {
      throw Error(ErrorCode::kShapeMismatch, "dataset images differ in shape");
    }
  }
  for (int label : labels) {
    if (label < 0 || label >= num_classes) {
      throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(label) +
                                                   " outside [0, " +
                                                   std::to_string(num_classes) + ")");
    }
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.num_classes = num_classes;
  out.images.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= images.size()) {
      throw Error(ErrorCode::kInvalidArgument, "subset index " + std::to_string(i) +
                                                   " out of range");
    }
    out.images.push_back(images[i]);
    out.labels.push_back(labels[i]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed for " + path.string());
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

LabeledDataset parse_idx(std::string_view images_bytes, std::string_view labels_bytes) {
  if (images_bytes.size() < 16) {
    throw Error(ErrorCode::kTruncatedFile, "IDX image header shorter than 16 bytes");
  }
  if (labels_bytes.size() < 8) {
    throw Error(ErrorCode::kTruncatedFile, "IDX label header shorter than 8 bytes");
  }
  if (read_be32(images_bytes, 0) != kIdxImagesMagic) {
    throw Error(ErrorCode::kBadMagic, "IDX images magic is not 0x00000803");
  }
  if (read_be32(labels_bytes, 0) != kIdxLabelsMagic) {
    throw Error(ErrorCode::kBadMagic, "IDX labels magic is not 0x00000801");
  }
  const std::uint32_t count = read_be32(images_bytes, 4);
  const std::uint32_t rows = read_be32(images_bytes, 8);
  const std::uint32_t cols = read_be32(images_bytes, 12);
  const std::uint32_t label_count = read_be32(labels_bytes, 4);
  if (rows == 0 || cols == 0 || rows > kMaxIdxSide || cols > kMaxIdxSide) {
    throw Error(ErrorCode::kMalformedHeader, "implausible IDX image dimensions");
  }
  const std::uint64_t image_bytes = std::uint64_t{rows} * cols;
  const std::uint64_t expected = 16 + std::uint64_t{count} * image_bytes;
  if (images_bytes.size() < expected) {
    throw Error(ErrorCode::kTruncatedFile, "IDX image payload shorter than header declares");
  }
  if (images_bytes.size() > expected) {
    throw Error(ErrorCode::kCountMismatch, "IDX image payload longer than header declares");
  }
  if (labels_bytes.size() < 8 + std::uint64_t{label_count}) {
    throw Error(ErrorCode::kTruncatedFile, "IDX label payload shorter than header declares");
  }
  if (labels_bytes.size() > 8 + std::uint64_t{label_count}) {
    throw Error(ErrorCode::kCountMismatch, "IDX label payload longer than header declares");
  }
  if (label_count != count) {
    throw Error(ErrorCode::kCountMismatch, std::to_string(count) + " images vs " +
                                               std::to_string(label_count) + " labels");
  }

  LabeledDataset ds;
  ds.num_classes = kMnistClasses;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const int label = static_cast<unsigned char>(labels_bytes[8 + i]);
    if (label >= kMnistClasses) {
      throw Error(ErrorCode::kLabelOutOfRange, "IDX label " + std::to_string(label));
    }
    const char* begin = images_bytes.data() + 16 + i * image_bytes;
    std::vector<std::uint8_t> pixels(begin, begin + image_bytes);
    ds.images.emplace_back(static_cast<int>(rows), static_cast<int>(cols), 1,
                           std::move(pixels));
    ds.labels.push_back(label);
  }
  return ds;
}

LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  return parse_idx(read_file(images_path), read_file(labels_path));
}

LabeledDataset parse_cifar_bin(std::string_view bytes) {
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw Error(ErrorCode::kTruncatedFile, "CIFAR file size " + std::to_string(bytes.size()) +
                                               " is not a positive multiple of 3073");
  }
  const std::size_t count = bytes.size() / kCifarRecord;
  constexpr std::size_t plane = kCifarSide * kCifarSide;
  LabeledDataset ds;
  ds.num_classes = kCifarClasses;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const std::string_view record = bytes.substr(r * kCifarRecord, kCifarRecord);
    const int label = static_cast<unsigned char>(record[0]);
    if (label >= kCifarClasses) {
      throw Error(ErrorCode::kLabelOutOfRange, "CIFAR record " + std::to_string(r) +
                                                   " has label " + std::to_string(label));
    }
    std::vector<std::uint8_t> pixels(3 * plane);
    for (std::size_t p = 0; p < plane; ++p) {
      for (std::size_t c = 0; c < 3; ++c) {
        pixels[p * 3 + c] = static_cast<std::uint8_t>(record[1 + c * plane + p]);
      }
    }
    ds.images.emplace_back(kCifarSide, kCifarSide, 3, std::move(pixels));
    ds.labels.push_back(label);
  }
  return ds;
}

LabeledDataset load_cifar_bin(std::span<const std::filesystem::path> paths) {
  LabeledDataset all;
  all.num_classes = kCifarClasses;
  for (const auto& path : paths) {
    LabeledDataset part = parse_cifar_bin(read_file(path));
    std::move(part.images.begin(), part.images.end(), std::back_inserter(all.images));
    all.labels.insert(all.labels.end(), part.labels.begin(), part.labels.end());
  }
  return all;
}

LabeledDataset pad_to_region_multiple(const LabeledDataset& dataset) {
  LabeledDataset out;
  out.num_classes = dataset.num_classes;
  out.labels = dataset.labels;
  out.images.reserve(dataset.size());
  for (const ImageTensor& img : dataset.images) {
    out.images.push_back(
        reflect_pad_to_multiple(img, region_size(img.height(), img.width())));
  }
  return out;
}

}  // namespace csvar
