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
#include "csvar/image.hpp"

#include <algorithm>
#include <string>

#include "csvar/error.hpp"

namespace csvar {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonDivisibleDimensions: return "NonDivisibleDimensions";
    case ErrorCode::kRegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::kInvalidOverride: return "InvalidOverride";
    case ErrorCode::kBlockSizeMismatch: return "BlockSizeMismatch";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kEmptyClient: return "EmptyClient";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptyClientList: return "EmptyClientList";
    case ErrorCode::kMissingVariant: return "MissingVariant";
    case ErrorCode::kEmptyCohort: return "EmptyCohort";
    case ErrorCode::kNotColorImage: return "NotColorImage";
  }
  return "Unknown";
}

namespace {

void check_shape(int height, int width, int channels) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " + std::to_string(height) +
                    "x" + std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "channels must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

ImageTensor::ImageTensor(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
  check_shape(height, width, channels);
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), 0);
}

ImageTensor::ImageTensor(int height, int width, int channels,
                         std::vector<std::uint8_t> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_shape(height, width, channels);
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::kShapeMismatch,
                "data length " + std::to_string(data_.size()) + " != " +
                    std::to_string(height) + "*" + std::to_string(width) + "*" +
                    std::to_string(channels));
  }
}

ImageTensor ImageTensor::filled(int height, int width, int channels,
                                std::uint8_t value) {
  ImageTensor img(height, width, channels);
  std::fill(img.data_.begin(), img.data_.end(), value);
  return img;
}

ImageTensor ImageTensor::crop(const Rect& r) const {
  if (!contains(r) || r.height < 1 || r.width < 1) {
    throw Error(ErrorCode::kRegionOutOfBounds, "crop rectangle outside image");
  }
  ImageTensor out(r.height, r.width, channels_);
  const std::size_t row_bytes =
      static_cast<std::size_t>(r.width) * static_cast<std::size_t>(channels_);
  for (int y = 0; y < r.height; ++y) {
    auto src = data_.begin() + static_cast<std::ptrdiff_t>(offset(r.y + y, r.x, 0));
    std::copy_n(src, row_bytes,
                out.data_.begin() + static_cast<std::ptrdiff_t>(out.offset(y, 0, 0)));
  }
  return out;
}

void ImageTensor::paste(const ImageTensor& patch, int y, int x) {
  if (patch.channels_ != channels_ ||
      !contains(Rect{y, x, patch.height_, patch.width_})) {
    throw Error(ErrorCode::kRegionOutOfBounds, "patch does not fit in image");
  }
  const std::size_t row_bytes =
      static_cast<std::size_t>(patch.width_) * static_cast<std::size_t>(channels_);
  for (int py = 0; py < patch.height_; ++py) {
    auto src = patch.data_.begin() + static_cast<std::ptrdiff_t>(patch.offset(py, 0, 0));
    std::copy_n(src, row_bytes,
                data_.begin() + static_cast<std::ptrdiff_t>(offset(y + py, x, 0)));
  }
}

}  // namespace csvar
