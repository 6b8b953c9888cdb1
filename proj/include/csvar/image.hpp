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
#ifndef CSVAR_IMAGE_HPP_
#define CSVAR_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csvar {

// Axis-aligned pixel rectangle; (y, x) is the top-left corner.
struct Rect {
  int y = 0;
  int x = 0;
  int height = 0;
  int width = 0;

  bool operator==(const Rect&) const = default;
};

// Height x width x channels grid of 8-bit intensities, stored row-major with
// channels interleaved (offset = (y * width + x) * channels + c). Channels is
// 1 (grayscale) or 3 (RGB).
class ImageTensor {
 public:
  ImageTensor() = default;
  // Zero-filled image.
  ImageTensor(int height, int width, int channels);
  ImageTensor(int height, int width, int channels, std::vector<std::uint8_t> data);

  static ImageTensor filled(int height, int width, int channels, std::uint8_t value);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return data_; }

  std::size_t offset(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }
  std::uint8_t at(int y, int x, int c) const noexcept { return data_[offset(y, x, c)]; }
  std::uint8_t& at(int y, int x, int c) noexcept { return data_[offset(y, x, c)]; }

  bool same_shape(const ImageTensor& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }
  bool contains(const Rect& r) const noexcept {
    return r.y >= 0 && r.x >= 0 && r.height >= 0 && r.width >= 0 &&
           r.y + r.height <= height_ && r.x + r.width <= width_;
  }

  // Copies a sub-rectangle into a new image with the same channel count.
  ImageTensor crop(const Rect& r) const;
  // Writes `patch` with its top-left corner at (y, x).
  void paste(const ImageTensor& patch, int y, int x);

  bool operator==(const ImageTensor&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace csvar

#endif  // CSVAR_IMAGE_HPP_
