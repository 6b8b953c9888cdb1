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
#include "csvar/netpbm.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>

#include "csvar/dataset.hpp"
#include "csvar/error.hpp"

namespace csvar {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and comments, then reads a decimal field.
  std::uint64_t number(const char* what) {
    skip_separators();
    std::uint64_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kMalformedHeader, std::string(what) + " out of range");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw Error(ErrorCode::kMalformedHeader, std::string("missing ") + what);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorCode::kMalformedHeader, "no whitespace before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

std::string encode_netpbm(const ImageTensor& image) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot encode empty image");
  std::string out = image.channels() == 1 ? "P5\n" : "P6\n";
  out += std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.data().data()), image.size());
  return out;
}

ImageTensor decode_netpbm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorCode::kMalformedHeader, "not a binary PGM/PPM (P5/P6)");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader header(bytes);
  const std::uint64_t width = header.number("width");
  const std::uint64_t height = header.number("height");
  const std::uint64_t maxval = header.number("maxval");
  if (width == 0 || height == 0 || width > (1u << 16) || height > (1u << 16)) {
    throw Error(ErrorCode::kMalformedHeader, "implausible image dimensions");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kUnsupportedMaxval,
                "maxval " + std::to_string(maxval) + " (only 255 is supported)");
  }
  const std::size_t start = header.raster_start();
  const std::uint64_t expected = width * height * static_cast<std::uint64_t>(channels);
  if (bytes.size() - start != expected) {
    throw Error(ErrorCode::kMalformedHeader,
                "raster holds " + std::to_string(bytes.size() - start) + " bytes, expected " +
                    std::to_string(expected));
  }
  const auto* raster = reinterpret_cast<const std::uint8_t*>(bytes.data() + start);
  return ImageTensor(static_cast<int>(height), static_cast<int>(width), channels,
                     std::vector<std::uint8_t>(raster, raster + expected));
}

void write_image(const std::filesystem::path& path, const ImageTensor& image) {
  write_file(path, encode_netpbm(image));
}

ImageTensor read_image(const std::filesystem::path& path) {
  return decode_netpbm(read_file(path));
}

ImageTensor variance_heatmap(const VarianceMap& vmap) {
  if (vmap.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "variance map is empty");
  }
  ImageTensor out(vmap.rows, vmap.cols, 1);
  const double lo = vmap.min();
  const double hi = vmap.max();
  for (std::size_t i = 0; i < vmap.values.size(); ++i) {
    double level = 128.0;
    if (hi > lo) level = std::round((vmap.values[i] - lo) / (hi - lo) * 255.0);
    out.data()[i] = static_cast<std::uint8_t>(level);
  }
  return out;
}

void write_variance_heatmap(const VarianceMap& vmap, const std::filesystem::path& path) {
  write_image(path, variance_heatmap(vmap));
}

}  // namespace csvar
