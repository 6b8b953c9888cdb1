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
#ifndef CSVAR_NETPBM_HPP_
#define CSVAR_NETPBM_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "csvar/image.hpp"
#include "csvar/regions.hpp"

namespace csvar {

// Binary PGM (P5) for one channel, PPM (P6) for three; maxval 255 only.
// Written header: "P5\n<w> <h>\n255\n". The reader accepts any whitespace
// and '#' comments between header fields.
std::string encode_netpbm(const ImageTensor& image);
ImageTensor decode_netpbm(std::string_view bytes);

void write_image(const std::filesystem::path& path, const ImageTensor& image);
ImageTensor read_image(const std::filesystem::path& path);

// rows x cols grayscale image, one pixel per region: min-max normalised to
// [0, 255] and rounded, lighter = higher variance. A map whose entries are
// all equal renders as uniform 128.
ImageTensor variance_heatmap(const VarianceMap& vmap);
void write_variance_heatmap(const VarianceMap& vmap, const std::filesystem::path& path);

}  // namespace csvar

#endif  // CSVAR_NETPBM_HPP_
