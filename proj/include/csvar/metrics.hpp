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
#ifndef CSVAR_METRICS_HPP_
#define CSVAR_METRICS_HPP_

#include <optional>
#include <string>

#include "csvar/image.hpp"

namespace csvar {

// Zero-mean normalised cross-correlation per channel, averaged over
// channels. A channel that is constant in either image contributes 0.
double ncc(const ImageTensor& original, const ImageTensor& other);

// Mean of |corr(R,G)|, |corr(R,B)|, |corr(G,B)| over all pixels; pairs with
// a constant channel contribute 0. Throws kNotColorImage unless C = 3.
double inter_channel_correlation(const ImageTensor& image);

// Sum over channels of the L1 distance between 256-bin histograms, divided
// by H * W * C. Identical histograms -> 0, disjoint -> 2.
double per_channel_histogram_l1(const ImageTensor& a, const ImageTensor& b);

struct ObfuscationReport {
  double mean_ncc = 0.0;
  // icc(original) - icc(transformed); colour images only.
  std::optional<double> inter_channel_corr_delta;
  double per_channel_histogram_l1 = 0.0;

  std::string to_json() const;
};

ObfuscationReport obfuscation_report(const ImageTensor& original,
                                     const ImageTensor& transformed);

}  // namespace csvar

#endif  // CSVAR_METRICS_HPP_
