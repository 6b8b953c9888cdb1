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
// Loss-threshold membership inference: score = -loss, a sample is called a
// member when its score clears the threshold, and every distinct threshold
// is swept to build the ROC curve.
#ifndef CSVAR_MIA_HPP_
#define CSVAR_MIA_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csvar {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct MiaReport {
  std::vector<RocPoint> roc_points;  // (0,0) ... (1,1), non-decreasing
  double auc = 0.0;                  // trapezoidal area under roc_points
  double rank_auc = 0.0;             // Mann-Whitney statistic, ties count 1/2
  std::size_t member_count = 0;
  std::size_t nonmember_count = 0;

  std::string roc_csv() const;
  std::string summary_json() const;
};

// Positive = member. Higher score = more likely member. Throws kEmptyCohort
// if either side is empty.
MiaReport roc_from_scores(std::span<const double> member_scores,
                          std::span<const double> nonmember_scores);

MiaReport mia_threshold_attack(std::span<const double> member_losses,
                               std::span<const double> nonmember_losses);

double trapezoid_auc(std::span<const RocPoint> points);
double rank_statistic_auc(std::span<const double> member_scores,
                          std::span<const double> nonmember_scores);

struct MiaCohorts {
  std::vector<std::size_t> members;     // indices into the training set
  std::vector<std::size_t> nonmembers;  // indices into the held-out set
};

// Seeded: `count` distinct training indices and min(count, test_size)
// distinct held-out indices.
MiaCohorts sample_cohorts(std::size_t train_size, std::size_t test_size, std::size_t count,
                          std::uint64_t seed);

}  // namespace csvar

#endif  // CSVAR_MIA_HPP_
