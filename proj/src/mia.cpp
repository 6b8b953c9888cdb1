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
#include "csvar/mia.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "csvar/error.hpp"
#include "csvar/rng.hpp"

namespace csvar {

namespace {

struct Scored {
  double score;
  bool member;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

double rank_statistic_auc(std::span<const double> member_scores,
                          std::span<const double> nonmember_scores) {
  if (member_scores.empty() || nonmember_scores.empty()) {
    throw Error(ErrorCode::kEmptyCohort, "both cohorts must be non-empty");
  }
  std::vector<Scored> all;
  all.reserve(member_scores.size() + nonmember_scores.size());
  for (double s : member_scores) all.push_back({s, true});
  for (double s : nonmember_scores) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Mid-ranks (1-based) for tied groups.
  double member_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].member) member_rank_sum += mid_rank;
    }
    i = j;
  }
  const auto m = static_cast<double>(member_scores.size());
  const auto n = static_cast<double>(nonmember_scores.size());
  return (member_rank_sum - m * (m + 1.0) / 2.0) / (m * n);
}

MiaReport roc_from_scores(std::span<const double> member_scores,
                          std::span<const double> nonmember_scores) {
  if (member_scores.empty() || nonmember_scores.empty()) {
    throw Error(ErrorCode::kEmptyCohort, "both cohorts must be non-empty");
  }
  std::vector<Scored> all;
  all.reserve(member_scores.size() + nonmember_scores.size());
  for (double s : member_scores) all.push_back({s, true});
  for (double s : nonmember_scores) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });

  MiaReport report;
  report.member_count = member_scores.size();
  report.nonmember_count = nonmember_scores.size();
  const auto positives = static_cast<double>(member_scores.size());
  const auto negatives = static_cast<double>(nonmember_scores.size());
  report.roc_points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) {
      if (all[j].member) {
        ++tp;
      } else {
        ++fp;
      }
      ++j;
    }
    report.roc_points.push_back(
        {static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
    i = j;
  }
  report.auc = trapezoid_auc(report.roc_points);
  report.rank_auc = rank_statistic_auc(member_scores, nonmember_scores);
  return report;
}

MiaReport mia_threshold_attack(std::span<const double> member_losses,
                               std::span<const double> nonmember_losses) {
  std::vector<double> member_scores(member_losses.size());
  std::vector<double> nonmember_scores(nonmember_losses.size());
  std::transform(member_losses.begin(), member_losses.end(), member_scores.begin(),
                 [](double l) { return -l; });
  std::transform(nonmember_losses.begin(), nonmember_losses.end(), nonmember_scores.begin(),
                 [](double l) { return -l; });
  return roc_from_scores(member_scores, nonmember_scores);
}

std::string MiaReport::roc_csv() const {
  std::string csv = "fpr,tpr\n";
  for (const RocPoint& p : roc_points) csv += fmt(p.fpr) + "," + fmt(p.tpr) + "\n";
  return csv;
}

std::string MiaReport::summary_json() const {
  nlohmann::json j;
  j["auc"] = auc;
  j["rank_auc"] = rank_auc;
  j["member_count"] = member_count;
  j["nonmember_count"] = nonmember_count;
  j["roc_point_count"] = roc_points.size();
  return j.dump(2) + "\n";
}

MiaCohorts sample_cohorts(std::size_t train_size, std::size_t test_size, std::size_t count,
                          std::uint64_t seed) {
  if (count == 0 || count > train_size || test_size == 0) {
    throw Error(ErrorCode::kEmptyCohort, "cannot draw " + std::to_string(count) +
                                             " members from " + std::to_string(train_size) +
                                             " training samples");
  }
  Rng rng(seed);
  const auto draw = [&](std::size_t pool, std::size_t k) {
    std::vector<std::size_t> idx(pool);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    seeded_shuffle(idx, rng);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  MiaCohorts cohorts;
  cohorts.members = draw(train_size, count);
  cohorts.nonmembers = draw(test_size, std::min(count, test_size));
  return cohorts;
}

}  // namespace csvar
