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
#include "csvar/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "csvar/error.hpp"
#include "csvar/rng.hpp"

namespace csvar {

std::vector<std::size_t> ClientPartition::sample_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(assignments.size());
  for (const auto& a : assignments) counts.push_back(a.size());
  return counts;
}

namespace {

std::vector<std::vector<std::size_t>> dirichlet_split(std::span<const int> labels, int k,
                                                      double alpha, Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::vector<std::vector<std::size_t>> shards(static_cast<std::size_t>(k));
  std::vector<double> p(static_cast<std::size_t>(k));
  for (auto& [label, members] : by_class) {
    seeded_shuffle(members, rng);
    double total = 0.0;
    for (double& v : p) {
      v = rng.gamma(alpha);
      total += v;
    }
    if (!(total > 0.0)) {
      // Every gamma draw underflowed (tiny alpha): give the class to one client.
      std::fill(p.begin(), p.end(), 0.0);
      p[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)))] = 1.0;
      total = 1.0;
    }
    const double n = static_cast<double>(members.size());
    double cumulative = 0.0;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < shards.size(); ++c) {
      cumulative += p[c] / total;
      const std::size_t end = c + 1 == shards.size()
                                  ? members.size()
                                  : std::min(members.size(),
                                             static_cast<std::size_t>(std::llround(cumulative * n)));
      for (std::size_t i = begin; i < std::max(begin, end); ++i) {
        shards[c].push_back(members[i]);
      }
      begin = std::max(begin, end);
    }
  }
  for (auto& shard : shards) std::sort(shard.begin(), shard.end());
  return shards;
}

}  // namespace

ClientPartition partition_clients(std::span<const int> labels, int num_clients,
                                  std::optional<double> alpha, std::uint64_t seed) {
  if (num_clients < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one client");
  if (alpha && !(*alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Dirichlet alpha must be > 0");
  }
  const std::size_t n = labels.size();
  const auto k = static_cast<std::size_t>(num_clients);
  ClientPartition out;
  out.alpha = alpha;

  if (k == 1) {
    out.assignments.emplace_back(n);
    std::iota(out.assignments[0].begin(), out.assignments[0].end(), std::size_t{0});
    if (n == 0) throw Error(ErrorCode::kEmptyClient, "client 0 received no samples");
    return out;
  }
  if (n < k) {
    throw Error(ErrorCode::kEmptyClient, std::to_string(n) + " samples cannot fill " +
                                             std::to_string(k) + " clients");
  }

  Rng rng(seed);
  if (!alpha) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    seeded_shuffle(order, rng);
    std::size_t begin = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t size = n / k + (c < n % k ? 1 : 0);
      out.assignments.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                   order.begin() + static_cast<std::ptrdiff_t>(begin + size));
      begin += size;
    }
    return out;
  }

  for (int attempt = 0; attempt < kMaxPartitionRetries; ++attempt) {
    auto shards = dirichlet_split(labels, num_clients, *alpha, rng);
    const bool all_filled = std::none_of(shards.begin(), shards.end(),
                                         [](const auto& s) { return s.empty(); });
    if (all_filled) {
      out.assignments = std::move(shards);
      return out;
    }
  }
  throw Error(ErrorCode::kEmptyClient,
              "Dirichlet draw left a client empty after " +
                  std::to_string(kMaxPartitionRetries) + " attempts");
}

double label_entropy(std::span<const int> labels, std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  std::map<int, std::size_t> counts;
  for (std::size_t i : indices) ++counts[labels[i]];
  double h = 0.0;
  const double n = static_cast<double>(indices.size());
  for (const auto& [label, count] : counts) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace csvar
