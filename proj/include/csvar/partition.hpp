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
#ifndef CSVAR_PARTITION_HPP_
#define CSVAR_PARTITION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace csvar {

struct ClientPartition {
  std::vector<std::vector<std::size_t>> assignments;  // one index list per client
  std::optional<double> alpha;                        // nullopt = IID

  std::size_t num_clients() const noexcept { return assignments.size(); }
  std::vector<std::size_t> sample_counts() const;
};

inline constexpr int kMaxPartitionRetries = 100;

// Splits indices [0, labels.size()) across num_clients clients.
//
// IID (alpha = nullopt): seeded shuffle, then contiguous shards whose sizes
// differ by at most one (the first n % K clients get the extra sample).
//
// Dirichlet(alpha): for every class, client proportions p ~ Dir(alpha) and
// the class's shuffled indices are cut at round(cumsum(p) * n_class).
// Draws that leave a client empty are retried (new draws from the same
// stream) up to kMaxPartitionRetries times, then kEmptyClient is thrown.
//
// A single client always receives every index in ascending order.
ClientPartition partition_clients(std::span<const int> labels, int num_clients,
                                  std::optional<double> alpha, std::uint64_t seed);

// Shannon entropy (nats) of the label histogram of one client's shard.
double label_entropy(std::span<const int> labels, std::span<const std::size_t> indices);

}  // namespace csvar

#endif  // CSVAR_PARTITION_HPP_
