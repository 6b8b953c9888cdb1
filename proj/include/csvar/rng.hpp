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
// Seeded randomness shared by every module.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so the draws that feed golden files are spelled
// out here instead:
//
//   below(n)   rejection sampling: discard raw words < (2^64 - n) mod n,
//              return word mod n. Unbiased.
//   uniform()  top 53 bits of one word scaled by 2^-53, in [0, 1).
//   normal()   Box-Muller on two uniform() draws; the sine branch is cached
//              and returned by the next call.
//
// Gamma draws (Dirichlet partitioning only) use std::gamma_distribution and
// are reproducible within one standard library.
#ifndef CSVAR_RNG_HPP_
#define CSVAR_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace csvar {

// SplitMix64 finalizer (Stafford "mix13" constants); a bijection on 64 bits
// with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Folds a sequence of words into one seed. Each word is offset by its
// position times the golden gamma and mixed before being xored into the
// running state, so permuting the words changes the result.
constexpr std::uint64_t combine_seed(std::uint64_t base,
                                     std::span<const std::uint64_t> words) noexcept {
  std::uint64_t h = mix64(base + kGoldenGamma);
  std::uint64_t k = 1;
  for (std::uint64_t w : words) {
    h = mix64(h ^ mix64(w + k * kGoldenGamma));
    ++k;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

  double gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates: for i = n-1 down to 1, swap(p[i], p[below(i + 1)]),
// starting from the identity.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

template <typename T>
void seeded_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace csvar

#endif  // CSVAR_RNG_HPP_
