// Copyright 2026 The SBPlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SBPLAN_RNG_H_
#define SBPLAN_RNG_H_

#include <cstdint>
#include <random>

#include "sbplan/types.h"

namespace sbplan {

using Rng = std::mt19937_64;

// Stream families; each consumer of a seed draws from its own family.
enum StreamSalt : uint64_t {
  kEpisodeSalt = 1,
  kRandomPolicySalt = 2,
  kDatasetSalt = 3,
  kInitSalt = 4,
  kTrainSalt = 5,
  kSampleSalt = 6,
  kPriorSalt = 7,
};

// SplitMix64 finalizer; used to derive independent streams from
// (seed, index) pairs.
constexpr uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for stream `index` under `seed`. `salt` separates
// unrelated consumers (episodes vs. training vs. sampling) of the same seed.
inline Rng StreamRng(uint64_t seed, uint64_t index, uint64_t salt = 0) {
  return Rng(MixBits(MixBits(seed ^ MixBits(salt)) + index));
}

// Matrix of i.i.d. standard normal draws.
Matrix StandardNormal(int rows, int cols, Rng& rng);

}  // namespace sbplan

#endif  // SBPLAN_RNG_H_
