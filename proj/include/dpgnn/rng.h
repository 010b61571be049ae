//
// Copyright 2026 The dpgnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPGNN_RNG_H_
#define DPGNN_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dpgnn {

// Engine behind every random stream.
using RandomEngine = std::mt19937_64;

// Names of the independent substreams split off the master seed.
inline constexpr std::string_view kPartitionStream = "partition";
inline constexpr std::string_view kBatchStream = "batch";
inline constexpr std::string_view kNoiseStream = "noise";
inline constexpr std::string_view kInitStream = "init";

// Derives a child seed from a parent seed and a stream name. Distinct names
// give statistically independent streams; the mapping is a pure function.
uint64_t DeriveSeed(uint64_t parent, std::string_view name);

// Derives a child seed from a parent seed and an integer index (for example an
// iteration number).
uint64_t DeriveSeed(uint64_t parent, uint64_t index);

RandomEngine MakeEngine(uint64_t seed);

}  // namespace dpgnn

#endif  // DPGNN_RNG_H_
