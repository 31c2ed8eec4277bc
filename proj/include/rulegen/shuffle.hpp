// Copyright 2026 The rulegen Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rulegen {

// Recorded in run metadata so traces can be reproduced elsewhere.
inline constexpr const char* kShuffleAlgorithm = "mt19937_64+fisher-yates(rejection)+fnv1a64/splitmix64";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

// Seed for one pass of one iteration frame. Independent of evaluation order.
std::uint64_t frame_seed(std::uint64_t run_seed, std::string_view frame_path, std::uint64_t pass);

// Uniform integer in [0, bound) by rejection; identical on every platform,
// unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Fisher-Yates, highest index first.
void shuffle_in_place(std::vector<std::size_t>& order, std::uint64_t seed);

}  // namespace rulegen
