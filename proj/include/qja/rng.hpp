// Copyright 2026 The qjasim developers
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
#include <string_view>

namespace qja {

// Platform-stable randomness helpers.  Everything stochastic in the library
// is driven by std::mt19937_64 bit streams mapped to doubles with the fixed
// 53-bit recipe below, so results are reproducible across compilers and
// standard libraries.  std::uniform_real_distribution is deliberately not
// used anywhere: its output is implementation-defined.

// SplitMix64 finaliser, used as a one-shot bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` derived from a master seed.  Streams depend only
// on (master, index), never on evaluation order, so chunked or concurrent
// sampling reproduces the serial result bit for bit.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64((index + 1) * 0x9E3779B97F4A7C15ULL));
}

// Uniform double in [0, 1) from one 64-bit draw: top 53 bits scaled by 2^-53.
constexpr double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// FNV-1a 64-bit hash, used for content fingerprints in manifests.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qja
