// Copyright 2026 The dpmicro Authors
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

// Seeded randomness with platform-independent output. The engine is
// std::mt19937_64, whose sequence is fixed by the standard; uniforms are
// derived from the raw 64-bit words directly instead of going through
// std::uniform_real_distribution, whose algorithm is implementation-defined.

#ifndef DPMICRO_RANDOM_H_
#define DPMICRO_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dpmicro {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a, stable across platforms and runs (unlike std::hash).
std::uint64_t stable_hash(std::string_view bytes);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Independent stream `stream` of the master seed; attribute i of a release
  // uses Substream(seed, i).
  static Rng Substream(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in the open interval (0, 1) with 53 bits of resolution.
  double Uniform();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpmicro

#endif  // DPMICRO_RANDOM_H_
