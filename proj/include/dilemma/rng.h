// Copyright 2026 The Dilemma Authors
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

#ifndef DILEMMA_RNG_H_
#define DILEMMA_RNG_H_

#include <cstdint>
#include <random>

namespace dilemma {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// replica seed and a stream tag.
std::uint64_t SplitMix64(std::uint64_t x);

// Named random streams of one replica. Each gets its own engine so that the
// draws of one subsystem never shift the draws of another.
enum class Stream : std::uint64_t {
  kPopulation = 1,
  kEnvironment = 2,
  kPolicy = 3,
};

std::uint64_t DeriveSeed(std::uint64_t replica_seed, Stream stream);

// A seeded 64-bit Mersenne Twister with distribution helpers whose output
// does not depend on the standard library implementation (the std::
// distributions are implementation-defined, which would break byte-level
// reproducibility across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();

  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace dilemma

#endif  // DILEMMA_RNG_H_
