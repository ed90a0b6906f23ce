// Copyright 2026 The spinsq Authors
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

#ifndef SPINSQ_RANDOM_HPP
#define SPINSQ_RANDOM_HPP

#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <random>

namespace spinsq {

/// Finalizer of splitmix64; spreads (seed, stream) pairs over the engine seed space.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Standard-normal source. mt19937_64 output is fixed by the C++ standard and
/// boost's ziggurat is header code, so a seed reproduces the same draws on
/// every platform (std::normal_distribution gives no such guarantee).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for one trial, derived from the run seed, a
    /// protocol tag and the trial's stream id.
    static Rng for_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t stream) {
        return Rng(mix64(mix64(mix64(seed) ^ tag) ^ stream));
    }

    double normal() { return normal_(engine_); }

   private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spinsq

#endif
