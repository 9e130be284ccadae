// SPDX-License-Identifier: Apache-2.0
//
// moma-sim: link-level simulator for multi-service oriented multiple access
// Copyright (C) 2026 The moma-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace moma {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: the seed of a stream depends only on the
// master seed and the path of counters leading to it, so adding trials or
// users never reshuffles the streams that already exist.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : path)
        h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return h;
}

// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t overloading = 1;
inline constexpr std::uint64_t channel = 2;
inline constexpr std::uint64_t distance = 3;
inline constexpr std::uint64_t symbols = 4;
inline constexpr std::uint64_t noise = 5;
inline constexpr std::uint64_t trial = 6;
inline constexpr std::uint64_t random_access = 7;
} // namespace stream

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
class ComplexGaussian
{
  public:
    explicit ComplexGaussian(double variance = 1.0) : normal_(0.0, std::sqrt(variance / 2.0)) {}

    std::complex<double> operator()(Rng &rng) { return {normal_(rng), normal_(rng)}; }

  private:
    std::normal_distribution<double> normal_;
};

} // namespace moma
