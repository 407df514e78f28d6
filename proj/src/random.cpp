// SPDX-License-Identifier: Apache-2.0
//
// chansbgm - sparse Bayesian generative modeling of wireless channel parameters
// Copyright (C) 2026 The chansbgm authors
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

#include "chansbgm/random.hpp"

#include <cmath>

namespace chansbgm
{
    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    Rng derive_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index)
    {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
        h = splitmix64(h ^ index);
        std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(tag)};
        return Rng(seq);
    }

    double standard_normal(Rng &rng)
    {
        std::normal_distribution<double> nd(0.0, 1.0);
        return nd(rng);
    }

    double uniform(Rng &rng, double lo, double hi)
    {
        std::uniform_real_distribution<double> ud(lo, hi);
        return ud(rng);
    }

    cplx complex_normal(Rng &rng, double variance)
    {
        const double scale = std::sqrt(0.5 * variance);
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        return {scale * re, scale * im};
    }
}
