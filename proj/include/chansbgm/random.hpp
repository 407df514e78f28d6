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

#ifndef CHANSBGM_RANDOM_HPP
#define CHANSBGM_RANDOM_HPP

#include "chansbgm/types.hpp"

#include <cstdint>
#include <random>

namespace chansbgm
{
    using Rng = std::mt19937_64;

    // Stream tags used to derive independent sub-streams from one top-level seed
    enum class StreamTag : std::uint64_t
    {
        angle = 1,
        channel = 2,
        selection = 3,
        noise = 4,
        init = 5,
        reinit = 6,
        generate = 7,
        ground_truth = 8,
        paths = 9,
    };

    std::uint64_t splitmix64(std::uint64_t x);

    // Independent generator for (seed, tag, index); identical inputs give identical streams.
    Rng derive_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0);

    // Circularly symmetric complex normal: real and imaginary parts each N(0, variance/2)
    cplx complex_normal(Rng &rng, double variance = 1.0);

    double standard_normal(Rng &rng);
    double uniform(Rng &rng, double lo, double hi);
}

#endif
