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

#ifndef CHANSBGM_PARALLEL_HPP
#define CHANSBGM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace chansbgm
{
    // Worker count used by parallel_for. Defaults to $CHANSBGM_THREADS, else 1.
    int thread_count();
    void set_thread_count(int n);

    // Calls body(begin, end) on contiguous chunks of [0, n). Chunk boundaries depend only on
    // n and chunk_size, never on the thread count, so per-chunk partial results reduced in
    // chunk order are bit-identical for any number of threads.
    void parallel_chunks(std::size_t n, std::size_t chunk_size,
                         const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)> &body);

    inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size)
    {
        return chunk_size == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
    }
}

#endif
