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

#include "chansbgm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace chansbgm
{
    namespace
    {
        int initial_thread_count()
        {
            if (const char *env = std::getenv("CHANSBGM_THREADS"))
            {
                try
                {
                    const int n = std::stoi(env);
                    if (n >= 1)
                        return n;
                }
                catch (const std::exception &)
                {
                }
            }
            return 1;
        }

        std::atomic<int> &threads_setting()
        {
            static std::atomic<int> n{initial_thread_count()};
            return n;
        }
    }

    int thread_count() { return threads_setting().load(); }

    void set_thread_count(int n) { threads_setting().store(std::max(1, n)); }

    void parallel_chunks(std::size_t n, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)> &body)
    {
        const std::size_t n_chunks = chunk_count(n, chunk_size);
        if (n_chunks == 0)
            return;

        const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n_chunks);
        auto run_chunk = [&](std::size_t c)
        {
            const std::size_t begin = c * chunk_size;
            body(c, begin, std::min(n, begin + chunk_size));
        };

        if (n_workers <= 1)
        {
            for (std::size_t c = 0; c < n_chunks; ++c)
                run_chunk(c);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&]
                              {
                for (std::size_t c = next++; c < n_chunks; c = next++)
                {
                    try
                    {
                        run_chunk(c);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                    }
                } });
        for (auto &t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }
}
