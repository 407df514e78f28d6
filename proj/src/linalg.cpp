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

#include "chansbgm/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace chansbgm
{
    cmat kron(const cmat &a, const cmat &b)
    {
        cmat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

    rvec kron(const rvec &a, const rvec &b)
    {
        rvec out(a.size() * b.size());
        for (Index i = 0; i < a.size(); ++i)
            out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    }

    double max_abs(const cmat &m)
    {
        return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    }

    double hermitian_deviation(const cmat &c)
    {
        if (c.rows() != c.cols())
            throw std::invalid_argument("hermitian_deviation: matrix must be square");
        return max_abs(c - c.adjoint());
    }

    double toeplitz_deviation(const cmat &c)
    {
        double dev = 0.0;
        for (Index i = 0; i < c.rows(); ++i)
            for (Index j = 0; j < c.cols(); ++j)
            {
                const Index shift = std::min(i, j);
                dev = std::max(dev, std::abs(c(i, j) - c(i - shift, j - shift)));
            }
        return dev;
    }

    double block_toeplitz_deviation(const cmat &c, Index block_size)
    {
        if (block_size <= 0 || c.rows() % block_size != 0 || c.cols() % block_size != 0)
            throw std::invalid_argument("block_toeplitz_deviation: dimensions are not a multiple of the block size");

        const Index n_rb = c.rows() / block_size;
        const Index n_cb = c.cols() / block_size;
        auto entry = [&](Index a, Index i, Index b, Index j)
        { return c(a * block_size + i, b * block_size + j); };

        double dev = 0.0;
        for (Index a = 0; a < n_rb; ++a)
            for (Index b = 0; b < n_cb; ++b)
            {
                const Index bs = std::min(a, b);
                for (Index i = 0; i < block_size; ++i)
                    for (Index j = 0; j < block_size; ++j)
                    {
                        const Index es = std::min(i, j);
                        dev = std::max(dev, std::abs(entry(a, i, b, j) - entry(a - bs, i - es, b - bs, j - es)));
                    }
            }
        return dev;
    }
}
