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

#ifndef CHANSBGM_LINALG_HPP
#define CHANSBGM_LINALG_HPP

#include "chansbgm/types.hpp"

namespace chansbgm
{
    cmat kron(const cmat &a, const cmat &b);
    rvec kron(const rvec &a, const rvec &b);

    double max_abs(const cmat &m);

    // max |C_ij - C_ji^*|
    double hermitian_deviation(const cmat &c);

    // Largest spread along any diagonal: max over (i,j) of |C_ij - C_{i-j+k, k}| with the
    // first entry of the diagonal as reference. Zero iff C is Toeplitz.
    double toeplitz_deviation(const cmat &c);

    // Two-level Toeplitz test for a matrix built from block_size x block_size blocks:
    // entry ((a,i),(b,j)) may only depend on (a-b, i-j). Zero iff the matrix is block-Toeplitz
    // with Toeplitz blocks.
    double block_toeplitz_deviation(const cmat &c, Index block_size);
}

#endif
