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

#ifndef CHANSBGM_ERRORS_HPP
#define CHANSBGM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chansbgm
{
    // Invalid arguments are reported with std::invalid_argument directly.

    // Dictionary / grid / configuration belong to different domains (angular vs. delay-Doppler)
    class domain_mismatch : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Requested object exceeds a configured size limit
    class capacity_error : public std::length_error
    {
    public:
        using std::length_error::length_error;
    };

    // Factorization failure or non-finite intermediate result
    class numeric_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Input is well-formed but carries no usable signal (zero energy, zero norm)
    class degenerate_input : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };
}

#endif
