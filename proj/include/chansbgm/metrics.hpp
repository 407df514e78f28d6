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

#ifndef CHANSBGM_METRICS_HPP
#define CHANSBGM_METRICS_HPP

#include "chansbgm/dictionary.hpp"
#include "chansbgm/types.hpp"

#include <cstddef>
#include <vector>

namespace chansbgm
{
    // Mean over samples of |s_i[q]|^2 / ||s_i||^2. Zero-norm samples are skipped and counted.
    // Throws degenerate_input if every sample has zero norm.
    rvec power_angular_profile(const std::vector<cvec> &batch, std::size_t *skipped = nullptr);

    // Power-weighted standard deviation of the grid angles. Throws degenerate_input for s = 0.
    double angular_spread(const cvec &s, const AngleGrid &grid);

    struct AngularStats
    {
        rvec profile;
        std::vector<double> spreads;
        std::size_t skipped = 0;
    };

    AngularStats angular_stats(const std::vector<cvec> &batch, const AngleGrid &grid);

    double nmse(const std::vector<cvec> &estimates, const std::vector<cvec> &truths);
    double cosine_similarity(const std::vector<cvec> &estimates, const std::vector<cvec> &truths);

    struct HistogramBins
    {
        double lo = 0.0;
        double hi = 1.0;
        Index count = 64;
        double width() const { return (hi - lo) / double(count); }
    };

    // Normalized histogram; values outside [lo, hi) go to the edge bins
    rvec histogram(const std::vector<double> &values, const HistogramBins &bins);

    // 1-Wasserstein distance between the binned empirical distributions (mass at bin centers)
    double histogram_w1(const std::vector<double> &a, const std::vector<double> &b, const HistogramBins &bins);

    // Profile mass outside the support mask
    double profile_support_leakage(const rvec &profile, const std::vector<bool> &support_mask);
}

#endif
