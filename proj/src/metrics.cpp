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

#include "chansbgm/metrics.hpp"
#include "chansbgm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        void check_pairs(const std::vector<cvec> &est, const std::vector<cvec> &truth)
        {
            if (est.empty() || est.size() != truth.size())
                throw std::invalid_argument("estimate and truth lists must be nonempty and of equal length");
            for (std::size_t i = 0; i < est.size(); ++i)
                if (est[i].size() != truth[i].size() || est[i].size() == 0)
                    throw std::invalid_argument("estimate and truth dimensions differ");
        }
    }

    rvec power_angular_profile(const std::vector<cvec> &batch, std::size_t *skipped)
    {
        if (batch.empty())
            throw std::invalid_argument("power_angular_profile: batch is empty");
        const Index s = batch.front().size();
        rvec profile = rvec::Zero(s);
        std::size_t used = 0, dropped = 0;
        for (const auto &v : batch)
        {
            if (v.size() != s)
                throw std::invalid_argument("power_angular_profile: samples have different lengths");
            const double e = v.squaredNorm();
            if (!(e > 0.0))
            {
                ++dropped;
                continue;
            }
            profile += v.cwiseAbs2() / e;
            ++used;
        }
        if (skipped)
            *skipped = dropped;
        if (used == 0)
            throw degenerate_input("power_angular_profile: every sample has zero norm");
        return profile / double(used);
    }

    double angular_spread(const cvec &s, const AngleGrid &grid)
    {
        if (s.size() != grid.size())
            throw std::invalid_argument("angular_spread: vector length differs from the grid size");
        // weighted Welford
        double w_sum = 0.0, mean = 0.0, m2 = 0.0;
        for (Index g = 0; g < s.size(); ++g)
        {
            const double w = std::norm(s(g));
            if (w == 0.0)
                continue;
            const double x = grid.point(g);
            w_sum += w;
            const double delta = x - mean;
            mean += (w / w_sum) * delta;
            m2 += w * delta * (x - mean);
        }
        if (!(w_sum > 0.0))
            throw degenerate_input("angular_spread: zero vector");
        return std::sqrt(std::max(m2 / w_sum, 0.0));
    }

    AngularStats angular_stats(const std::vector<cvec> &batch, const AngleGrid &grid)
    {
        AngularStats st;
        st.profile = power_angular_profile(batch, &st.skipped);
        st.spreads.reserve(batch.size() - st.skipped);
        for (const auto &v : batch)
            if (v.squaredNorm() > 0.0)
                st.spreads.push_back(angular_spread(v, grid));
        return st;
    }

    double nmse(const std::vector<cvec> &estimates, const std::vector<cvec> &truths)
    {
        check_pairs(estimates, truths);
        double acc = 0.0;
        for (std::size_t i = 0; i < estimates.size(); ++i)
            acc += (estimates[i] - truths[i]).squaredNorm() / double(truths[i].size());
        return acc / double(estimates.size());
    }

    double cosine_similarity(const std::vector<cvec> &estimates, const std::vector<cvec> &truths)
    {
        check_pairs(estimates, truths);
        double acc = 0.0;
        for (std::size_t i = 0; i < estimates.size(); ++i)
        {
            const double ne = estimates[i].norm();
            const double nt = truths[i].norm();
            if (!(ne > 0.0) || !(nt > 0.0))
                throw degenerate_input("cosine_similarity: zero-norm vector");
            acc += std::min(std::abs(estimates[i].dot(truths[i])) / (ne * nt), 1.0);
        }
        return acc / double(estimates.size());
    }

    rvec histogram(const std::vector<double> &values, const HistogramBins &bins)
    {
        if (bins.count < 1 || !(bins.hi > bins.lo))
            throw std::invalid_argument("histogram: need count >= 1 and hi > lo");
        if (values.empty())
            throw std::invalid_argument("histogram: no values");
        rvec h = rvec::Zero(bins.count);
        const double w = bins.width();
        for (double v : values)
        {
            const double pos = std::floor((v - bins.lo) / w);
            const Index b = std::clamp<Index>(pos < 0 ? 0 : Index(std::min(pos, double(bins.count))), 0, bins.count - 1);
            h(b) += 1.0;
        }
        return h / double(values.size());
    }

    double histogram_w1(const std::vector<double> &a, const std::vector<double> &b, const HistogramBins &bins)
    {
        const rvec ha = histogram(a, bins);
        const rvec hb = histogram(b, bins);
        double ca = 0.0, cb = 0.0, acc = 0.0;
        for (Index i = 0; i + 1 < bins.count; ++i)
        {
            ca += ha(i);
            cb += hb(i);
            acc += std::abs(ca - cb);
        }
        return acc * bins.width();
    }

    double profile_support_leakage(const rvec &profile, const std::vector<bool> &support_mask)
    {
        if (Index(support_mask.size()) != profile.size())
            throw std::invalid_argument("profile_support_leakage: mask length differs from the profile length");
        double out = 0.0;
        for (Index g = 0; g < profile.size(); ++g)
            if (!support_mask[std::size_t(g)])
                out += profile(g);
        return out;
    }
}
