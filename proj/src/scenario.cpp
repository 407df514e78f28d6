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

#include "chansbgm/scenario.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr std::size_t kSampleChunk = 64;
    }

    // ---------- Angle profile ----------

    AngleProfile::AngleProfile(std::vector<AngleComponent> components) : components_(std::move(components))
    {
        if (components_.empty())
            throw std::invalid_argument("AngleProfile: at least one component is required");
        double total = 0.0;
        for (const auto &c : components_)
        {
            if (!std::isfinite(c.center) || !std::isfinite(c.std_dev) || !std::isfinite(c.half_width) || !std::isfinite(c.weight))
                throw std::invalid_argument("AngleProfile: component fields must be finite");
            if (c.weight < 0.0 || c.std_dev < 0.0 || c.half_width < 0.0)
                throw std::invalid_argument("AngleProfile: weights, widths and standard deviations must be nonnegative");
            if (c.center - c.half_width < -pi / 2 || c.center + c.half_width >= pi / 2)
                throw std::invalid_argument("AngleProfile: component support must lie inside [-pi/2, pi/2)");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("AngleProfile: weights must sum to one");
    }

    AngleProfile AngleProfile::normalized(std::vector<AngleComponent> components)
    {
        double total = 0.0;
        for (const auto &c : components)
            total += c.weight;
        if (!(total > 0.0))
            throw std::invalid_argument("AngleProfile::normalized: total weight must be positive");
        for (auto &c : components)
            c.weight /= total;
        return AngleProfile(std::move(components));
    }

    AngleProfile AngleProfile::four_street_canyons()
    {
        const double deg = pi / 180.0;
        std::vector<AngleComponent> comps;
        for (double c : {-60.0, -20.0, 20.0, 60.0})
            comps.push_back({c * deg, 5.0 * deg, 15.0 * deg, 0.25});
        return AngleProfile(std::move(comps));
    }

    std::vector<bool> AngleProfile::support_mask(const AngleGrid &grid, double n_std) const
    {
        std::vector<bool> mask(static_cast<std::size_t>(grid.size()), false);
        for (Index g = 0; g < grid.size(); ++g)
        {
            const double w = grid.point(g);
            for (const auto &c : components_)
                if (std::abs(w - c.center) <= n_std * c.std_dev + 1e-12)
                    mask[std::size_t(g)] = true;
        }
        return mask;
    }

    double sample_angle(const AngleProfile &profile, Rng &rng)
    {
        const auto &comps = profile.components();
        const double u = uniform(rng, 0.0, 1.0);
        std::size_t k = 0;
        double acc = comps[0].weight;
        while (u >= acc && k + 1 < comps.size())
            acc += comps[++k].weight;

        const auto &c = comps[k];
        if (c.std_dev == 0.0 || c.half_width == 0.0)
            return c.center;
        for (;;)
        {
            const double z = standard_normal(rng) * c.std_dev;
            if (std::abs(z) <= c.half_width)
                return c.center + z;
        }
    }

    // ---------- Local covariance ----------

    cmat laplacian_local_covariance(double center, double std_dev, Index n_antennas, int quadrature_points)
    {
        if (!(std_dev > 0.0) || !std::isfinite(std_dev) || !std::isfinite(center))
            throw std::invalid_argument("laplacian_local_covariance: standard deviation must be positive and finite");
        if (quadrature_points < 64)
            throw std::invalid_argument("laplacian_local_covariance: at least 64 quadrature points are required");
        if (n_antennas < 1)
            throw std::invalid_argument("laplacian_local_covariance: antenna count must be >= 1");

        const double b = std_dev / std::sqrt(2.0);
        const double half_window = 10.0 * std_dev;
        // Simpson needs an even interval count on each side of the kink at the center
        int per_side = quadrature_points / 2;
        per_side += per_side % 2;
        const double h = half_window / per_side;

        cvec first_col = cvec::Zero(n_antennas);
        auto accumulate = [&](double theta, double weight)
        {
            const double density = std::exp(-std::abs(theta - center) / b) / (2.0 * b);
            const double phase = -pi * std::sin(theta);
            const double w = weight * density;
            for (Index d = 0; d < n_antennas; ++d)
                first_col(d) += w * std::polar(1.0, phase * double(d));
        };

        for (int side = 0; side < 2; ++side)
        {
            const double start = side == 0 ? center - half_window : center;
            for (int q = 0; q <= per_side; ++q)
            {
                const double coeff = (q == 0 || q == per_side) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
                accumulate(start + q * h, coeff * h / 3.0);
            }
        }

        cmat c(n_antennas, n_antennas);
        for (Index m = 0; m < n_antennas; ++m)
            for (Index n = 0; n < n_antennas; ++n)
                c(m, n) = m >= n ? first_col(m - n) : std::conj(first_col(n - m));
        return c;
    }

    cvec draw_simo_channel(const cmat &cov, Rng &rng)
    {
        if (cov.rows() != cov.cols())
            throw std::invalid_argument("draw_simo_channel: covariance must be square");
        const Index n = cov.rows();

        cvec w(n);
        for (Index i = 0; i < n; ++i)
            w(i) = complex_normal(rng);

        if (n == 0 || cov.cwiseAbs().maxCoeff() == 0.0)
            return cvec::Zero(n);

        Eigen::LLT<cmat> llt(cov);
        if (llt.info() != Eigen::Success)
        {
            const double jitter = 1e-12 * cov.trace().real() / double(n);
            cmat jittered = cov;
            jittered.diagonal().array() += jitter;
            llt.compute(jittered);
            if (llt.info() != Eigen::Success)
                throw numeric_error("draw_simo_channel: covariance is not positive semidefinite");
        }
        return llt.matrixL() * w;
    }

    rvec laplacian_bin_masses(double center, double std_dev, const AngleGrid &grid)
    {
        if (!(std_dev > 0.0))
            throw std::invalid_argument("laplacian_bin_masses: standard deviation must be positive");
        const double b = std_dev / std::sqrt(2.0);
        auto cdf = [&](double x)
        {
            return x < center ? 0.5 * std::exp((x - center) / b) : 1.0 - 0.5 * std::exp(-(x - center) / b);
        };
        const double half = 0.5 * grid.spacing();
        rvec m(grid.size());
        for (Index g = 0; g < grid.size(); ++g)
            m(g) = cdf(grid.point(g) + half) - cdf(grid.point(g) - half);
        return m;
    }

    cvec grid_projected_parameters(double center, double std_dev, const AngleGrid &grid, Rng &rng)
    {
        const rvec mass = laplacian_bin_masses(center, std_dev, grid);
        cvec s(grid.size());
        for (Index g = 0; g < grid.size(); ++g)
            s(g) = complex_normal(rng, mass(g));
        return s;
    }

    cvec bruteforce_parameters(const cmat &square_dictionary, const cvec &channel)
    {
        if (square_dictionary.rows() != square_dictionary.cols() || channel.size() != square_dictionary.rows())
            throw std::invalid_argument("bruteforce_parameters: dictionary must be square and match the channel dimension");
        return square_dictionary.fullPivLu().solve(channel);
    }

    // ---------- OFDM ----------

    void OfdmScenario::validate() const
    {
        chansbgm::validate(SystemConfig{system});
        if (max_paths < 1)
            throw std::invalid_argument("OfdmScenario: max_paths must be >= 1");
        auto finite_range = [](const std::pair<double, double> &r)
        { return std::isfinite(r.first) && std::isfinite(r.second) && r.first <= r.second; };
        if (!finite_range(delay_range_s) || !finite_range(doppler_range_hz))
            throw std::invalid_argument("OfdmScenario: ranges must be finite with lo <= hi");
        if (delay_range_s.first < 0.0)
            throw std::invalid_argument("OfdmScenario: delays must be nonnegative");
        if (!(power_decay_per_s >= 0.0) || !std::isfinite(power_decay_per_s))
            throw std::invalid_argument("OfdmScenario: power decay must be nonnegative and finite");
        if (snap_grid)
        {
            if (delay_range_s.second >= snap_grid->max_delay_s())
                throw std::invalid_argument("OfdmScenario: delay range exceeds the grid delay bound");
            if (std::max(std::abs(doppler_range_hz.first), std::abs(doppler_range_hz.second)) > snap_grid->max_doppler_hz())
                throw std::invalid_argument("OfdmScenario: Doppler range exceeds the grid Doppler bound");
        }
    }

    std::vector<PathParams> draw_ofdm_paths(const OfdmScenario &scn, Rng &rng)
    {
        std::uniform_int_distribution<Index> count(1, scn.max_paths);
        const Index n_paths = count(rng);
        std::vector<PathParams> paths;
        paths.reserve(std::size_t(n_paths));
        for (Index l = 0; l < n_paths; ++l)
        {
            PathParams p;
            p.delay_s = uniform(rng, scn.delay_range_s.first, scn.delay_range_s.second);
            p.doppler_hz = uniform(rng, scn.doppler_range_hz.first, scn.doppler_range_hz.second);
            if (scn.snap_grid)
            {
                const auto &g = *scn.snap_grid;
                const double dstep = g.max_delay_s() / double(g.delay_size());
                const Index pi_idx = std::clamp<Index>(Index(std::llround(p.delay_s / dstep)), 0, g.delay_size() - 1);
                const double nstep = 2.0 * g.max_doppler_hz() / double(g.doppler_size());
                const Index qi = std::clamp<Index>(Index(std::llround(p.doppler_hz / nstep)) + g.doppler_size() / 2, 0,
                                                   g.doppler_size() - 1);
                p.delay_s = g.delay_point(pi_idx);
                p.doppler_hz = g.doppler_point(qi);
            }
            const double amplitude = std::sqrt(std::exp(-scn.power_decay_per_s * p.delay_s));
            p.gain = std::polar(amplitude, uniform(rng, 0.0, 2.0 * pi));
            paths.push_back(p);
        }
        return paths;
    }

    cmat ofdm_channel_matrix(const std::vector<PathParams> &paths, const OfdmConfig &config)
    {
        cmat h = cmat::Zero(config.n_subcarriers, config.n_symbols);
        for (const auto &p : paths)
        {
            const cvec af = steering_vector_delay(p.delay_s, config.n_subcarriers, config.subcarrier_spacing_hz);
            const cvec at = steering_vector_doppler(p.doppler_hz, config.n_symbols, config.symbol_duration_s);
            h.noalias() += p.gain * af * at.transpose();
        }
        return h;
    }

    cmat draw_ofdm_channel(const OfdmScenario &scn, Rng &rng)
    {
        scn.validate();
        return ofdm_channel_matrix(draw_ofdm_paths(scn, rng), scn.system);
    }

    cvec vectorize(const cmat &h)
    {
        return Eigen::Map<const cvec>(h.data(), h.size());
    }

    // ---------- Selection matrices ----------

    SelectionMatrix::SelectionMatrix(Index n_cols, std::vector<Index> rows) : n_cols_(n_cols), rows_(std::move(rows))
    {
        if (n_cols_ < 1 || rows_.empty() || Index(rows_.size()) > n_cols_)
            throw std::invalid_argument("SelectionMatrix: need 1 <= rows <= cols");
        std::set<Index> seen;
        for (Index r : rows_)
        {
            if (r < 0 || r >= n_cols_)
                throw std::invalid_argument("SelectionMatrix: selected index out of range");
            if (!seen.insert(r).second)
                throw std::invalid_argument("SelectionMatrix: selected indices must be distinct");
        }
    }

    SelectionMatrix SelectionMatrix::identity(Index n)
    {
        std::vector<Index> rows(static_cast<std::size_t>(n));
        std::iota(rows.begin(), rows.end(), Index(0));
        return SelectionMatrix(n, std::move(rows));
    }

    bool SelectionMatrix::is_identity() const
    {
        if (rows() != n_cols_)
            return false;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i] != Index(i))
                return false;
        return true;
    }

    cvec SelectionMatrix::apply(const cvec &h) const
    {
        if (h.size() != n_cols_)
            throw std::invalid_argument("SelectionMatrix::apply: dimension mismatch");
        cvec y(rows());
        for (Index i = 0; i < rows(); ++i)
            y(i) = h(rows_[std::size_t(i)]);
        return y;
    }

    cmat SelectionMatrix::apply_rows(const cmat &m) const
    {
        if (m.rows() != n_cols_)
            throw std::invalid_argument("SelectionMatrix::apply_rows: dimension mismatch");
        cmat out(rows(), m.cols());
        for (Index i = 0; i < rows(); ++i)
            out.row(i) = m.row(rows_[std::size_t(i)]);
        return out;
    }

    rmat SelectionMatrix::to_dense() const
    {
        rmat a = rmat::Zero(rows(), n_cols_);
        for (Index i = 0; i < rows(); ++i)
            a(i, rows_[std::size_t(i)]) = 1.0;
        return a;
    }

    SelectionMatrix random_selection_matrix(Index m, Index n, Rng &rng)
    {
        if (m < 1 || m > n)
            throw std::invalid_argument("random_selection_matrix: need 1 <= m <= n");
        std::vector<Index> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), Index(0));
        // partial Fisher-Yates
        for (Index i = 0; i < m; ++i)
        {
            std::uniform_int_distribution<Index> pick(i, n - 1);
            std::swap(pool[std::size_t(i)], pool[std::size_t(pick(rng))]);
        }
        pool.resize(std::size_t(m));
        return SelectionMatrix(n, std::move(pool));
    }

    // ---------- Observations ----------

    void ObservationSet::validate() const
    {
        if (samples.size() != noise_vars.size())
            throw std::invalid_argument("ObservationSet: sample and noise-variance counts differ");
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            if (samples[i].size() != measurement.rows())
                throw std::invalid_argument("ObservationSet: sample dimension does not match the measurement matrix");
            if (!(noise_vars[i] > 0.0) || !std::isfinite(noise_vars[i]))
                throw std::invalid_argument("ObservationSet: noise variances must be positive and finite");
        }
    }

    ObservationSet make_observations(const std::vector<cvec> &channels, const SelectionMatrix &a,
                                     std::pair<double, double> snr_range_db, std::uint64_t seed,
                                     std::optional<double> signal_energy, SnrReference reference)
    {
        if (channels.empty())
            throw std::invalid_argument("make_observations: channel set is empty");
        if (!(snr_range_db.first <= snr_range_db.second))
            throw std::invalid_argument("make_observations: SNR range must satisfy lo <= hi");
        for (const auto &h : channels)
            if (h.size() != a.cols())
                throw std::invalid_argument("make_observations: channel dimension does not match the measurement matrix");

        double energy = 0.0;
        if (signal_energy)
            energy = *signal_energy;
        else
        {
            for (const auto &h : channels)
                energy += reference == SnrReference::observed ? a.apply(h).squaredNorm() : h.squaredNorm();
            energy /= double(channels.size());
        }
        if (!(energy > 0.0) || !std::isfinite(energy))
            throw degenerate_input("make_observations: channel set has zero signal energy");

        const double ref_dim = reference == SnrReference::observed ? double(a.rows()) : double(a.cols());

        ObservationSet obs;
        obs.measurement = a;
        obs.signal_energy = energy;
        obs.samples.resize(channels.size());
        obs.noise_vars.resize(channels.size());
        obs.snr_db.resize(channels.size());

        parallel_chunks(channels.size(), kSampleChunk, [&](std::size_t, std::size_t begin, std::size_t end)
                        {
            for (std::size_t i = begin; i < end; ++i)
            {
                Rng rng = derive_stream(seed, StreamTag::noise, i);
                const double snr = snr_range_db.first == snr_range_db.second
                                       ? snr_range_db.first
                                       : uniform(rng, snr_range_db.first, snr_range_db.second);
                const double sigma2 = energy / (ref_dim * std::pow(10.0, 0.1 * snr));
                cvec y = a.apply(channels[i]);
                for (Index m = 0; m < y.size(); ++m)
                    y(m) += complex_normal(rng, sigma2);
                obs.samples[i] = std::move(y);
                obs.noise_vars[i] = sigma2;
                obs.snr_db[i] = snr;
            } });
        return obs;
    }

    NormalizedDataset normalize_dataset(const std::vector<cvec> &channels)
    {
        if (channels.empty())
            throw std::invalid_argument("normalize_dataset: channel set is empty");
        double mean_energy = 0.0;
        for (const auto &h : channels)
            mean_energy += h.squaredNorm();
        mean_energy /= double(channels.size());
        if (!(mean_energy > 0.0))
            throw degenerate_input("normalize_dataset: all channels are zero");

        NormalizedDataset out;
        out.scale = std::sqrt(double(channels.front().size()) / mean_energy);
        out.channels.reserve(channels.size());
        for (const auto &h : channels)
            out.channels.push_back(out.scale * h);
        return out;
    }

    // ---------- Datasets ----------

    SimoDataset draw_simo_dataset(const SimoScenario &scn, std::size_t n, std::uint64_t seed)
    {
        SimoDataset ds;
        ds.angles.resize(n);
        ds.channels.resize(n);
        parallel_chunks(n, kSampleChunk, [&](std::size_t, std::size_t begin, std::size_t end)
                        {
            for (std::size_t i = begin; i < end; ++i)
            {
                Rng angle_rng = derive_stream(seed, StreamTag::angle, i);
                const double angle = sample_angle(scn.profile, angle_rng);
                const cmat cov = laplacian_local_covariance(angle, scn.laplacian_std_rad, scn.n_antennas, scn.quadrature_points);
                Rng channel_rng = derive_stream(seed, StreamTag::channel, i);
                ds.angles[i] = angle;
                ds.channels[i] = draw_simo_channel(cov, channel_rng);
            } });
        return ds;
    }

    std::vector<cvec> draw_ofdm_dataset(const OfdmScenario &scn, std::size_t n, std::uint64_t seed)
    {
        scn.validate();
        std::vector<cvec> out(n);
        parallel_chunks(n, kSampleChunk, [&](std::size_t, std::size_t begin, std::size_t end)
                        {
            for (std::size_t i = begin; i < end; ++i)
            {
                Rng rng = derive_stream(seed, StreamTag::paths, i);
                out[i] = vectorize(ofdm_channel_matrix(draw_ofdm_paths(scn, rng), scn.system));
            } });
        return out;
    }
}
