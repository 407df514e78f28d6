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

#include "chansbgm/dictionary.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        template <class... Ts>
        struct overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        overloaded(Ts...) -> overloaded<Ts...>;
    }

    // ---------- Grids ----------

    AngleGrid::AngleGrid(Index size) : size_(size)
    {
        if (size <= 0 || size % 2 != 0)
            throw std::invalid_argument("AngleGrid: size must be a positive even integer");
    }

    double AngleGrid::spacing() const { return pi / double(size_); }

    double AngleGrid::point(Index g) const
    {
        if (g < 0 || g >= size_)
            throw std::out_of_range("AngleGrid::point: index out of range");
        return double(g - size_ / 2) * pi / double(size_);
    }

    std::vector<double> AngleGrid::points() const
    {
        std::vector<double> out(static_cast<std::size_t>(size_));
        for (Index g = 0; g < size_; ++g)
            out[std::size_t(g)] = point(g);
        return out;
    }

    DelayDopplerGrid::DelayDopplerGrid(Index doppler_size, Index delay_size, double max_doppler_hz, double max_delay_s)
        : doppler_size_(doppler_size), delay_size_(delay_size), max_doppler_hz_(max_doppler_hz), max_delay_s_(max_delay_s)
    {
        if (doppler_size <= 0 || doppler_size % 2 != 0)
            throw std::invalid_argument("DelayDopplerGrid: Doppler grid size must be a positive even integer");
        if (delay_size <= 0)
            throw std::invalid_argument("DelayDopplerGrid: delay grid size must be positive");
        if (!(max_doppler_hz > 0.0) || !std::isfinite(max_doppler_hz))
            throw std::invalid_argument("DelayDopplerGrid: Doppler bound must be positive and finite");
        if (!(max_delay_s > 0.0) || !std::isfinite(max_delay_s))
            throw std::invalid_argument("DelayDopplerGrid: delay bound must be positive and finite");
    }

    double DelayDopplerGrid::doppler_point(Index q) const
    {
        if (q < 0 || q >= doppler_size_)
            throw std::out_of_range("DelayDopplerGrid::doppler_point: index out of range");
        return double(q - doppler_size_ / 2) * 2.0 * max_doppler_hz_ / double(doppler_size_);
    }

    double DelayDopplerGrid::delay_point(Index p) const
    {
        if (p < 0 || p >= delay_size_)
            throw std::out_of_range("DelayDopplerGrid::delay_point: index out of range");
        return double(p) * max_delay_s_ / double(delay_size_);
    }

    std::vector<double> DelayDopplerGrid::doppler_points() const
    {
        std::vector<double> out(static_cast<std::size_t>(doppler_size_));
        for (Index q = 0; q < doppler_size_; ++q)
            out[std::size_t(q)] = doppler_point(q);
        return out;
    }

    std::vector<double> DelayDopplerGrid::delay_points() const
    {
        std::vector<double> out(static_cast<std::size_t>(delay_size_));
        for (Index p = 0; p < delay_size_; ++p)
            out[std::size_t(p)] = delay_point(p);
        return out;
    }

    Index grid_size(const Grid &grid)
    {
        return std::visit([](const auto &g)
                          { return g.size(); },
                          grid);
    }

    // ---------- System configuration ----------

    void validate(const SystemConfig &config)
    {
        std::visit(overloaded{
                       [](const SimoConfig &c)
                       {
                           if (c.n_antennas < 1)
                               throw std::invalid_argument("SimoConfig: antenna count must be >= 1");
                       },
                       [](const OfdmConfig &c)
                       {
                           if (c.n_subcarriers < 1 || c.n_symbols < 1)
                               throw std::invalid_argument("OfdmConfig: subcarrier and symbol counts must be >= 1");
                           if (!(c.subcarrier_spacing_hz > 0.0) || !std::isfinite(c.subcarrier_spacing_hz))
                               throw std::invalid_argument("OfdmConfig: subcarrier spacing must be positive");
                           if (!(c.symbol_duration_s > 0.0) || !std::isfinite(c.symbol_duration_s))
                               throw std::invalid_argument("OfdmConfig: symbol duration must be positive");
                       }},
                   config);
    }

    Index channel_dim(const SystemConfig &config)
    {
        return std::visit(overloaded{
                              [](const SimoConfig &c)
                              { return c.n_antennas; },
                              [](const OfdmConfig &c)
                              { return c.n_subcarriers * c.n_symbols; }},
                          config);
    }

    // ---------- Steering vectors ----------

    cvec steering_vector_ula(double theta, Index n_antennas)
    {
        if (!std::isfinite(theta))
            throw std::invalid_argument("steering_vector_ula: angle must be finite");
        if (n_antennas < 1)
            throw std::invalid_argument("steering_vector_ula: antenna count must be >= 1");

        const double phase = -pi * std::sin(theta);
        cvec a(n_antennas);
        for (Index i = 0; i < n_antennas; ++i)
            a(i) = std::polar(1.0, phase * double(i));
        return a;
    }

    cvec steering_vector_doppler(double doppler_hz, Index n_symbols, double symbol_duration_s)
    {
        if (!std::isfinite(doppler_hz))
            throw std::invalid_argument("steering_vector_doppler: Doppler shift must be finite");
        cvec a(n_symbols);
        for (Index i = 0; i < n_symbols; ++i)
            a(i) = std::polar(1.0, 2.0 * pi * doppler_hz * double(i) * symbol_duration_s);
        return a;
    }

    cvec steering_vector_delay(double delay_s, Index n_subcarriers, double subcarrier_spacing_hz)
    {
        if (!std::isfinite(delay_s))
            throw std::invalid_argument("steering_vector_delay: delay must be finite");
        cvec a(n_subcarriers);
        for (Index j = 0; j < n_subcarriers; ++j)
            a(j) = std::polar(1.0, -2.0 * pi * delay_s * double(j) * subcarrier_spacing_hz);
        return a;
    }

    // ---------- Dictionaries ----------

    Dictionary::Dictionary(cmat matrix, Grid grid, SystemConfig config, cmat doppler_factor, cmat delay_factor)
        : matrix_(std::move(matrix)), grid_(std::move(grid)), config_(std::move(config)),
          doppler_factor_(std::move(doppler_factor)), delay_factor_(std::move(delay_factor))
    {
    }

    Dictionary build_simo_dictionary(const AngleGrid &grid, const SimoConfig &config)
    {
        validate(config);
        cmat d(config.n_antennas, grid.size());
        for (Index g = 0; g < grid.size(); ++g)
            d.col(g) = steering_vector_ula(grid.point(g), config.n_antennas);
        return Dictionary(std::move(d), grid, config);
    }

    Dictionary build_ofdm_dictionary(const DelayDopplerGrid &grid, const OfdmConfig &config, Index max_columns)
    {
        validate(config);
        if (grid.doppler_size() > max_columns / grid.delay_size())
            throw capacity_error("build_ofdm_dictionary: S_t*S_f = " + std::to_string(grid.doppler_size()) + "*" +
                                 std::to_string(grid.delay_size()) + " exceeds the column limit " +
                                 std::to_string(max_columns));

        cmat dt(config.n_symbols, grid.doppler_size());
        for (Index q = 0; q < grid.doppler_size(); ++q)
            dt.col(q) = steering_vector_doppler(grid.doppler_point(q), config.n_symbols, config.symbol_duration_s);

        cmat df(config.n_subcarriers, grid.delay_size());
        for (Index p = 0; p < grid.delay_size(); ++p)
            df.col(p) = steering_vector_delay(grid.delay_point(p), config.n_subcarriers, config.subcarrier_spacing_hz);

        cmat full = kron(dt, df);
        return Dictionary(std::move(full), grid, config, std::move(dt), std::move(df));
    }

    Dictionary build_dictionary(const Grid &grid, const SystemConfig &config)
    {
        if (const auto *ag = std::get_if<AngleGrid>(&grid))
        {
            const auto *sc = std::get_if<SimoConfig>(&config);
            if (!sc)
                throw domain_mismatch("angle grid requires a SIMO configuration");
            return build_simo_dictionary(*ag, *sc);
        }
        const auto &dg = std::get<DelayDopplerGrid>(grid);
        const auto *oc = std::get_if<OfdmConfig>(&config);
        if (!oc)
            throw domain_mismatch("delay-Doppler grid requires an OFDM configuration");
        return build_ofdm_dictionary(dg, *oc);
    }

    Dictionary swap_system_config(const Dictionary &dict, const SystemConfig &new_config)
    {
        if (dict.is_ofdm() != std::holds_alternative<OfdmConfig>(new_config))
            throw domain_mismatch("swap_system_config: new configuration belongs to a different domain than the dictionary");
        return build_dictionary(dict.grid(), new_config);
    }

    std::string dictionary_id(const Dictionary &dict)
    {
        char buf[160];
        if (const auto *ag = std::get_if<AngleGrid>(&dict.grid()))
        {
            const auto &c = std::get<SimoConfig>(dict.config());
            std::snprintf(buf, sizeof(buf), "simo:S%lld:N%lld", (long long)ag->size(), (long long)c.n_antennas);
        }
        else
        {
            const auto &g = std::get<DelayDopplerGrid>(dict.grid());
            const auto &c = std::get<OfdmConfig>(dict.config());
            std::snprintf(buf, sizeof(buf), "ofdm:St%lld:Sf%lld:nu%.17g:tau%.17g:Nf%lld:Nsym%lld:df%.17g:dT%.17g",
                          (long long)g.doppler_size(), (long long)g.delay_size(), g.max_doppler_hz(), g.max_delay_s(),
                          (long long)c.n_subcarriers, (long long)c.n_symbols, c.subcarrier_spacing_hz, c.symbol_duration_s);
        }
        return buf;
    }
}
