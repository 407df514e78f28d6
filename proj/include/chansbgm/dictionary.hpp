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

#ifndef CHANSBGM_DICTIONARY_HPP
#define CHANSBGM_DICTIONARY_HPP

#include "chansbgm/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace chansbgm
{
    // Uniform angle grid { g*pi/S : g = -S/2 ... S/2-1 } for a half-wavelength ULA.
    // Stored as the point count only; points are evaluated on demand from their integer index.
    class AngleGrid
    {
    public:
        explicit AngleGrid(Index size);

        Index size() const { return size_; }
        double spacing() const;
        double point(Index g) const; // radians, g in [0, size)
        std::vector<double> points() const;

        bool operator==(const AngleGrid &) const = default;

    private:
        Index size_;
    };

    // Doppler grid { i*2*max_doppler/S_t : i = -S_t/2 ... S_t/2-1 } (Hz) and
    // delay grid { j*max_delay/S_f : j = 0 ... S_f-1 } (s).
    class DelayDopplerGrid
    {
    public:
        DelayDopplerGrid(Index doppler_size, Index delay_size, double max_doppler_hz, double max_delay_s);

        Index doppler_size() const { return doppler_size_; }
        Index delay_size() const { return delay_size_; }
        Index size() const { return doppler_size_ * delay_size_; }
        double max_doppler_hz() const { return max_doppler_hz_; }
        double max_delay_s() const { return max_delay_s_; }

        double doppler_point(Index q) const; // q in [0, S_t)
        double delay_point(Index p) const;   // p in [0, S_f)
        std::vector<double> doppler_points() const;
        std::vector<double> delay_points() const;

        // Column of the Kronecker dictionary for (doppler q, delay p): q*S_f + p
        Index column(Index q, Index p) const { return q * delay_size_ + p; }

        bool operator==(const DelayDopplerGrid &) const = default;

    private:
        Index doppler_size_;
        Index delay_size_;
        double max_doppler_hz_;
        double max_delay_s_;
    };

    using Grid = std::variant<AngleGrid, DelayDopplerGrid>;

    Index grid_size(const Grid &grid);

    struct SimoConfig
    {
        Index n_antennas = 16;
        bool operator==(const SimoConfig &) const = default;
    };

    struct OfdmConfig
    {
        Index n_subcarriers = 24;
        Index n_symbols = 14;
        double subcarrier_spacing_hz = 15e3;
        double symbol_duration_s = 1e-3 / 14.0;
        bool operator==(const OfdmConfig &) const = default;
    };

    using SystemConfig = std::variant<SimoConfig, OfdmConfig>;

    void validate(const SystemConfig &config);
    Index channel_dim(const SystemConfig &config);

    // Default upper bound on the number of dictionary columns
    inline constexpr Index kMaxDictionaryColumns = Index(1) << 20;

    // Steering-vector dictionary over a parameter grid. Immutable once built.
    //
    // OFDM channels are vectorized frequency-fastest: h = vec(H) with H of shape
    // N_f x N_sym, so row index = symbol * N_f + subcarrier. With that ordering the
    // dictionary is D_t (x) D_f and column q*S_f + p belongs to (doppler q, delay p).
    class Dictionary
    {
    public:
        const cmat &matrix() const { return matrix_; }
        const Grid &grid() const { return grid_; }
        const SystemConfig &config() const { return config_; }
        bool is_ofdm() const { return std::holds_alternative<OfdmConfig>(config_); }

        // OFDM only: D_t (N_sym x S_t) and D_f (N_f x S_f)
        const cmat &doppler_factor() const { return doppler_factor_; }
        const cmat &delay_factor() const { return delay_factor_; }

        Index rows() const { return matrix_.rows(); }
        Index cols() const { return matrix_.cols(); }

    private:
        Dictionary(cmat matrix, Grid grid, SystemConfig config, cmat doppler_factor = {}, cmat delay_factor = {});

        cmat matrix_;
        Grid grid_;
        SystemConfig config_;
        cmat doppler_factor_;
        cmat delay_factor_;

        friend Dictionary build_simo_dictionary(const AngleGrid &, const SimoConfig &);
        friend Dictionary build_ofdm_dictionary(const DelayDopplerGrid &, const OfdmConfig &, Index);
    };

    // Entries exp(-j*pi*(i-1)*sin(theta)), i = 1..n_antennas
    cvec steering_vector_ula(double theta, Index n_antennas);

    // Entries exp(+j*2*pi*doppler*(i-1)*dT), i = 1..n_symbols
    cvec steering_vector_doppler(double doppler_hz, Index n_symbols, double symbol_duration_s);

    // Entries exp(-j*2*pi*delay*(j-1)*df), j = 1..n_subcarriers
    cvec steering_vector_delay(double delay_s, Index n_subcarriers, double subcarrier_spacing_hz);

    Dictionary build_simo_dictionary(const AngleGrid &grid, const SimoConfig &config);
    Dictionary build_ofdm_dictionary(const DelayDopplerGrid &grid, const OfdmConfig &config,
                                     Index max_columns = kMaxDictionaryColumns);

    // Builds the dictionary implied by (grid, config); throws domain_mismatch if the grid kind
    // and the configuration kind disagree.
    Dictionary build_dictionary(const Grid &grid, const SystemConfig &config);

    // Re-evaluates the steering vectors of `dict` over the same grid for a new system
    // configuration (antenna count, subcarrier spacing, symbol duration, grid dimensions).
    Dictionary swap_system_config(const Dictionary &dict, const SystemConfig &new_config);

    // Short stable identifier derived from grid and configuration
    std::string dictionary_id(const Dictionary &dict);
}

#endif
