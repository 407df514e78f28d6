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

#ifndef CHANSBGM_SCENARIO_HPP
#define CHANSBGM_SCENARIO_HPP

#include "chansbgm/dictionary.hpp"
#include "chansbgm/random.hpp"
#include "chansbgm/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace chansbgm
{
    // ------------------------------------------------------------------
    // Angular environment (SIMO)
    // ------------------------------------------------------------------

    // One angular region: Gaussian(center, std_dev) truncated to [center - half_width, center + half_width].
    // std_dev == 0 or half_width == 0 collapses the component to its center.
    struct AngleComponent
    {
        double center = 0.0;     // rad
        double std_dev = 0.0;    // rad
        double half_width = 0.0; // rad
        double weight = 1.0;
    };

    class AngleProfile
    {
    public:
        // Validates: weights >= 0 summing to 1 (1e-12), supports inside [-pi/2, pi/2)
        explicit AngleProfile(std::vector<AngleComponent> components);

        // Same as the constructor but rescales the weights to sum to one first
        static AngleProfile normalized(std::vector<AngleComponent> components);

        // Four equal-weight regions centered at -60, -20, 20, 60 degrees, std 5 degrees,
        // truncated at 3 standard deviations.
        static AngleProfile four_street_canyons();

        const std::vector<AngleComponent> &components() const { return components_; }

        // Grid points within n_std standard deviations of any component center
        std::vector<bool> support_mask(const AngleGrid &grid, double n_std = 3.0) const;

    private:
        std::vector<AngleComponent> components_;
    };

    double sample_angle(const AngleProfile &profile, Rng &rng);

    // Default Laplacian angular spread around each drawn angle (2 degrees)
    inline constexpr double kDefaultLaplacianStdRad = 2.0 * 3.14159265358979323846 / 180.0;
    inline constexpr int kDefaultQuadraturePoints = 2048;

    // C = int g(theta; center) a(theta) a(theta)^H dtheta with g a Laplacian density of the given
    // standard deviation. Integrated over [center - 10 std, center + 10 std] with composite Simpson
    // rules on either side of the density peak; quadrature_points is the total interval count.
    cmat laplacian_local_covariance(double center, double std_dev, Index n_antennas,
                                    int quadrature_points = kDefaultQuadraturePoints);

    // One draw from CN(0, cov) via a Cholesky factor. A single diagonal jitter of
    // 1e-12*trace/N is added if the plain factorization fails.
    cvec draw_simo_channel(const cmat &cov, Rng &rng);

    // Laplacian probability mass of each angle-grid bin [point - spacing/2, point + spacing/2)
    rvec laplacian_bin_masses(double center, double std_dev, const AngleGrid &grid);

    // Parameter-domain ground truth for one drawn angle: s_g ~ CN(0, mass_g), i.e. the generator's
    // angular power density projected onto the grid with uniformly distributed path phases.
    cvec grid_projected_parameters(double center, double std_dev, const AngleGrid &grid, Rng &rng);

    // Literal inversion s = D^{-1} h for a square dictionary (as many antennas as grid points).
    cvec bruteforce_parameters(const cmat &square_dictionary, const cvec &channel);

    // ------------------------------------------------------------------
    // Delay-Doppler environment (OFDM)
    // ------------------------------------------------------------------

    struct PathParams
    {
        cplx gain;
        double doppler_hz = 0.0;
        double delay_s = 0.0;
    };

    // Parametric multipath environment: L ~ U{1..max_paths}, delays and Dopplers uniform in
    // their ranges, |gain|^2 proportional to exp(-power_decay_per_s * delay), uniform phase.
    struct OfdmScenario
    {
        Index max_paths = 6;
        std::pair<double, double> delay_range_s{0.0, 5e-6};
        std::pair<double, double> doppler_range_hz{-200.0, 200.0};
        double power_decay_per_s = 5e5;
        OfdmConfig system{};
        // When set, every drawn delay/Doppler is snapped onto this grid (exactly sparse channels)
        std::optional<DelayDopplerGrid> snap_grid{};

        void validate() const;
    };

    std::vector<PathParams> draw_ofdm_paths(const OfdmScenario &scn, Rng &rng);

    // H = sum_l gain_l a_f(delay_l) a_t(doppler_l)^T, shape N_f x N_sym
    cmat ofdm_channel_matrix(const std::vector<PathParams> &paths, const OfdmConfig &config);

    cmat draw_ofdm_channel(const OfdmScenario &scn, Rng &rng);

    // Column-major vectorization, subcarrier index fastest
    cvec vectorize(const cmat &h);

    // ------------------------------------------------------------------
    // Observations
    // ------------------------------------------------------------------

    // M x N real 0/1 matrix whose rows are distinct unit vectors; stored as selected column indices.
    class SelectionMatrix
    {
    public:
        SelectionMatrix() = default;
        SelectionMatrix(Index n_cols, std::vector<Index> rows);
        static SelectionMatrix identity(Index n);

        Index rows() const { return Index(rows_.size()); }
        Index cols() const { return n_cols_; }
        const std::vector<Index> &selected() const { return rows_; }
        bool is_identity() const;

        cvec apply(const cvec &h) const;
        cmat apply_rows(const cmat &m) const; // A * m
        rmat to_dense() const;

        bool operator==(const SelectionMatrix &) const = default;

    private:
        Index n_cols_ = 0;
        std::vector<Index> rows_;
    };

    SelectionMatrix random_selection_matrix(Index m, Index n, Rng &rng);

    // Reference energy used to turn a per-sample SNR into a noise variance
    enum class SnrReference
    {
        observed,     // E||A h||^2 / M   (compressed observations)
        full_channel, // E||h||^2 / N     (uncompressed SIMO convention)
    };

    struct ObservationSet
    {
        std::vector<cvec> samples;
        std::vector<double> noise_vars;
        std::vector<double> snr_db;
        SelectionMatrix measurement;
        double signal_energy = 0.0; // energy used in the noise-variance formula

        std::size_t size() const { return samples.size(); }
        Index dim() const { return measurement.rows(); }
        void validate() const;
    };

    // y_i = A h_i + n_i, n_i ~ CN(0, sigma_i^2 I), SNR_i ~ U[lo, hi] dB,
    // sigma_i^2 = E / (M_ref * 10^(SNR_i/10)). E is the dataset estimate of E||A h||^2
    // (or E||h||^2 for SnrReference::full_channel) unless signal_energy is given.
    ObservationSet make_observations(const std::vector<cvec> &channels, const SelectionMatrix &a,
                                     std::pair<double, double> snr_range_db, std::uint64_t seed,
                                     std::optional<double> signal_energy = std::nullopt,
                                     SnrReference reference = SnrReference::observed);

    struct NormalizedDataset
    {
        std::vector<cvec> channels;
        double scale = 1.0;
    };

    // Scales the channels so that the mean squared norm equals the channel dimension
    NormalizedDataset normalize_dataset(const std::vector<cvec> &channels);

    // ------------------------------------------------------------------
    // End-to-end synthetic datasets
    // ------------------------------------------------------------------

    struct SimoScenario
    {
        AngleProfile profile = AngleProfile::four_street_canyons();
        double laplacian_std_rad = kDefaultLaplacianStdRad;
        Index n_antennas = 16;
        int quadrature_points = kDefaultQuadraturePoints;
    };

    struct SimoDataset
    {
        std::vector<double> angles;
        std::vector<cvec> channels;
    };

    // Sample i uses streams derived from (seed, i) only; output is independent of thread count.
    SimoDataset draw_simo_dataset(const SimoScenario &scn, std::size_t n, std::uint64_t seed);

    std::vector<cvec> draw_ofdm_dataset(const OfdmScenario &scn, std::size_t n, std::uint64_t seed);
}

#endif
