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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chansbgm/errors.hpp"
#include "chansbgm/linalg.hpp"
#include "chansbgm/parallel.hpp"
#include "chansbgm/scenario.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <set>

using namespace chansbgm;
using std::numbers::pi;
const cplx J(0.0, 1.0);
const double deg = pi / 180.0;

// Plain trapezoid over a wide window with a very fine step, evaluated entry by entry
static cmat laplacian_oracle(double center, double std_dev, Index n, int points_per_side)
{
    const double b = std_dev / std::sqrt(2.0);
    const double half = 10.0 * std_dev;
    const double h = half / points_per_side;
    cmat c = cmat::Zero(n, n);
    for (int t = -points_per_side; t <= points_per_side; ++t)
    {
        const double theta = center + t * h;
        const double w = (std::abs(t) == points_per_side ? 0.5 : 1.0) * h * std::exp(-std::abs(theta - center) / b) / (2 * b);
        for (Index m = 0; m < n; ++m)
            for (Index k = 0; k < n; ++k)
                c(m, k) += w * std::exp(-J * (pi * double(m - k) * std::sin(theta)));
    }
    return c;
}

TEST_CASE("angle profiles")
{
    Rng rng = derive_stream(3, StreamTag::angle);
    const AngleProfile point({{0.0, 0.0, 0.0, 1.0}});
    for (int i = 0; i < 100; ++i)
        CHECK(sample_angle(point, rng) == 0.0);

    const AngleProfile four = AngleProfile::four_street_canyons();
    REQUIRE(four.components().size() == 4);
    const int n = 100000;
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < n; ++i)
    {
        const double a = sample_angle(four, rng);
        int best = 0;
        for (int k = 1; k < 4; ++k)
            if (std::abs(a - four.components()[k].center) < std::abs(a - four.components()[best].center))
                best = k;
        CHECK(std::abs(a - four.components()[best].center) <= four.components()[best].half_width);
        ++counts[best];
    }
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(counts[k] / double(n) - 0.25) < 0.02);

    CHECK_THROWS_AS(AngleProfile({{0.0, 0.1, 0.1, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(AngleProfile({{1.5, 0.1, 0.2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(AngleProfile(std::vector<AngleComponent>{}), std::invalid_argument);
    CHECK(AngleProfile::normalized({{0.0, 0.1, 0.1, 2.0}, {0.5, 0.1, 0.1, 2.0}}).components()[1].weight == 0.5);

    const AngleGrid grid(128);
    const auto mask = four.support_mask(grid);
    int inside = 0;
    for (Index g = 0; g < grid.size(); ++g)
    {
        bool expect = false;
        for (const auto &c : four.components())
            expect = expect || std::abs(grid.point(g) - c.center) <= 3.0 * c.std_dev + 1e-12;
        CHECK(mask[std::size_t(g)] == expect);
        inside += expect;
    }
    CHECK(inside > 0);
    CHECK(inside < 128);
}

TEST_CASE("Laplacian local covariance")
{
    const cmat c = laplacian_local_covariance(20 * deg, 2 * deg, 16);
    CHECK(hermitian_deviation(c) < 1e-12);
    Eigen::SelfAdjointEigenSolver<cmat> es(c);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    // the integration window [center - 10 std, center + 10 std] holds 1 - exp(-10 sqrt 2) of the density
    CHECK(std::abs(c.trace().real() - 16.0 * (1.0 - std::exp(-10.0 * std::sqrt(2.0)))) < 1e-8);

    const cmat c0 = laplacian_local_covariance(0.0, 2 * deg, 16);
    for (Index i = 1; i < 16; ++i)
        CHECK(std::abs(c0(i, i) - c0(0, 0)) < 1e-12);

    const cmat fine = laplacian_local_covariance(20 * deg, 2 * deg, 16, 4096);
    CHECK((c - fine).norm() < 1e-8);

    const cmat oracle = laplacian_oracle(20 * deg, 2 * deg, 16, 200000);
    CHECK(max_abs(c - oracle) < 1e-9);

    const cmat narrow = laplacian_local_covariance(0.3, 1e-7, 8);
    const cvec a = steering_vector_ula(0.3, 8);
    CHECK(max_abs(narrow - a * a.adjoint()) < 1e-5);

    CHECK_THROWS_AS(laplacian_local_covariance(0.0, 0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(laplacian_local_covariance(0.0, 0.1, 16, 32), std::invalid_argument);
}

TEST_CASE("SIMO channel draws")
{
    Rng rng = derive_stream(5, StreamTag::channel);
    CHECK(draw_simo_channel(cmat::Zero(3, 3), rng).norm() == 0.0);

    const int n = 100000;
    const cmat eye = cmat::Identity(2, 2);
    double p0 = 0.0, p1 = 0.0, re2 = 0.0, im2 = 0.0;
    cplx pseudo = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const cvec h = draw_simo_channel(eye, rng);
        p0 += std::norm(h(0));
        p1 += std::norm(h(1));
        re2 += h(0).real() * h(0).real();
        im2 += h(0).imag() * h(0).imag();
        pseudo += h(0) * h(0);
    }
    CHECK(std::abs(p0 / n - 1.0) < 0.02);
    CHECK(std::abs(p1 / n - 1.0) < 0.02);
    CHECK(std::abs(re2 / n - 0.5) < 0.015);
    CHECK(std::abs(im2 / n - 0.5) < 0.015);
    CHECK(std::abs(pseudo) / n < 0.02);

    const cvec a = steering_vector_ula(0.4, 6);
    const cmat r1 = a * a.adjoint();
    for (int i = 0; i < 20; ++i)
    {
        const cvec h = draw_simo_channel(r1, rng);
        const cplx coef = a.dot(h) / a.squaredNorm();
        CHECK((h - coef * a).norm() < 1e-5 * (1.0 + h.norm()));
    }

    cmat indefinite = cmat::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(draw_simo_channel(indefinite, rng), numeric_error);
}

TEST_CASE("empirical covariance of Laplacian channels")
{
    Rng rng = derive_stream(6, StreamTag::channel);
    const cmat c = laplacian_local_covariance(-0.5, 2 * deg, 4);
    const int n = 100000;
    cmat acc = cmat::Zero(4, 4);
    for (int i = 0; i < n; ++i)
    {
        const cvec h = draw_simo_channel(c, rng);
        acc += h * h.adjoint();
    }
    acc /= double(n);
    // each entry has standard deviation at most sqrt(C_ii C_jj / n) = 1/sqrt(n)
    CHECK(max_abs(acc - c) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("grid-projected ground truth")
{
    const AngleGrid grid(128);
    const rvec m = laplacian_bin_masses(0.2, 2 * deg, grid);
    CHECK(std::abs(m.sum() - 1.0) < 1e-12);
    CHECK(m.minCoeff() >= 0.0);
    Index arg;
    m.maxCoeff(&arg);
    CHECK(std::abs(grid.point(arg) - 0.2) <= grid.spacing());

    Rng rng = derive_stream(2, StreamTag::ground_truth);
    const cvec s = grid_projected_parameters(0.2, 2 * deg, grid, rng);
    CHECK(s.size() == 128);

    Rng rng2 = derive_stream(2, StreamTag::ground_truth);
    const Dictionary d = build_simo_dictionary(AngleGrid(16), SimoConfig{16});
    const cvec s16 = test::random_cvec(rng2, 16);
    CHECK((d.matrix() * bruteforce_parameters(d.matrix(), d.matrix() * s16) - d.matrix() * s16).norm() < 1e-8);
    CHECK_THROWS_AS(bruteforce_parameters(cmat::Identity(3, 4), cvec::Zero(3)), std::invalid_argument);
}

TEST_CASE("OFDM channels")
{
    const OfdmConfig cfg{};
    const cmat ones = ofdm_channel_matrix({{cplx(1.0, 0.0), 0.0, 0.0}}, cfg);
    CHECK((ones.array() - cplx(1.0, 0.0)).abs().maxCoeff() < 1e-14);

    const double tau = 1.0 / (double(cfg.n_subcarriers) * cfg.subcarrier_spacing_hz);
    const cmat dft = ofdm_channel_matrix({{cplx(1.0, 0.0), 0.0, tau}}, cfg);
    for (Index t = 0; t < cfg.n_symbols; ++t)
        for (Index f = 0; f < cfg.n_subcarriers; ++f)
            CHECK(std::abs(dft(f, t) - std::exp(-J * (2 * pi * double(f) / double(cfg.n_subcarriers)))) < 1e-12);

    const std::vector<PathParams> three{{cplx(1.0, 0.5), 100.0, 1e-6}, {cplx(-0.3, 0.2), -50.0, 2.5e-6}, {cplx(0.1, -0.9), 10.0, 4e-6}};
    const cmat h3 = ofdm_channel_matrix(three, cfg);
    Eigen::JacobiSVD<cmat> svd(h3);
    CHECK(svd.singularValues()(3) < 1e-10 * svd.singularValues()(0));

    const cvec v = vectorize(h3);
    CHECK(v(1) == h3(1, 0));
    CHECK(v(cfg.n_subcarriers) == h3(0, 1));
}

TEST_CASE("snapped OFDM channels are exactly sparse in the dictionary")
{
    const DelayDopplerGrid grid(40, 40, 250.0, 6e-6);
    OfdmScenario scn;
    scn.snap_grid = grid;
    const Dictionary d = build_ofdm_dictionary(grid, scn.system);
    Rng rng = derive_stream(9, StreamTag::paths);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto paths = draw_ofdm_paths(scn, rng);
        REQUIRE(!paths.empty());
        REQUIRE(Index(paths.size()) <= scn.max_paths);
        cvec s = cvec::Zero(grid.size());
        for (const auto &p : paths)
        {
            const Index q = Index(std::llround(p.doppler_hz / (2 * 250.0 / 40))) + 20;
            const Index pp = Index(std::llround(p.delay_s / (6e-6 / 40)));
            REQUIRE(std::abs(grid.doppler_point(q) - p.doppler_hz) < 1e-9);
            REQUIRE(std::abs(grid.delay_point(pp) - p.delay_s) < 1e-18);
            s(grid.column(q, pp)) += p.gain;
        }
        const cvec h = vectorize(ofdm_channel_matrix(paths, scn.system));
        CHECK((h - d.matrix() * s).cwiseAbs().maxCoeff() < 1e-10);
    }

    OfdmScenario bad;
    bad.snap_grid = DelayDopplerGrid(40, 40, 100.0, 6e-6);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = OfdmScenario{};
    bad.max_paths = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("selection matrices")
{
    Rng rng = derive_stream(4, StreamTag::selection);
    const SelectionMatrix perm = random_selection_matrix(6, 6, rng);
    std::set<Index> all(perm.selected().begin(), perm.selected().end());
    CHECK(all.size() == 6);
    const rmat dense = perm.to_dense();
    CHECK((dense * dense.transpose() - rmat::Identity(6, 6)).norm() == 0.0);

    const SelectionMatrix a = random_selection_matrix(30, 336, rng);
    CHECK(a.rows() == 30);
    CHECK(std::set<Index>(a.selected().begin(), a.selected().end()).size() == 30);

    int zero = 0;
    for (int i = 0; i < 10000; ++i)
        zero += random_selection_matrix(1, 2, rng).selected()[0] == 0;
    CHECK(std::abs(zero / 10000.0 - 0.5) < 0.02);

    CHECK_THROWS_AS(random_selection_matrix(3, 2, rng), std::invalid_argument);
    CHECK_THROWS_AS(SelectionMatrix(4, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SelectionMatrix(4, {4}), std::invalid_argument);

    const cvec h = test::random_cvec(rng, 336);
    const cvec y = a.apply(h);
    CHECK((y - a.to_dense().cast<cplx>() * h).norm() == 0.0);
    CHECK(SelectionMatrix::identity(5).is_identity());
}

TEST_CASE("observations")
{
    Rng rng = derive_stream(8, StreamTag::channel);
    std::vector<cvec> hs;
    for (int i = 0; i < 50; ++i)
        hs.push_back(test::random_cvec(rng, 12));
    const SelectionMatrix a = random_selection_matrix(5, 12, rng);

    const ObservationSet clean = make_observations(hs, a, {300.0, 300.0}, 1);
    for (std::size_t i = 0; i < hs.size(); ++i)
        CHECK((clean.samples[i] - a.apply(hs[i])).norm() <= 1e-10 * a.apply(hs[i]).norm());

    const ObservationSet fixed = make_observations(hs, a, {10.0, 10.0}, 1, 5.0);
    for (double v : fixed.noise_vars)
        CHECK(v == doctest::Approx(0.1).epsilon(1e-14));

    const ObservationSet obs = make_observations(hs, a, {0.0, 20.0}, 2);
    double energy = 0.0;
    for (const auto &h : hs)
        energy += a.apply(h).squaredNorm();
    energy /= double(hs.size());
    for (std::size_t i = 0; i < obs.size(); ++i)
    {
        CHECK(obs.snr_db[i] >= 0.0);
        CHECK(obs.snr_db[i] <= 20.0);
        CHECK(std::abs(10.0 * std::log10(energy / (5.0 * obs.noise_vars[i])) - obs.snr_db[i]) < 1e-9);
    }

    const ObservationSet full = make_observations(hs, a, {10.0, 10.0}, 2, std::nullopt, SnrReference::full_channel);
    double e_full = 0.0;
    for (const auto &h : hs)
        e_full += h.squaredNorm();
    CHECK(full.noise_vars[0] == doctest::Approx(e_full / double(hs.size()) / 12.0 / 10.0));

    CHECK_THROWS_AS(make_observations({cvec::Zero(12)}, a, {0.0, 1.0}, 1), degenerate_input);
    CHECK_THROWS_AS(make_observations(hs, a, {5.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_observations({}, a, {0.0, 1.0}, 1), std::invalid_argument);

    // noise is circularly symmetric with the requested variance
    std::vector<cvec> zeros_plus(4000, cvec::Zero(12));
    zeros_plus[0](0) = cplx(1.0, 0.0);
    const ObservationSet noise = make_observations(zeros_plus, SelectionMatrix::identity(12), {0.0, 0.0}, 3, 12.0);
    double re2 = 0.0, im2 = 0.0;
    cplx pseudo = 0.0;
    for (std::size_t i = 1; i < noise.size(); ++i)
        for (Index j = 0; j < 12; ++j)
        {
            re2 += noise.samples[i](j).real() * noise.samples[i](j).real();
            im2 += noise.samples[i](j).imag() * noise.samples[i](j).imag();
            pseudo += noise.samples[i](j) * noise.samples[i](j);
        }
    const double cnt = double(noise.size() - 1) * 12.0;
    CHECK(std::abs(re2 / cnt - 0.5) < 0.02);
    CHECK(std::abs(im2 / cnt - 0.5) < 0.02);
    CHECK(std::abs(pseudo) / cnt < 0.02);
}

TEST_CASE("dataset normalization")
{
    Rng rng = derive_stream(8, StreamTag::channel);
    std::vector<cvec> hs;
    for (int i = 0; i < 20; ++i)
        hs.push_back(test::random_cvec(rng, 10));
    const auto n1 = normalize_dataset(hs);
    double e = 0.0;
    for (const auto &h : n1.channels)
        e += h.squaredNorm();
    CHECK(std::abs(e / 20.0 - 10.0) < 1e-10);
    CHECK(normalize_dataset(n1.channels).scale == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<cvec> big;
    for (const auto &h : n1.channels)
        big.push_back(2.0 * h);
    CHECK(normalize_dataset(big).scale == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(normalize_dataset({cvec::Zero(3)}), degenerate_input);
}

TEST_CASE("datasets do not depend on the thread count")
{
    SimoScenario scn;
    scn.quadrature_points = 256;
    set_thread_count(1);
    const SimoDataset a = draw_simo_dataset(scn, 300, 77);
    const auto oa = draw_ofdm_dataset(OfdmScenario{}, 200, 77);
    set_thread_count(3);
    const SimoDataset b = draw_simo_dataset(scn, 300, 77);
    const auto ob = draw_ofdm_dataset(OfdmScenario{}, 200, 77);
    set_thread_count(1);
    for (std::size_t i = 0; i < 300; ++i)
    {
        CHECK(a.angles[i] == b.angles[i]);
        CHECK((a.channels[i] - b.channels[i]).norm() == 0.0);
    }
    for (std::size_t i = 0; i < 200; ++i)
        CHECK((oa[i] - ob[i]).norm() == 0.0);
}
