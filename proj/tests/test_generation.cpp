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
#include "chansbgm/generation.hpp"
#include "chansbgm/linalg.hpp"
#include "chansbgm/parallel.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chansbgm;

namespace
{
    const OfdmConfig config_a{12, 7, 15e3, 1e-3 / 14.0};
    const OfdmConfig config_b{12, 7, 60e3, 1e-3 / 3.5};
}

TEST_CASE("model identifiers")
{
    const SbgmModel a = SbgmModel::full(rvec::Ones(1), rmat::Ones(1, 4));
    const SbgmModel b = SbgmModel::full(rvec::Ones(1), rmat::Constant(1, 4, 2.0));
    CHECK(model_id(a) == model_id(SbgmModel::full(rvec::Ones(1), rmat::Ones(1, 4))));
    CHECK(model_id(a) != model_id(b));
    CHECK(model_id(a).rfind("sbgm:full:K1:S4:", 0) == 0);
}

TEST_CASE("sampled parameters follow the mixture")
{
    rmat g(2, 3);
    g << 1.0, 4.0, 1e-7, 1e-7, 1e-7, 9.0;
    const SbgmModel model = SbgmModel::full((rvec(2) << 0.3, 0.7).finished(), g);
    const std::size_t n = 40000;
    const GeneratedBatch batch = sample_parameters(model, n, 77);
    REQUIRE(batch.size() == n);
    CHECK_FALSE(batch.channels.has_value());
    CHECK(batch.model_id == model_id(model));

    double count0 = 0.0;
    rmat power = rmat::Zero(2, 3);
    for (std::size_t i = 0; i < n; ++i)
    {
        const Index k = batch.labels[i];
        count0 += k == 0 ? 1.0 : 0.0;
        power.row(k) += batch.params[i].cwiseAbs2().transpose();
    }
    const double p0 = count0 / double(n);
    CHECK(std::abs(p0 - 0.3) < 4.0 * std::sqrt(0.3 * 0.7 / double(n)));
    power.row(0) /= count0;
    power.row(1) /= double(n) - count0;
    // |s|^2 is exponential with mean gamma, so the relative std of an average over m draws is 1/sqrt(m)
    for (Index k = 0; k < 2; ++k)
        for (Index j = 0; j < 3; ++j)
        {
            const double m = k == 0 ? count0 : double(n) - count0;
            CHECK(std::abs(power(k, j) - g(k, j)) < 4.0 * g(k, j) / std::sqrt(m));
        }

    // zero mean
    cvec mean = cvec::Zero(3);
    for (const auto &s : batch.params)
        mean += s;
    mean /= double(n);
    for (Index j = 0; j < 3; ++j)
        CHECK(std::abs(mean(j)) < 4.0 * std::sqrt(g.col(j).maxCoeff() / double(n)));
}

TEST_CASE("sampling is deterministic and independent of the thread count")
{
    const SbgmModel model = SbgmModel::full((rvec(3) << 0.2, 0.3, 0.5).finished(), rmat::Constant(3, 16, 0.5));
    set_thread_count(1);
    const GeneratedBatch a = sample_parameters(model, 1000, 3);
    set_thread_count(4);
    const GeneratedBatch b = sample_parameters(model, 1000, 3);
    set_thread_count(1);
    const GeneratedBatch c = sample_parameters(model, 1000, 4);
    bool same = a.labels == b.labels, differs = false;
    for (std::size_t i = 0; i < 1000; ++i)
    {
        same = same && (a.params[i] - b.params[i]).cwiseAbs().maxCoeff() == 0.0;
        differs = differs || (a.params[i] - c.params[i]).cwiseAbs().maxCoeff() > 0.0;
    }
    CHECK(same);
    CHECK(differs);
    // a prefix of a longer batch equals the shorter batch
    const GeneratedBatch longer = sample_parameters(model, 1500, 3);
    CHECK((longer.params[999] - a.params[999]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sample_parameters(model, 0, 3).size() == 0);
}

TEST_CASE("rendering channels")
{
    const Dictionary dict = build_simo_dictionary(AngleGrid(8), SimoConfig{4});
    const SbgmModel model = SbgmModel::full(rvec::Ones(1), rmat::Ones(1, 8));
    const GeneratedBatch r = render_channels(sample_parameters(model, 10, 1), dict);
    REQUIRE(r.channels.has_value());
    for (std::size_t i = 0; i < r.size(); ++i)
        CHECK(((*r.channels)[i] - dict.matrix() * r.params[i]).norm() < 1e-12);
    CHECK(r.dictionary_id == dictionary_id(dict));
    REQUIRE(r.grid.has_value());
    CHECK(*r.grid == Grid(AngleGrid(8)));

    // a rendered batch refuses a dictionary on a different grid
    CHECK_THROWS_AS(render_channels(r, build_simo_dictionary(AngleGrid(16), SimoConfig{4})), domain_mismatch);
    // a fresh batch refuses a dictionary with the wrong column count
    CHECK_THROWS_AS(render_channels(sample_parameters(model, 2, 1), build_simo_dictionary(AngleGrid(6), SimoConfig{4})),
                    domain_mismatch);
}

TEST_CASE("path limiting")
{
    const cvec s = (cvec(3) << cplx(1, 0), cplx(0, 2), cplx(-3, 0)).finished();
    const cvec one = limit_paths(s, 1);
    CHECK(one(0) == cplx(0, 0));
    CHECK(one(1) == cplx(0, 0));
    CHECK(one(2) == cplx(-3, 0));
    const cvec two = limit_paths(s, 2);
    CHECK(two(0) == cplx(0, 0));
    CHECK(two(1) == cplx(0, 2));
    CHECK((limit_paths(s, 3) - s).norm() == 0.0);
    CHECK((limit_paths(s, 10) - s).norm() == 0.0);
    CHECK_THROWS_AS(limit_paths(s, 0), std::invalid_argument);

    // ties go to the lowest index
    const cvec tie = (cvec(3) << cplx(1, 0), cplx(0, 1), cplx(-1, 0)).finished();
    const cvec t1 = limit_paths(tie, 1);
    CHECK(t1(0) == cplx(1, 0));
    CHECK(t1.cwiseAbs().sum() == 1.0);

    Rng rng = derive_stream(5, StreamTag::generate);
    for (int t = 0; t < 50; ++t)
    {
        const cvec v = test::random_cvec(rng, 20);
        const Index p = 1 + t % 7;
        const cvec l = limit_paths(v, p);
        CHECK((limit_paths(l, p) - l).norm() == 0.0);
        CHECK((limit_paths(cplx(2.5, -1.0) * v, p) - cplx(2.5, -1.0) * l).norm() < 1e-12);
        Index kept = 0;
        double min_kept = 1e300, max_dropped = 0.0;
        for (Index j = 0; j < 20; ++j)
            if (l(j) != cplx(0, 0))
            {
                ++kept;
                min_kept = std::min(min_kept, std::norm(v(j)));
            }
            else
                max_dropped = std::max(max_dropped, std::norm(v(j)));
        CHECK(kept == p);
        CHECK(min_kept >= max_dropped);
    }

    const SbgmModel model = SbgmModel::full(rvec::Ones(1), rmat::Ones(1, 8));
    const Dictionary dict = build_simo_dictionary(AngleGrid(8), SimoConfig{4});
    const GeneratedBatch lim = limit_batch_paths(render_channels(sample_parameters(model, 5, 2), dict), 2);
    CHECK_FALSE(lim.channels.has_value());
    REQUIRE(lim.p_max.has_value());
    CHECK(*lim.p_max == 2);
}

TEST_CASE("conditional covariances are Toeplitz")
{
    Rng rng = derive_stream(6, StreamTag::generate);
    const Dictionary simo = build_simo_dictionary(AngleGrid(32), SimoConfig{16});
    rmat g(2, 32);
    for (Index i = 0; i < g.size(); ++i)
        g.data()[i] = uniform(rng, 1e-7, 3.0);
    const SbgmModel model = SbgmModel::full((rvec(2) << 0.5, 0.5).finished(), g);
    for (Index k = 0; k < 2; ++k)
    {
        const cmat c = empirical_conditional_cov(model, k, simo);
        CHECK(hermitian_deviation(c) < 1e-12 * max_abs(c));
        CHECK(toeplitz_deviation(c) < 1e-9 * max_abs(c));
    }
    CHECK_THROWS_AS(empirical_conditional_cov(model, 2, simo), std::invalid_argument);
    CHECK_THROWS_AS(conditional_cov_factors(model, 0, simo), domain_mismatch);

    const DelayDopplerGrid grid(6, 5, 250.0, 6e-6);
    const Dictionary da = build_ofdm_dictionary(grid, config_a);
    const SbgmModel km = SbgmModel::kronecker(rvec::Ones(1), test::random_positive(rng, 6, 0.01, 2.0).transpose(),
                                              test::random_positive(rng, 5, 0.01, 2.0).transpose());
    const auto [ct, cf] = conditional_cov_factors(km, 0, da);
    CHECK(toeplitz_deviation(ct) < 1e-9 * max_abs(ct));
    CHECK(toeplitz_deviation(cf) < 1e-9 * max_abs(cf));
    const cmat full = empirical_conditional_cov(km, 0, da);
    CHECK(max_abs(full - kron(ct, cf)) < 1e-10 * max_abs(full));
    CHECK(block_toeplitz_deviation(full, config_a.n_subcarriers) < 1e-9 * max_abs(full));
}

TEST_CASE("swapping the system configuration keeps the parameters")
{
    Rng rng = derive_stream(7, StreamTag::generate);
    const DelayDopplerGrid grid(6, 5, 250.0, 6e-6);
    const Dictionary da = build_ofdm_dictionary(grid, config_a);
    const Dictionary db = swap_system_config(da, config_b);
    const SbgmModel km = SbgmModel::kronecker((rvec(2) << 0.4, 0.6).finished(),
                                              rmat(test::random_positive(rng, 12, 0.01, 2.0).reshaped(2, 6)),
                                              rmat(test::random_positive(rng, 10, 0.01, 2.0).reshaped(2, 5)));
    const GeneratedBatch ga = render_channels(sample_parameters(km, 50, 9), da);
    const GeneratedBatch gb = render_channels(sample_parameters(km, 50, 9), db);
    bool same = true;
    for (std::size_t i = 0; i < 50; ++i)
        same = same && (ga.params[i] - gb.params[i]).cwiseAbs().maxCoeff() == 0.0;
    CHECK(same);
    CHECK(ga.dictionary_id != gb.dictionary_id);
    CHECK(((*ga.channels)[0] - (*gb.channels)[0]).norm() > 1e-6);
    for (Index k = 0; k < 2; ++k)
    {
        const cmat c = empirical_conditional_cov(km, k, db);
        CHECK(block_toeplitz_deviation(c, config_b.n_subcarriers) < 1e-9 * max_abs(c));
    }
}
