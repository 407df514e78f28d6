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

#include "chansbgm/io.hpp"
#include "test_util.hpp"

#include <cstring>
#include <fstream>

using namespace chansbgm;

namespace
{
    bool bit_equal(const cvec &a, const cvec &b)
    {
        return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(cplx) * std::size_t(a.size())) == 0;
    }

    bool bit_equal(const rmat &a, const rmat &b)
    {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            return false;
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                if (std::memcmp(&a(i, j), &b(i, j), sizeof(double)) != 0)
                    return false;
        return true;
    }
}

TEST_CASE("container round trip is bit-exact")
{
    const auto dir = test::scratch_dir("io_container");
    Rng rng = derive_stream(1, StreamTag::init);
    const cmat m = test::random_cmat(rng, 3, 5);
    rmat r(2, 4);
    r << 1.0 / 3.0, -0.0, 1e-300, 5e300, 7.0, -2.5, 0.1, 1e-17;
    Container c;
    c.meta["kind"] = "test";
    c.meta["note"] = "hello";
    c.arrays.push_back(make_array("m", "complex matrix", m));
    c.arrays.push_back(make_array("r", "real matrix", r));
    c.arrays.push_back(make_array("v", "vector", std::vector<double>{1.5, 2.5}));
    write_container(dir / "c", c);
    CHECK(fs::exists(dir / "c.json"));
    CHECK(fs::exists(dir / "c.bin"));
    CHECK(fs::file_size(dir / "c.bin") == (3 * 5 * 2 + 8 + 2) * sizeof(double));

    const Container back = read_container(dir / "c");
    CHECK(back.meta["note"] == "hello");
    const cmat m2 = to_cmat(back.get("m"));
    CHECK(m2.rows() == 3);
    CHECK(m2.cols() == 5);
    bool same = true;
    for (Index i = 0; i < 3; ++i)
        same = same && bit_equal(cvec(m.row(i).transpose()), cvec(m2.row(i).transpose()));
    CHECK(same);
    CHECK(bit_equal(r, to_rmat(back.get("r"))));
    CHECK(to_doubles(back.get("v")) == std::vector<double>{1.5, 2.5});
    CHECK(back.get("m").role == "complex matrix");
    CHECK_FALSE(back.has("x"));
    CHECK_THROWS_AS(back.get("x"), std::invalid_argument);
    CHECK_THROWS_AS(to_rmat(back.get("m")), std::invalid_argument);

    // the sidecar describes the layout
    const Json side = Json::parse(read_text_file(dir / "c.json"));
    CHECK(side["format"] == "chansbgm-array");
    CHECK(side["endianness"] == "LE");
    CHECK(side["arrays"][0]["dtype"] == "c128");
    CHECK(side["arrays"][0]["shape"] == Json::array({3, 5}));
    CHECK(side["arrays"][1]["offset"] == 3 * 5 * 16);

    // rewriting the same content is byte-identical
    write_container(dir / "c2", back);
    CHECK(read_text_file(dir / "c.bin") == read_text_file(dir / "c2.bin"));
    CHECK(Json::parse(read_text_file(dir / "c2.json"))["arrays"] == side["arrays"]);

    // a truncated payload is rejected
    {
        std::ofstream trunc(dir / "c.bin", std::ios::binary | std::ios::trunc);
        trunc << "abc";
    }
    CHECK_THROWS_AS(read_container(dir / "c"), std::invalid_argument);
    CHECK_THROWS(read_container(dir / "missing"));
}

TEST_CASE("models round trip")
{
    const auto dir = test::scratch_dir("io_model");
    Rng rng = derive_stream(2, StreamTag::init);
    rmat g(3, 7);
    for (Index i = 0; i < g.size(); ++i)
        g.data()[i] = uniform(rng, 1e-7, 5.0);
    const SbgmModel full = SbgmModel::full((rvec(3) << 0.2, 0.3, 0.5).finished(), g, 1e-6);
    save_model(dir / "full", full, Grid(AngleGrid(8)), SystemConfig(SimoConfig{4}));
    const ModelFile mf = load_model(dir / "full");
    CHECK(mf.model.form() == VarianceForm::full);
    CHECK(bit_equal(mf.model.gammas(), full.gammas()));
    CHECK(bit_equal(rmat(mf.model.weights()), rmat(full.weights())));
    CHECK(mf.model.floor() == 1e-6);
    REQUIRE(mf.grid.has_value());
    CHECK(*mf.grid == Grid(AngleGrid(8)));
    REQUIRE(mf.system.has_value());
    CHECK(*mf.system == SystemConfig(SimoConfig{4}));

    const SbgmModel kr = SbgmModel::kronecker(rvec::Ones(1), test::random_positive(rng, 3, 0.1, 1.0).transpose(),
                                              test::random_positive(rng, 4, 0.1, 1.0).transpose());
    save_model(dir / "kr", kr);
    const ModelFile mk = load_model(dir / "kr");
    CHECK(mk.model.form() == VarianceForm::kronecker);
    CHECK(bit_equal(mk.model.gamma_t(), kr.gamma_t()));
    CHECK(bit_equal(mk.model.gamma_f(), kr.gamma_f()));
    CHECK_FALSE(mk.grid.has_value());

    // saving twice gives identical files
    save_model(dir / "full2", full, Grid(AngleGrid(8)), SystemConfig(SimoConfig{4}));
    CHECK(Json::parse(read_text_file(dir / "full.json"))["arrays"] == Json::parse(read_text_file(dir / "full2.json"))["arrays"]);
    CHECK(Json::parse(read_text_file(dir / "full.json"))["meta"] == Json::parse(read_text_file(dir / "full2.json"))["meta"]);
    CHECK(read_text_file(dir / "full.bin") == read_text_file(dir / "full2.bin"));
    CHECK_THROWS_AS(load_dictionary(dir / "full"), std::invalid_argument);
}

TEST_CASE("dictionaries, observations and batches round trip")
{
    const auto dir = test::scratch_dir("io_domain");
    const Dictionary d = build_ofdm_dictionary(DelayDopplerGrid(4, 3, 250.0, 6e-6), OfdmConfig{5, 4, 15e3, 1e-3 / 14});
    save_dictionary(dir / "dict", d);
    const Dictionary d2 = load_dictionary(dir / "dict");
    CHECK(d2.grid() == d.grid());
    CHECK(d2.config() == d.config());
    CHECK(dictionary_id(d2) == dictionary_id(d));

    Rng rng = derive_stream(3, StreamTag::init);
    ObservationSet obs;
    obs.measurement = random_selection_matrix(4, 20, rng);
    obs.signal_energy = 3.25;
    for (int i = 0; i < 6; ++i)
    {
        obs.samples.push_back(test::random_cvec(rng, 4));
        obs.noise_vars.push_back(uniform(rng, 0.1, 1.0));
        obs.snr_db.push_back(uniform(rng, 0.0, 20.0));
    }
    save_observations(dir / "obs", obs, Json{{"seed", 3}});
    const ObservationSet o2 = load_observations(dir / "obs");
    CHECK(o2.measurement == obs.measurement);
    CHECK(o2.measurement.cols() == 20);
    CHECK(o2.signal_energy == 3.25);
    CHECK(o2.noise_vars == obs.noise_vars);
    CHECK(o2.snr_db == obs.snr_db);
    bool same = o2.samples.size() == obs.samples.size();
    for (std::size_t i = 0; same && i < obs.samples.size(); ++i)
        same = bit_equal(o2.samples[i], obs.samples[i]);
    CHECK(same);

    GeneratedBatch b;
    b.params = {test::random_cvec(rng, 12), test::random_cvec(rng, 12)};
    b.labels = {3, 0};
    b.channels = std::vector<cvec>{d.matrix() * b.params[0], d.matrix() * b.params[1]};
    b.model_id = "sbgm:full:K4:S12:0";
    b.dictionary_id = dictionary_id(d);
    b.seed = 99;
    b.p_max = 2;
    b.grid = d.grid();
    save_batch(dir / "batch", b);
    const GeneratedBatch b2 = load_batch(dir / "batch");
    CHECK(b2.labels == b.labels);
    CHECK(b2.model_id == b.model_id);
    CHECK(b2.dictionary_id == b.dictionary_id);
    CHECK(b2.seed == 99);
    REQUIRE(b2.p_max.has_value());
    CHECK(*b2.p_max == 2);
    REQUIRE(b2.grid.has_value());
    CHECK(*b2.grid == d.grid());
    REQUIRE(b2.channels.has_value());
    CHECK(bit_equal(b2.params[1], b.params[1]));
    CHECK(bit_equal((*b2.channels)[0], (*b.channels)[0]));

    GeneratedBatch empty;
    save_batch(dir / "empty", empty);
    CHECK(load_batch(dir / "empty").size() == 0);
    CHECK_THROWS_AS(load_observations(dir / "batch"), std::invalid_argument);
}

TEST_CASE("grid and configuration JSON")
{
    const Grid g = DelayDopplerGrid(40, 40, 250.0, 6e-6);
    CHECK(grid_from_json(to_json(g)) == g);
    const SystemConfig c = OfdmConfig{18, 20, 60e3, 1e-3 / 3.5};
    CHECK(system_config_from_json(to_json(c)) == c);
    CHECK_THROWS_AS(grid_from_json(Json{{"kind", "polar"}}), std::invalid_argument);
    CHECK_THROWS_AS(system_config_from_json(Json{{"kind", "mimo"}}), std::invalid_argument);
    const SelectionMatrix a = SelectionMatrix::identity(5);
    CHECK(selection_from_json(to_json(a)) == a);
}
