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

#include "chansbgm/io.hpp"
#include "chansbgm/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        constexpr int kFormatVersion = 1;

        fs::path with_suffix(const fs::path &base, const char *suffix)
        {
            return fs::path(base.string() + suffix);
        }

        std::uint64_t to_le(std::uint64_t v)
        {
            if constexpr (std::endian::native == std::endian::little)
                return v;
            else
            {
                std::uint64_t r = 0;
                for (int b = 0; b < 8; ++b)
                    r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
                return r;
            }
        }

        void write_atomic(const fs::path &path, const char *data, std::size_t bytes)
        {
            if (path.has_parent_path())
                fs::create_directories(path.parent_path());
            const fs::path tmp = with_suffix(path, ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw std::runtime_error("cannot open " + tmp.string() + " for writing");
                out.write(data, std::streamsize(bytes));
                if (!out)
                    throw std::runtime_error("write to " + tmp.string() + " failed");
            }
            fs::rename(tmp, path);
        }

        std::string read_all(const fs::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot open " + path.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        void require_kind(const Container &c, const char *kind)
        {
            if (c.meta.value("kind", std::string()) != kind)
                throw std::invalid_argument(std::string("container is not a ") + kind);
        }

        std::int64_t dim(const ArrayEntry &e, std::size_t axis)
        {
            return axis < e.shape.size() ? e.shape[axis] : 1;
        }
    }

    // ---------- Container ----------

    std::int64_t ArrayEntry::element_count() const
    {
        std::int64_t n = 1;
        for (auto d : shape)
            n *= d;
        return n;
    }

    const ArrayEntry &Container::get(const std::string &name) const
    {
        for (const auto &a : arrays)
            if (a.name == name)
                return a;
        throw std::invalid_argument("container has no array named " + name);
    }

    bool Container::has(const std::string &name) const
    {
        return std::any_of(arrays.begin(), arrays.end(), [&](const ArrayEntry &a)
                           { return a.name == name; });
    }

    void write_container(const fs::path &base, const Container &c)
    {
        Json header;
        header["format"] = "chansbgm-array";
        header["version"] = kFormatVersion;
        header["order"] = "row-major";
        header["endianness"] = "LE";
        header["payload"] = with_suffix(base, ".bin").filename().string();
        header["meta"] = c.meta;

        std::vector<char> payload;
        Json list = Json::array();
        std::size_t offset = 0;
        for (const auto &a : c.arrays)
        {
            const std::size_t per = a.is_complex ? 2 : 1;
            if (std::int64_t(a.data.size()) != a.element_count() * std::int64_t(per))
                throw std::invalid_argument("array " + a.name + ": data length does not match its shape");
            Json e;
            e["name"] = a.name;
            e["role"] = a.role;
            e["shape"] = a.shape;
            e["dtype"] = a.is_complex ? "c128" : "f64";
            e["offset"] = offset;
            e["bytes"] = a.data.size() * 8;
            list.push_back(std::move(e));

            payload.resize(offset + a.data.size() * 8);
            for (std::size_t i = 0; i < a.data.size(); ++i)
            {
                const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(a.data[i]));
                std::memcpy(payload.data() + offset + 8 * i, &bits, 8);
            }
            offset += a.data.size() * 8;
        }
        header["arrays"] = std::move(list);
        header["payload_bytes"] = offset;

        write_atomic(with_suffix(base, ".bin"), payload.data(), payload.size());
        const std::string text = header.dump(2) + "\n";
        write_atomic(with_suffix(base, ".json"), text.data(), text.size());
    }

    Container read_container(const fs::path &base)
    {
        const Json header = Json::parse(read_all(with_suffix(base, ".json")));
        if (header.value("format", std::string()) != "chansbgm-array" || header.value("endianness", std::string()) != "LE" ||
            header.value("order", std::string()) != "row-major")
            throw std::invalid_argument(base.string() + ": unsupported container header");
        const std::string payload = read_all(with_suffix(base, ".bin"));
        if (payload.size() != header.at("payload_bytes").get<std::size_t>())
            throw std::invalid_argument(base.string() + ": payload length does not match the header");

        Container c;
        c.meta = header.at("meta");
        for (const auto &e : header.at("arrays"))
        {
            ArrayEntry a;
            a.name = e.at("name").get<std::string>();
            a.role = e.at("role").get<std::string>();
            a.shape = e.at("shape").get<std::vector<std::int64_t>>();
            const std::string dtype = e.at("dtype").get<std::string>();
            if (dtype != "c128" && dtype != "f64")
                throw std::invalid_argument(base.string() + ": unknown dtype " + dtype);
            a.is_complex = dtype == "c128";
            const std::size_t offset = e.at("offset").get<std::size_t>();
            const std::size_t bytes = e.at("bytes").get<std::size_t>();
            const std::size_t count = std::size_t(a.element_count()) * (a.is_complex ? 2 : 1);
            if (bytes != count * 8 || offset + bytes > payload.size())
                throw std::invalid_argument(base.string() + ": array " + a.name + " has an inconsistent byte range");
            a.data.resize(count);
            for (std::size_t i = 0; i < count; ++i)
            {
                std::uint64_t bits;
                std::memcpy(&bits, payload.data() + offset + 8 * i, 8);
                a.data[i] = std::bit_cast<double>(to_le(bits));
            }
            c.arrays.push_back(std::move(a));
        }
        return c;
    }

    ArrayEntry make_array(const std::string &name, const std::string &role, const cmat &m)
    {
        ArrayEntry a{name, role, {m.rows(), m.cols()}, true, {}};
        a.data.reserve(std::size_t(m.size()) * 2);
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
            {
                a.data.push_back(m(i, j).real());
                a.data.push_back(m(i, j).imag());
            }
        return a;
    }

    ArrayEntry make_array(const std::string &name, const std::string &role, const rmat &m)
    {
        ArrayEntry a{name, role, {m.rows(), m.cols()}, false, {}};
        a.data.reserve(std::size_t(m.size()));
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                a.data.push_back(m(i, j));
        return a;
    }

    ArrayEntry make_array(const std::string &name, const std::string &role, const rvec &v)
    {
        return ArrayEntry{name, role, {v.size()}, false, std::vector<double>(v.data(), v.data() + v.size())};
    }

    ArrayEntry make_array(const std::string &name, const std::string &role, const std::vector<double> &v)
    {
        return ArrayEntry{name, role, {std::int64_t(v.size())}, false, v};
    }

    ArrayEntry make_array(const std::string &name, const std::string &role, const std::vector<cvec> &rows)
    {
        const Index d = rows.empty() ? 0 : rows.front().size();
        ArrayEntry a{name, role, {std::int64_t(rows.size()), d}, true, {}};
        a.data.reserve(rows.size() * std::size_t(d) * 2);
        for (const auto &r : rows)
        {
            if (r.size() != d)
                throw std::invalid_argument("make_array: rows have different lengths");
            for (Index j = 0; j < d; ++j)
            {
                a.data.push_back(r(j).real());
                a.data.push_back(r(j).imag());
            }
        }
        return a;
    }

    cmat to_cmat(const ArrayEntry &e)
    {
        if (!e.is_complex || e.shape.size() != 2)
            throw std::invalid_argument("array " + e.name + " is not a complex matrix");
        cmat m(e.shape[0], e.shape[1]);
        std::size_t t = 0;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j, t += 2)
                m(i, j) = cplx(e.data[t], e.data[t + 1]);
        return m;
    }

    rmat to_rmat(const ArrayEntry &e)
    {
        if (e.is_complex || e.shape.empty() || e.shape.size() > 2)
            throw std::invalid_argument("array " + e.name + " is not a real matrix");
        rmat m(dim(e, 0), dim(e, 1));
        std::size_t t = 0;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                m(i, j) = e.data[t++];
        return m;
    }

    rvec to_rvec(const ArrayEntry &e)
    {
        if (e.is_complex || e.shape.size() != 1)
            throw std::invalid_argument("array " + e.name + " is not a real vector");
        return Eigen::Map<const rvec>(e.data.data(), Index(e.data.size()));
    }

    std::vector<double> to_doubles(const ArrayEntry &e)
    {
        if (e.is_complex)
            throw std::invalid_argument("array " + e.name + " is complex");
        return e.data;
    }

    std::vector<cvec> to_cvec_rows(const ArrayEntry &e)
    {
        if (!e.is_complex || e.shape.size() != 2)
            throw std::invalid_argument("array " + e.name + " is not a stack of complex vectors");
        std::vector<cvec> rows(static_cast<std::size_t>(e.shape[0]));
        const Index d = e.shape[1];
        std::size_t t = 0;
        for (auto &r : rows)
        {
            r.resize(d);
            for (Index j = 0; j < d; ++j, t += 2)
                r(j) = cplx(e.data[t], e.data[t + 1]);
        }
        return rows;
    }

    // ---------- JSON conversions ----------

    Json to_json(const Grid &grid)
    {
        if (const auto *a = std::get_if<AngleGrid>(&grid))
            return Json{{"kind", "angle"}, {"size", a->size()}};
        const auto &g = std::get<DelayDopplerGrid>(grid);
        return Json{{"kind", "delay_doppler"},
                    {"doppler_size", g.doppler_size()},
                    {"delay_size", g.delay_size()},
                    {"max_doppler_hz", g.max_doppler_hz()},
                    {"max_delay_s", g.max_delay_s()}};
    }

    Grid grid_from_json(const Json &j)
    {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "angle")
            return AngleGrid(j.at("size").get<Index>());
        if (kind == "delay_doppler")
            return DelayDopplerGrid(j.at("doppler_size").get<Index>(), j.at("delay_size").get<Index>(),
                                    j.at("max_doppler_hz").get<double>(), j.at("max_delay_s").get<double>());
        throw std::invalid_argument("unknown grid kind " + kind);
    }

    Json to_json(const SystemConfig &config)
    {
        if (const auto *s = std::get_if<SimoConfig>(&config))
            return Json{{"kind", "simo"}, {"n_antennas", s->n_antennas}};
        const auto &o = std::get<OfdmConfig>(config);
        return Json{{"kind", "ofdm"},
                    {"n_subcarriers", o.n_subcarriers},
                    {"n_symbols", o.n_symbols},
                    {"subcarrier_spacing_hz", o.subcarrier_spacing_hz},
                    {"symbol_duration_s", o.symbol_duration_s}};
    }

    SystemConfig system_config_from_json(const Json &j)
    {
        const std::string kind = j.at("kind").get<std::string>();
        SystemConfig out;
        if (kind == "simo")
        {
            SimoConfig s;
            s.n_antennas = j.value("n_antennas", s.n_antennas);
            out = s;
        }
        else if (kind == "ofdm")
        {
            OfdmConfig o;
            o.n_subcarriers = j.value("n_subcarriers", o.n_subcarriers);
            o.n_symbols = j.value("n_symbols", o.n_symbols);
            o.subcarrier_spacing_hz = j.value("subcarrier_spacing_hz", o.subcarrier_spacing_hz);
            o.symbol_duration_s = j.value("symbol_duration_s", o.symbol_duration_s);
            out = o;
        }
        else
            throw std::invalid_argument("unknown system kind " + kind);
        validate(out);
        return out;
    }

    Json to_json(const SelectionMatrix &a)
    {
        return Json{{"n_cols", a.cols()}, {"rows", a.selected()}};
    }

    SelectionMatrix selection_from_json(const Json &j)
    {
        return SelectionMatrix(j.at("n_cols").get<Index>(), j.at("rows").get<std::vector<Index>>());
    }

    // ---------- Model ----------

    void save_model(const fs::path &base, const SbgmModel &model, const std::optional<Grid> &grid,
                    const std::optional<SystemConfig> &system)
    {
        model.validate();
        Container c;
        c.meta["kind"] = "sbgm_model";
        c.meta["K"] = model.components();
        c.meta["S"] = model.size();
        c.meta["floor"] = model.floor();
        c.meta["variance_form"] = model.form() == VarianceForm::full ? "full" : "kronecker";
        c.meta["grid"] = grid ? to_json(*grid) : Json();
        c.meta["system"] = system ? to_json(*system) : Json();
        c.arrays.push_back(make_array("rho", "component weights", model.weights()));
        if (model.form() == VarianceForm::full)
            c.arrays.push_back(make_array("gamma", "component variances (K x S)", model.gammas()));
        else
        {
            c.meta["S_t"] = model.doppler_size();
            c.meta["S_f"] = model.delay_size();
            c.arrays.push_back(make_array("gamma_t", "Doppler variance factors (K x S_t)", model.gamma_t()));
            c.arrays.push_back(make_array("gamma_f", "delay variance factors (K x S_f)", model.gamma_f()));
        }
        write_container(base, c);
    }

    ModelFile load_model(const fs::path &base)
    {
        const Container c = read_container(base);
        require_kind(c, "sbgm_model");
        ModelFile f;
        const double floor = c.meta.at("floor").get<double>();
        const rvec rho = to_rvec(c.get("rho"));
        const std::string form = c.meta.at("variance_form").get<std::string>();
        if (form == "full")
            f.model = SbgmModel::full(rho, to_rmat(c.get("gamma")), floor);
        else if (form == "kronecker")
            f.model = SbgmModel::kronecker(rho, to_rmat(c.get("gamma_t")), to_rmat(c.get("gamma_f")), floor);
        else
            throw std::invalid_argument("unknown variance form " + form);
        if (f.model.components() != c.meta.at("K").get<Index>() || f.model.size() != c.meta.at("S").get<Index>())
            throw std::invalid_argument(base.string() + ": model header disagrees with the stored arrays");
        if (!c.meta.at("grid").is_null())
            f.grid = grid_from_json(c.meta.at("grid"));
        if (!c.meta.at("system").is_null())
            f.system = system_config_from_json(c.meta.at("system"));
        return f;
    }

    // ---------- Dictionary ----------

    void save_dictionary(const fs::path &base, const Dictionary &dict)
    {
        Container c;
        c.meta["kind"] = "dictionary";
        c.meta["id"] = dictionary_id(dict);
        c.meta["grid"] = to_json(dict.grid());
        c.meta["system"] = to_json(dict.config());
        c.arrays.push_back(make_array("matrix", "dictionary (rows x grid points)", dict.matrix()));
        write_container(base, c);
    }

    Dictionary load_dictionary(const fs::path &base)
    {
        const Container c = read_container(base);
        require_kind(c, "dictionary");
        Dictionary d = build_dictionary(grid_from_json(c.meta.at("grid")), system_config_from_json(c.meta.at("system")));
        const cmat stored = to_cmat(c.get("matrix"));
        if (stored.rows() != d.rows() || stored.cols() != d.cols() || (stored - d.matrix()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument(base.string() + ": stored matrix does not match its grid and configuration");
        return d;
    }

    // ---------- Observations ----------

    void save_observations(const fs::path &base, const ObservationSet &obs, const Json &provenance)
    {
        obs.validate();
        Container c;
        c.meta["kind"] = "observations";
        c.meta["signal_energy"] = obs.signal_energy;
        c.meta["measurement"] = to_json(obs.measurement);
        c.meta["provenance"] = provenance;
        auto samples = make_array("samples", "noisy observations y_i (N x M)", obs.samples);
        if (obs.samples.empty())
            samples.shape = {0, obs.dim()};
        c.arrays.push_back(std::move(samples));
        c.arrays.push_back(make_array("noise_vars", "per-sample noise variance", obs.noise_vars));
        c.arrays.push_back(make_array("snr_db", "per-sample SNR in dB", obs.snr_db));
        write_container(base, c);
    }

    ObservationSet load_observations(const fs::path &base)
    {
        const Container c = read_container(base);
        require_kind(c, "observations");
        ObservationSet obs;
        obs.measurement = selection_from_json(c.meta.at("measurement"));
        obs.signal_energy = c.meta.at("signal_energy").get<double>();
        obs.samples = to_cvec_rows(c.get("samples"));
        obs.noise_vars = to_doubles(c.get("noise_vars"));
        obs.snr_db = to_doubles(c.get("snr_db"));
        obs.validate();
        return obs;
    }

    // ---------- Generated batches ----------

    void save_batch(const fs::path &base, const GeneratedBatch &batch)
    {
        Container c;
        c.meta["kind"] = "generated_batch";
        Json prov;
        prov["model_id"] = batch.model_id;
        prov["dictionary_id"] = batch.dictionary_id;
        prov["seed"] = batch.seed;
        prov["p_max"] = batch.p_max ? Json(*batch.p_max) : Json();
        c.meta["provenance"] = prov;
        c.meta["grid"] = batch.grid ? to_json(*batch.grid) : Json();
        c.arrays.push_back(make_array("params", "sparse parameter vectors s_i (N x S)", batch.params));
        std::vector<double> labels(batch.labels.begin(), batch.labels.end());
        c.arrays.push_back(make_array("labels", "component labels k_i", labels));
        if (batch.channels)
            c.arrays.push_back(make_array("channels", "channels h_i = D s_i (N x rows)", *batch.channels));
        write_container(base, c);
    }

    GeneratedBatch load_batch(const fs::path &base)
    {
        const Container c = read_container(base);
        require_kind(c, "generated_batch");
        GeneratedBatch b;
        const Json &prov = c.meta.at("provenance");
        b.model_id = prov.at("model_id").get<std::string>();
        b.dictionary_id = prov.at("dictionary_id").get<std::string>();
        b.seed = prov.at("seed").get<std::uint64_t>();
        if (!prov.at("p_max").is_null())
            b.p_max = prov.at("p_max").get<Index>();
        if (!c.meta.at("grid").is_null())
            b.grid = grid_from_json(c.meta.at("grid"));
        b.params = to_cvec_rows(c.get("params"));
        for (double l : to_doubles(c.get("labels")))
            b.labels.push_back(Index(l));
        if (c.has("channels"))
            b.channels = to_cvec_rows(c.get("channels"));
        if (b.labels.size() != b.params.size() || (b.channels && b.channels->size() != b.params.size()))
            throw std::invalid_argument(base.string() + ": batch arrays have inconsistent lengths");
        return b;
    }

    void write_text_file(const fs::path &path, const std::string &content)
    {
        write_atomic(path, content.data(), content.size());
    }

    std::string read_text_file(const fs::path &path)
    {
        return read_all(path);
    }
}
