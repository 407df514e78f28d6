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

#include "chansbgm/generation.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/parallel.hpp"
#include "chansbgm/random.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        constexpr std::size_t kGenerateChunk = 256;

        std::uint64_t fnv1a(std::uint64_t h, const void *data, std::size_t bytes)
        {
            const auto *p = static_cast<const unsigned char *>(data);
            for (std::size_t i = 0; i < bytes; ++i)
            {
                h ^= p[i];
                h *= 0x100000001b3ULL;
            }
            return h;
        }

        std::uint64_t hash_matrix(std::uint64_t h, const rmat &m)
        {
            const std::int64_t shape[2] = {std::int64_t(m.rows()), std::int64_t(m.cols())};
            h = fnv1a(h, shape, sizeof(shape));
            for (Index j = 0; j < m.cols(); ++j)
                for (Index i = 0; i < m.rows(); ++i)
                {
                    const double v = m(i, j);
                    h = fnv1a(h, &v, sizeof(v));
                }
            return h;
        }
    }

    std::string model_id(const SbgmModel &model)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        const int form = model.form() == VarianceForm::full ? 0 : 1;
        h = fnv1a(h, &form, sizeof(form));
        const double floor = model.floor();
        h = fnv1a(h, &floor, sizeof(floor));
        h = hash_matrix(h, model.weights());
        if (model.form() == VarianceForm::full)
            h = hash_matrix(h, model.gammas());
        else
        {
            h = hash_matrix(h, model.gamma_t());
            h = hash_matrix(h, model.gamma_f());
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "sbgm:%s:K%lld:S%lld:%016llx", form == 0 ? "full" : "kronecker",
                      static_cast<long long>(model.components()), static_cast<long long>(model.size()),
                      static_cast<unsigned long long>(h));
        return buf;
    }

    GeneratedBatch sample_parameters(const SbgmModel &model, std::size_t n, std::uint64_t seed)
    {
        model.validate();
        const Index k_count = model.components();
        const Index s = model.size();
        const rvec &rho = model.weights();
        const rmat stddev = model.gammas().cwiseSqrt();

        GeneratedBatch batch;
        batch.params.resize(n);
        batch.labels.resize(n);
        batch.model_id = model_id(model);
        batch.seed = seed;

        parallel_chunks(n, kGenerateChunk, [&](std::size_t, std::size_t begin, std::size_t end)
                        {
            for (std::size_t i = begin; i < end; ++i)
            {
                Rng rng = derive_stream(seed, StreamTag::generate, i);
                const double u = uniform(rng, 0.0, 1.0);
                Index k = 0;
                double acc = rho(0);
                while (u >= acc && k + 1 < k_count)
                    acc += rho(++k);
                cvec v(s);
                for (Index j = 0; j < s; ++j)
                    v(j) = stddev(k, j) * complex_normal(rng);
                batch.labels[i] = k;
                batch.params[i] = std::move(v);
            } });
        return batch;
    }

    GeneratedBatch render_channels(GeneratedBatch batch, const Dictionary &dict)
    {
        if (batch.grid && !(*batch.grid == dict.grid()))
            throw domain_mismatch("render_channels: dictionary grid differs from the grid of the batch");
        std::vector<cvec> channels(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i)
        {
            if (batch.params[i].size() != dict.cols())
                throw domain_mismatch("render_channels: dictionary column count differs from the parameter length");
            channels[i] = dict.matrix() * batch.params[i];
        }
        batch.channels = std::move(channels);
        batch.dictionary_id = dictionary_id(dict);
        batch.grid = dict.grid();
        return batch;
    }

    cvec limit_paths(const cvec &s, Index p_max)
    {
        if (p_max < 1)
            throw std::invalid_argument("limit_paths: p_max must be >= 1");
        if (p_max >= s.size())
            return s;
        std::vector<Index> idx(static_cast<std::size_t>(s.size()));
        std::iota(idx.begin(), idx.end(), Index(0));
        std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b)
                         { return std::norm(s(a)) > std::norm(s(b)); });
        cvec out = cvec::Zero(s.size());
        for (Index r = 0; r < p_max; ++r)
            out(idx[std::size_t(r)]) = s(idx[std::size_t(r)]);
        return out;
    }

    GeneratedBatch limit_batch_paths(GeneratedBatch batch, Index p_max)
    {
        for (auto &s : batch.params)
            s = limit_paths(s, p_max);
        batch.p_max = p_max;
        batch.channels.reset();
        batch.dictionary_id.clear();
        return batch;
    }

    cmat empirical_conditional_cov(const SbgmModel &model, Index k, const Dictionary &dict)
    {
        if (k < 0 || k >= model.components())
            throw std::invalid_argument("empirical_conditional_cov: component index out of range");
        if (dict.cols() != model.size())
            throw domain_mismatch("empirical_conditional_cov: dictionary column count differs from the model size");
        const cmat scaled = dict.matrix() * model.gamma(k).cast<cplx>().asDiagonal();
        return scaled * dict.matrix().adjoint();
    }

    std::pair<cmat, cmat> conditional_cov_factors(const SbgmModel &model, Index k, const Dictionary &dict)
    {
        if (model.form() != VarianceForm::kronecker || !dict.is_ofdm())
            throw domain_mismatch("conditional_cov_factors: needs a Kronecker-form model and an OFDM dictionary");
        if (k < 0 || k >= model.components())
            throw std::invalid_argument("conditional_cov_factors: component index out of range");
        const cmat &dt = dict.doppler_factor();
        const cmat &df = dict.delay_factor();
        if (dt.cols() != model.doppler_size() || df.cols() != model.delay_size())
            throw domain_mismatch("conditional_cov_factors: dictionary grid differs from the model factors");
        const cmat st = dt * model.gamma_t().row(k).transpose().cast<cplx>().asDiagonal();
        const cmat sf = df * model.gamma_f().row(k).transpose().cast<cplx>().asDiagonal();
        return {st * dt.adjoint(), sf * df.adjoint()};
    }
}
