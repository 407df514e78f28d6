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

#ifndef CHANSBGM_GENERATION_HPP
#define CHANSBGM_GENERATION_HPP

#include "chansbgm/dictionary.hpp"
#include "chansbgm/sbgm.hpp"
#include "chansbgm/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chansbgm
{
    struct GeneratedBatch
    {
        std::vector<cvec> params; // sparse vectors s_i, entry j is the gain at grid point j
        std::vector<Index> labels;
        std::optional<std::vector<cvec>> channels; // present once a dictionary was applied

        std::string model_id;
        std::string dictionary_id;
        std::uint64_t seed = 0;
        std::optional<Index> p_max;
        std::optional<Grid> grid; // grid the parameters are indexed by, when known

        std::size_t size() const { return params.size(); }
    };

    // Content hash of a model (form, sizes, weights, variances)
    std::string model_id(const SbgmModel &model);

    // k_i ~ categorical(weights), s_i ~ CN(0, diag(gamma_{k_i})). Sample i draws from its own
    // stream derived from (seed, i), so batches are independent of the thread count.
    GeneratedBatch sample_parameters(const SbgmModel &model, std::size_t n, std::uint64_t seed);

    // h_i = D s_i. Throws domain_mismatch if the dictionary grid differs from the batch grid.
    GeneratedBatch render_channels(GeneratedBatch batch, const Dictionary &dict);

    // Keeps the p_max entries of largest magnitude (ties go to the lower index), zeros the rest
    cvec limit_paths(const cvec &s, Index p_max);

    // limit_paths on every sample; rendered channels are dropped since they no longer match
    GeneratedBatch limit_batch_paths(GeneratedBatch batch, Index p_max);

    // D diag(gamma_k) D^H
    cmat empirical_conditional_cov(const SbgmModel &model, Index k, const Dictionary &dict);

    // Doppler and delay factors (D_t diag(gamma_t_k) D_t^H, D_f diag(gamma_f_k) D_f^H) of a
    // Kronecker-form model; the full conditional covariance is their Kronecker product.
    std::pair<cmat, cmat> conditional_cov_factors(const SbgmModel &model, Index k, const Dictionary &dict);
}

#endif
