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

#ifndef CHANSBGM_SBGM_HPP
#define CHANSBGM_SBGM_HPP

#include "chansbgm/dictionary.hpp"
#include "chansbgm/scenario.hpp"
#include "chansbgm/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace chansbgm
{
    enum class VarianceForm
    {
        full,
        kronecker,
    };

    // Categorical mixture of zero-mean diagonal complex Gaussians on the sparse vector s:
    // k ~ categorical(weights), s | k ~ CN(0, diag(gamma_k)).
    // For the Kronecker form gamma_k = gamma_t_k (x) gamma_f_k with the delay index fastest.
    class SbgmModel
    {
    public:
        SbgmModel() = default;

        // weights: K, gammas: K x S
        static SbgmModel full(rvec weights, rmat gammas, double floor = kDefaultVarianceFloor);
        // weights: K, gamma_t: K x S_t (Doppler factors), gamma_f: K x S_f (delay factors)
        static SbgmModel kronecker(rvec weights, rmat gamma_t, rmat gamma_f, double floor = kDefaultVarianceFloor);

        Index components() const { return weights_.size(); }
        Index size() const { return gammas_.cols(); }
        VarianceForm form() const { return form_; }
        double floor() const { return floor_; }

        const rvec &weights() const { return weights_; }
        const rmat &gammas() const { return gammas_; } // expanded, K x S
        rvec gamma(Index k) const { return gammas_.row(k).transpose(); }

        // Kronecker factors (empty for the full form)
        const rmat &gamma_t() const { return gamma_t_; }
        const rmat &gamma_f() const { return gamma_f_; }
        Index doppler_size() const { return gamma_t_.cols(); }
        Index delay_size() const { return gamma_f_.cols(); }

        // Throws std::invalid_argument on broken invariants: weights sum to one within 1e-12,
        // all variances (or Kronecker factors) finite and >= floor.
        void validate() const;

    private:
        rvec weights_;
        rmat gammas_;
        rmat gamma_t_;
        rmat gamma_f_;
        VarianceForm form_ = VarianceForm::full;
        double floor_ = kDefaultVarianceFloor;
    };

    // ------------------------------------------------------------------
    // Posterior moments
    // ------------------------------------------------------------------

    struct PosteriorMoments
    {
        cvec mean;
        rvec cov_diag;
        std::optional<cmat> cov; // only when requested
        double log_marginal = 0.0; // log CN(y; 0, C_y)
    };

    // Lower Cholesky factor of C_y = A D diag(gamma) D^H A^H + sigma2 I
    cmat marginal_cov_factor(const rvec &gamma, const SelectionMatrix &a, const cmat &d, double sigma2);

    PosteriorMoments posterior_moments(const rvec &gamma, const cvec &y, const SelectionMatrix &a, const cmat &d,
                                       double sigma2, bool want_full_cov = false);

    // ------------------------------------------------------------------
    // EM
    // ------------------------------------------------------------------

    // resp_sum(k) = sum_i r_ik, second_moment(k, j) = sum_i r_ik (|mu_ikj|^2 + C_ikjj)
    struct SufficientStats
    {
        rvec resp_sum;
        rmat second_moment;
        std::size_t n_samples = 0;
    };

    struct EStepResult
    {
        rmat responsibilities; // N x K
        rvec log_normalizers;  // log sum_k rho_k p(y_i | k), length N
        double log_likelihood = 0.0;
        SufficientStats stats;
        // Optional per-component N x S matrices of |mu_ik|^2 + diag(C_ik)
        std::vector<rmat> per_sample;
    };

    EStepResult csgmm_e_step(const SbgmModel &model, const ObservationSet &obs, const Dictionary &dict,
                             bool keep_per_sample = false);

    // Weighted reduction of per-sample statistics; per_sample[k] is N x S
    SufficientStats reduce_statistics(const rmat &responsibilities, const std::vector<rmat> &per_sample);

    struct MStepResult
    {
        SbgmModel model;
        std::vector<Index> dead_components; // total responsibility below 1e-300
    };

    // Closed-form update; dead components keep `previous` variances (or the floor if none is given)
    MStepResult csgmm_m_step(const SufficientStats &stats, double clip_floor = kDefaultVarianceFloor,
                             const SbgmModel *previous = nullptr);

    struct KroneckerFactors
    {
        rmat gamma_t; // K x S_t
        rmat gamma_f; // K x S_f
    };

    // Coordinate ascent on the EM Q-function restricted to gamma_k = gamma_t_k (x) gamma_f_k.
    // Each sweep updates gamma_t then gamma_f, both clipped at clip_floor. Warm-starts from
    // `warm` when given, otherwise from gamma_f = 1. If q_trace is given, the Q-objective is
    // appended after every half-step.
    KroneckerFactors kronecker_m_step(const SufficientStats &stats, Index doppler_size, Index delay_size,
                                      int coord_iters = 3, double clip_floor = kDefaultVarianceFloor,
                                      const KroneckerFactors *warm = nullptr, std::vector<double> *q_trace = nullptr);

    // Expected complete-data log-likelihood sum_k [R_k(-S log pi - sum_j log gamma_kj + log rho_k) - sum_j T_kj / gamma_kj]
    double q_objective(const SufficientStats &stats, const rvec &weights, const rmat &gammas);
    double kronecker_q_objective(const SufficientStats &stats, const rvec &weights, const KroneckerFactors &factors);

    struct FitOptions
    {
        Index components = 1;
        int max_iters = 500;
        double rel_tol = 1e-6;
        std::uint64_t seed = 0;
        VarianceForm variance_form = VarianceForm::full;
        int coord_iters = 3;
        double clip_floor = kDefaultVarianceFloor;
    };

    struct EmTrace
    {
        std::vector<double> log_likelihood; // entry u is the total log-likelihood of the model after u M-steps
        int iterations = 0;                 // M-steps performed
        bool converged = false;
        std::vector<int> reinit_iterations; // M-steps that reinitialized a dead component

        // Non-decreasing within rel_slack, skipping steps listed in reinit_iterations
        bool monotone(double rel_slack = 1e-8) const;
    };

    struct FitResult
    {
        SbgmModel model;
        EmTrace trace;
    };

    FitResult csgmm_fit(const ObservationSet &obs, const Dictionary &dict, const FitOptions &opts);

    // Independent route through a Cholesky factor per (sample, component)
    double total_log_likelihood(const SbgmModel &model, const ObservationSet &obs, const Dictionary &dict);

    // ------------------------------------------------------------------
    // CSVAE objective terms
    // ------------------------------------------------------------------

    struct ElboBreakdown
    {
        double reconstruction = 0.0; // E[log p(y|s)] under the posterior
        double encoder_kl = 0.0;     // KL(q(z|y) || N(0, I))
        double posterior_kl = 0.0;   // KL(p(s|z,y) || p(s|z))
        double combined = 0.0;       // reconstruction - posterior_kl via the cancelled form
    };

    ElboBreakdown csvae_elbo_terms(const rvec &gamma, const cvec &y, const SelectionMatrix &a, const cmat &d,
                                   double sigma2, const rvec &enc_mean, const rvec &enc_var);
}

#endif
