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

#include "chansbgm/sbgm.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/linalg.hpp"
#include "chansbgm/parallel.hpp"
#include "chansbgm/random.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace chansbgm
{
    namespace
    {
        constexpr double log_pi = 1.1447298858494002; // log(pi)
        constexpr double kDeadResponsibility = 1e-300;
        constexpr std::size_t kEStepChunk = 16;

        void require_finite_at_least(const rmat &m, double floor, const char *what)
        {
            for (Index i = 0; i < m.size(); ++i)
            {
                const double v = m.data()[i];
                if (!std::isfinite(v) || v < floor)
                    throw std::invalid_argument(std::string("SbgmModel: ") + what + " must be finite and >= floor");
            }
        }

        void check_weights(const rvec &w)
        {
            if (w.size() < 1)
                throw std::invalid_argument("SbgmModel: at least one component is required");
            for (Index k = 0; k < w.size(); ++k)
                if (!std::isfinite(w(k)) || w(k) < 0.0)
                    throw std::invalid_argument("SbgmModel: weights must be nonnegative");
            if (std::abs(w.sum() - 1.0) > 1e-12)
                throw std::invalid_argument("SbgmModel: weights must sum to one");
        }

        cmat effective_dictionary(const SelectionMatrix &a, const cmat &d)
        {
            if (a.cols() != d.rows())
                throw std::invalid_argument("measurement matrix and dictionary dimensions disagree");
            return a.is_identity() ? d : a.apply_rows(d);
        }

        void check_gamma(const rvec &gamma, Index s)
        {
            if (gamma.size() != s)
                throw std::invalid_argument("variance vector length does not match the dictionary");
            for (Index j = 0; j < s; ++j)
                if (!(gamma(j) >= 0.0) || !std::isfinite(gamma(j)))
                    throw std::invalid_argument("variances must be nonnegative and finite");
        }

        // C_y without noise: Phi diag(gamma) Phi^H
        cmat signal_covariance(const cmat &phi, const rvec &gamma)
        {
            const cmat scaled = phi * gamma.cast<cplx>().asDiagonal();
            cmat b = scaled * phi.adjoint();
            return 0.5 * (b + b.adjoint());
        }

        Eigen::LLT<cmat> factor_marginal(const cmat &signal_cov, double sigma2)
        {
            cmat c = signal_cov;
            c.diagonal().array() += sigma2;
            Eigen::LLT<cmat> llt(c);
            if (llt.info() != Eigen::Success)
                throw numeric_error("Cholesky factorization of the observation covariance failed");
            return llt;
        }

        // Eigendecomposition of Phi diag(gamma_k) Phi^H, reused for every sample in one E-step
        struct SpectralCache
        {
            rvec lambda;   // M, clamped >= 0
            cmat uh;       // U^H, M x M
            cmat g;        // U^H Phi, M x S
            rmat w;        // |g|^2
            rvec gamma;    // S
            double log_rho;
        };

        SpectralCache build_cache(const cmat &phi, const rvec &gamma, double rho)
        {
            Eigen::SelfAdjointEigenSolver<cmat> es(signal_covariance(phi, gamma));
            if (es.info() != Eigen::Success)
                throw numeric_error("eigendecomposition of a component covariance failed");
            SpectralCache c;
            c.lambda = es.eigenvalues().cwiseMax(0.0);
            c.uh = es.eigenvectors().adjoint();
            c.g = c.uh * phi;
            c.w = c.g.cwiseAbs2();
            c.gamma = gamma;
            c.log_rho = rho > 0.0 ? std::log(rho) : -std::numeric_limits<double>::infinity();
            return c;
        }

        cmat dictionary_matrix_for(const SbgmModel &model, const Dictionary &dict)
        {
            if (dict.cols() != model.size())
                throw domain_mismatch("dictionary column count does not match the model size");
            return dict.matrix();
        }
    }

    // ---------- Model ----------

    SbgmModel SbgmModel::full(rvec weights, rmat gammas, double floor)
    {
        SbgmModel m;
        m.weights_ = std::move(weights);
        m.gammas_ = std::move(gammas);
        m.form_ = VarianceForm::full;
        m.floor_ = floor;
        m.validate();
        return m;
    }

    SbgmModel SbgmModel::kronecker(rvec weights, rmat gamma_t, rmat gamma_f, double floor)
    {
        if (gamma_t.rows() != weights.size() || gamma_f.rows() != weights.size())
            throw std::invalid_argument("SbgmModel: factor rows must equal the component count");
        SbgmModel m;
        m.weights_ = std::move(weights);
        m.gamma_t_ = std::move(gamma_t);
        m.gamma_f_ = std::move(gamma_f);
        m.form_ = VarianceForm::kronecker;
        m.floor_ = floor;
        const Index k_count = m.weights_.size();
        m.gammas_.resize(k_count, m.gamma_t_.cols() * m.gamma_f_.cols());
        for (Index k = 0; k < k_count; ++k)
            m.gammas_.row(k) = kron(rvec(m.gamma_t_.row(k).transpose()), rvec(m.gamma_f_.row(k).transpose())).transpose();
        m.validate();
        return m;
    }

    void SbgmModel::validate() const
    {
        if (!(floor_ >= 0.0) || !std::isfinite(floor_))
            throw std::invalid_argument("SbgmModel: floor must be nonnegative");
        check_weights(weights_);
        if (gammas_.rows() != weights_.size() || gammas_.cols() < 1)
            throw std::invalid_argument("SbgmModel: variance matrix must be K x S with S >= 1");
        if (form_ == VarianceForm::full)
            require_finite_at_least(gammas_, floor_, "variances");
        else
        {
            if (gamma_t_.cols() < 1 || gamma_f_.cols() < 1)
                throw std::invalid_argument("SbgmModel: Kronecker factors must be nonempty");
            require_finite_at_least(gamma_t_, floor_, "Doppler variance factors");
            require_finite_at_least(gamma_f_, floor_, "delay variance factors");
        }
    }

    // ---------- Posterior moments ----------

    cmat marginal_cov_factor(const rvec &gamma, const SelectionMatrix &a, const cmat &d, double sigma2)
    {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw std::invalid_argument("marginal_cov_factor: noise variance must be positive");
        check_gamma(gamma, d.cols());
        const cmat phi = effective_dictionary(a, d);
        return factor_marginal(signal_covariance(phi, gamma), sigma2).matrixL();
    }

    PosteriorMoments posterior_moments(const rvec &gamma, const cvec &y, const SelectionMatrix &a, const cmat &d,
                                       double sigma2, bool want_full_cov)
    {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw std::invalid_argument("posterior_moments: noise variance must be positive");
        check_gamma(gamma, d.cols());
        if (y.size() != a.rows())
            throw std::invalid_argument("posterior_moments: observation length does not match the measurement matrix");
        const cmat phi = effective_dictionary(a, d);
        const Index m = phi.rows();

        const auto llt = factor_marginal(signal_covariance(phi, gamma), sigma2);
        const auto l = llt.matrixL();
        const cmat x = l.solve(phi); // L^{-1} Phi
        const cvec w = l.solve(y);   // L^{-1} y

        PosteriorMoments pm;
        pm.mean = gamma.cast<cplx>().cwiseProduct(x.adjoint() * w);
        const rvec col_norm2 = x.colwise().squaredNorm().transpose();
        pm.cov_diag = (gamma - gamma.cwiseAbs2().cwiseProduct(col_norm2)).cwiseMax(0.0).cwiseMin(gamma);
        if (want_full_cov)
        {
            const cmat xg = x * gamma.cast<cplx>().asDiagonal();
            cmat c = -(xg.adjoint() * xg);
            c.diagonal() += gamma.cast<cplx>();
            pm.cov = std::move(c);
        }
        const cmat &lm = llt.matrixLLT();
        double log_det = 0.0;
        for (Index i = 0; i < m; ++i)
            log_det += 2.0 * std::log(lm(i, i).real());
        pm.log_marginal = -double(m) * log_pi - log_det - w.squaredNorm();
        return pm;
    }

    // ---------- E-step ----------

    EStepResult csgmm_e_step(const SbgmModel &model, const ObservationSet &obs, const Dictionary &dict,
                             bool keep_per_sample)
    {
        model.validate();
        obs.validate();
        if (obs.size() == 0)
            throw std::invalid_argument("csgmm_e_step: observation set is empty");
        const cmat phi = effective_dictionary(obs.measurement, dictionary_matrix_for(model, dict));
        const Index k_count = model.components();
        const Index s = model.size();
        const Index m = phi.rows();
        const std::size_t n = obs.size();

        std::vector<SpectralCache> caches;
        caches.reserve(std::size_t(k_count));
        for (Index k = 0; k < k_count; ++k)
            caches.push_back(build_cache(phi, model.gamma(k), model.weights()(k)));

        EStepResult res;
        res.responsibilities.resize(Index(n), k_count);
        res.log_normalizers.resize(Index(n));
        if (keep_per_sample)
            res.per_sample.assign(std::size_t(k_count), rmat(Index(n), s));

        const std::size_t n_chunks = chunk_count(n, kEStepChunk);
        std::vector<rvec> chunk_r(n_chunks, rvec::Zero(k_count));
        std::vector<rmat> chunk_t(n_chunks, rmat::Zero(k_count, s));
        std::vector<double> chunk_ll(n_chunks, 0.0);

        parallel_chunks(n, kEStepChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end)
                        {
            rmat second(k_count, s);
            rvec logp(k_count);
            cvec z(m);
            rvec dvec(m);
            for (std::size_t i = begin; i < end; ++i)
            {
                const cvec &y = obs.samples[i];
                const double sigma2 = obs.noise_vars[i];
                for (Index k = 0; k < k_count; ++k)
                {
                    const SpectralCache &c = caches[std::size_t(k)];
                    z.noalias() = c.uh * y;
                    double log_det = 0.0;
                    double quad = 0.0;
                    for (Index r = 0; r < m; ++r)
                    {
                        const double ev = c.lambda(r) + sigma2;
                        dvec(r) = 1.0 / ev;
                        log_det += std::log(ev);
                        quad += std::norm(z(r)) / ev;
                    }
                    logp(k) = c.log_rho - double(m) * log_pi - log_det - quad;
                    const cvec v = c.g.adjoint() * (dvec.cast<cplx>().cwiseProduct(z));
                    const rvec shrink = c.w.transpose() * dvec;
                    for (Index j = 0; j < s; ++j)
                    {
                        const double gj = c.gamma(j);
                        const double cd = std::clamp(gj - gj * gj * shrink(j), 0.0, gj);
                        second(k, j) = gj * gj * std::norm(v(j)) + cd;
                    }
                }
                const double mx = logp.maxCoeff();
                if (!std::isfinite(mx))
                    throw numeric_error("csgmm_e_step: non-finite component log-density");
                double acc = 0.0;
                for (Index k = 0; k < k_count; ++k)
                    acc += std::exp(logp(k) - mx);
                const double lse = mx + std::log(acc);
                res.log_normalizers(Index(i)) = lse;
                chunk_ll[chunk] += lse;
                for (Index k = 0; k < k_count; ++k)
                {
                    const double r = std::exp(logp(k) - lse);
                    res.responsibilities(Index(i), k) = r;
                    chunk_r[chunk](k) += r;
                    chunk_t[chunk].row(k) += r * second.row(k);
                    if (keep_per_sample)
                        res.per_sample[std::size_t(k)].row(Index(i)) = second.row(k);
                }
            } });

        res.stats.resp_sum = rvec::Zero(k_count);
        res.stats.second_moment = rmat::Zero(k_count, s);
        res.stats.n_samples = n;
        for (std::size_t c = 0; c < n_chunks; ++c)
        {
            res.stats.resp_sum += chunk_r[c];
            res.stats.second_moment += chunk_t[c];
            res.log_likelihood += chunk_ll[c];
        }
        return res;
    }

    SufficientStats reduce_statistics(const rmat &responsibilities, const std::vector<rmat> &per_sample)
    {
        const Index n = responsibilities.rows();
        const Index k_count = responsibilities.cols();
        if (Index(per_sample.size()) != k_count || k_count < 1)
            throw std::invalid_argument("reduce_statistics: need one statistics matrix per component");
        const Index s = per_sample.front().cols();
        SufficientStats st;
        st.n_samples = std::size_t(n);
        st.resp_sum = responsibilities.colwise().sum().transpose();
        st.second_moment.resize(k_count, s);
        for (Index k = 0; k < k_count; ++k)
        {
            const rmat &p = per_sample[std::size_t(k)];
            if (p.rows() != n || p.cols() != s)
                throw std::invalid_argument("reduce_statistics: statistics matrix has the wrong shape");
            st.second_moment.row(k) = responsibilities.col(k).transpose() * p;
        }
        return st;
    }

    // ---------- M-step ----------

    namespace
    {
        rvec updated_weights(const SufficientStats &stats)
        {
            const double total = stats.resp_sum.sum();
            if (!(total > 0.0))
                throw numeric_error("M-step: total responsibility is zero");
            return stats.resp_sum / total;
        }
    }

    MStepResult csgmm_m_step(const SufficientStats &stats, double clip_floor, const SbgmModel *previous)
    {
        const Index k_count = stats.resp_sum.size();
        const Index s = stats.second_moment.cols();
        if (stats.second_moment.rows() != k_count || k_count < 1)
            throw std::invalid_argument("csgmm_m_step: statistics have inconsistent shapes");
        if (previous && (previous->components() != k_count || previous->size() != s))
            throw std::invalid_argument("csgmm_m_step: previous model shape differs from the statistics");

        MStepResult out;
        rmat gammas(k_count, s);
        for (Index k = 0; k < k_count; ++k)
        {
            const double r = stats.resp_sum(k);
            if (r < kDeadResponsibility)
            {
                out.dead_components.push_back(k);
                const rvec keep = previous ? rvec(previous->gamma(k).cwiseMax(clip_floor)) : rvec::Constant(s, clip_floor);
                gammas.row(k) = keep.transpose();
                continue;
            }
            gammas.row(k) = (stats.second_moment.row(k) / r).cwiseMax(clip_floor);
        }
        out.model = SbgmModel::full(updated_weights(stats), std::move(gammas), clip_floor);
        return out;
    }

    double q_objective(const SufficientStats &stats, const rvec &weights, const rmat &gammas)
    {
        const Index k_count = stats.resp_sum.size();
        const Index s = gammas.cols();
        double q = 0.0;
        for (Index k = 0; k < k_count; ++k)
        {
            const double r = stats.resp_sum(k);
            double term = 0.0;
            if (r > 0.0)
                term += r * (-double(s) * log_pi - gammas.row(k).array().log().sum() + std::log(weights(k)));
            term -= (stats.second_moment.row(k).array() / gammas.row(k).array()).sum();
            q += term;
        }
        return q;
    }

    double kronecker_q_objective(const SufficientStats &stats, const rvec &weights, const KroneckerFactors &f)
    {
        const Index k_count = f.gamma_t.rows();
        rmat gammas(k_count, f.gamma_t.cols() * f.gamma_f.cols());
        for (Index k = 0; k < k_count; ++k)
            gammas.row(k) = kron(rvec(f.gamma_t.row(k).transpose()), rvec(f.gamma_f.row(k).transpose())).transpose();
        return q_objective(stats, weights, gammas);
    }

    KroneckerFactors kronecker_m_step(const SufficientStats &stats, Index doppler_size, Index delay_size,
                                      int coord_iters, double clip_floor, const KroneckerFactors *warm,
                                      std::vector<double> *q_trace)
    {
        const Index k_count = stats.resp_sum.size();
        const Index st = doppler_size;
        const Index sf = delay_size;
        if (st < 1 || sf < 1 || stats.second_moment.cols() != st * sf || stats.second_moment.rows() != k_count)
            throw std::invalid_argument("kronecker_m_step: statistics length must equal S_t * S_f");
        if (coord_iters < 1)
            throw std::invalid_argument("kronecker_m_step: at least one coordinate sweep is required");

        KroneckerFactors f;
        if (warm)
        {
            if (warm->gamma_t.rows() != k_count || warm->gamma_t.cols() != st || warm->gamma_f.rows() != k_count ||
                warm->gamma_f.cols() != sf)
                throw std::invalid_argument("kronecker_m_step: warm-start factors have the wrong shape");
            f = *warm;
        }
        else
        {
            f.gamma_t = rmat::Constant(k_count, st, 1.0);
            f.gamma_f = rmat::Constant(k_count, sf, 1.0);
        }

        const rvec weights = updated_weights(stats);
        auto record = [&]()
        {
            if (q_trace)
                q_trace->push_back(kronecker_q_objective(stats, weights, f));
        };
        if (q_trace)
            record();

        for (int it = 0; it < coord_iters; ++it)
        {
            for (Index k = 0; k < k_count; ++k)
            {
                const double r = stats.resp_sum(k);
                if (r < kDeadResponsibility)
                    continue;
                for (Index q = 0; q < st; ++q)
                {
                    double acc = 0.0;
                    for (Index p = 0; p < sf; ++p)
                        acc += stats.second_moment(k, q * sf + p) / f.gamma_f(k, p);
                    f.gamma_t(k, q) = std::max(acc / (double(sf) * r), clip_floor);
                }
            }
            record();
            for (Index k = 0; k < k_count; ++k)
            {
                const double r = stats.resp_sum(k);
                if (r < kDeadResponsibility)
                    continue;
                for (Index p = 0; p < sf; ++p)
                {
                    double acc = 0.0;
                    for (Index q = 0; q < st; ++q)
                        acc += stats.second_moment(k, q * sf + p) / f.gamma_t(k, q);
                    f.gamma_f(k, p) = std::max(acc / (double(st) * r), clip_floor);
                }
            }
            record();
        }
        return f;
    }

    // ---------- Fit ----------

    bool EmTrace::monotone(double rel_slack) const
    {
        for (std::size_t u = 1; u < log_likelihood.size(); ++u)
        {
            if (std::find(reinit_iterations.begin(), reinit_iterations.end(), int(u)) != reinit_iterations.end())
                continue;
            const double prev = log_likelihood[u - 1];
            if (log_likelihood[u] < prev - rel_slack * std::abs(prev))
                return false;
        }
        return true;
    }

    namespace
    {
        SbgmModel initial_model(const ObservationSet &obs, Index s, const FitOptions &opts, const Dictionary &dict)
        {
            double scale = 0.0;
            for (const auto &y : obs.samples)
                scale += y.squaredNorm();
            scale /= double(obs.size()) * double(obs.dim());
            if (!(scale > 0.0))
                throw degenerate_input("csgmm_fit: all observations are zero");

            Rng rng = derive_stream(opts.seed, StreamTag::init);
            const Index k_count = opts.components;
            const rvec weights = rvec::Constant(k_count, 1.0 / double(k_count));
            if (opts.variance_form == VarianceForm::full)
            {
                rmat g(k_count, s);
                for (Index k = 0; k < k_count; ++k)
                    for (Index j = 0; j < s; ++j)
                        g(k, j) = std::max(uniform(rng, 0.5, 1.5) * scale, opts.clip_floor);
                return SbgmModel::full(weights, std::move(g), opts.clip_floor);
            }
            const auto &grid = std::get<DelayDopplerGrid>(dict.grid());
            const double root = std::sqrt(scale);
            rmat gt(k_count, grid.doppler_size());
            rmat gf(k_count, grid.delay_size());
            for (Index k = 0; k < k_count; ++k)
            {
                for (Index q = 0; q < gt.cols(); ++q)
                    gt(k, q) = std::max(uniform(rng, 0.5, 1.5) * root, opts.clip_floor);
                for (Index p = 0; p < gf.cols(); ++p)
                    gf(k, p) = std::max(uniform(rng, 0.5, 1.5) * root, opts.clip_floor);
            }
            return SbgmModel::kronecker(weights, std::move(gt), std::move(gf), opts.clip_floor);
        }

        // Matched-filter power estimate |phi_j^H y|^2 / ||phi_j||^4 for one observation
        rvec matched_filter_power(const cmat &phi, const cvec &y, double floor)
        {
            const cvec corr = phi.adjoint() * y;
            rvec out(phi.cols());
            for (Index j = 0; j < phi.cols(); ++j)
            {
                const double n2 = phi.col(j).squaredNorm();
                out(j) = n2 > 0.0 ? std::max(std::norm(corr(j)) / (n2 * n2), floor) : floor;
            }
            return out;
        }
    }

    FitResult csgmm_fit(const ObservationSet &obs, const Dictionary &dict, const FitOptions &opts)
    {
        if (opts.components < 1)
            throw std::invalid_argument("csgmm_fit: component count must be >= 1");
        if (opts.max_iters < 0 || !(opts.rel_tol >= 0.0))
            throw std::invalid_argument("csgmm_fit: invalid iteration limits");
        if (obs.size() == 0)
            throw std::invalid_argument("csgmm_fit: observation set is empty");
        obs.validate();
        if (obs.measurement.cols() != dict.rows())
            throw domain_mismatch("csgmm_fit: observations and dictionary have different channel dimensions");
        const bool kron_form = opts.variance_form == VarianceForm::kronecker;
        if (kron_form && !std::holds_alternative<DelayDopplerGrid>(dict.grid()))
            throw domain_mismatch("csgmm_fit: the Kronecker variance form needs a delay-Doppler grid");

        const Index s = dict.cols();
        FitResult out;
        SbgmModel model = initial_model(obs, s, opts, dict);
        EmTrace &trace = out.trace;

        for (int u = 0;; ++u)
        {
            EStepResult e;
            try
            {
                e = csgmm_e_step(model, obs, dict);
            }
            catch (const numeric_error &err)
            {
                throw numeric_error("csgmm_fit: iteration " + std::to_string(u) + ": " + err.what());
            }
            if (!std::isfinite(e.log_likelihood))
                throw numeric_error("csgmm_fit: iteration " + std::to_string(u) + ": non-finite log-likelihood");
            trace.log_likelihood.push_back(e.log_likelihood);

            const bool after_reinit = !trace.reinit_iterations.empty() && trace.reinit_iterations.back() == u;
            if (u > 0 && !after_reinit)
            {
                const double prev = trace.log_likelihood[std::size_t(u) - 1];
                const double rel = std::abs(e.log_likelihood - prev) / std::max(std::abs(prev), 1e-300);
                if (rel < opts.rel_tol)
                {
                    trace.converged = true;
                    break;
                }
            }
            if (u == opts.max_iters)
                break;

            std::vector<Index> dead;
            rvec weights;
            rmat gammas;
            KroneckerFactors factors;
            if (kron_form)
            {
                const KroneckerFactors warm{model.gamma_t(), model.gamma_f()};
                factors = kronecker_m_step(e.stats, model.doppler_size(), model.delay_size(), opts.coord_iters,
                                           opts.clip_floor, &warm);
                weights = updated_weights(e.stats);
                for (Index k = 0; k < e.stats.resp_sum.size(); ++k)
                    if (e.stats.resp_sum(k) < kDeadResponsibility)
                        dead.push_back(k);
            }
            else
            {
                MStepResult mr = csgmm_m_step(e.stats, opts.clip_floor, &model);
                dead = std::move(mr.dead_components);
                weights = mr.model.weights();
                gammas = mr.model.gammas();
            }

            if (!dead.empty())
            {
                // Reinitialize each dead component from the worst-explained samples
                const cmat phi = effective_dictionary(obs.measurement, dict.matrix());
                std::vector<std::size_t> order(obs.size());
                std::iota(order.begin(), order.end(), std::size_t(0));
                const rvec max_resp = e.responsibilities.rowwise().maxCoeff();
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                                 { return max_resp(Index(a)) < max_resp(Index(b)); });
                for (std::size_t d = 0; d < dead.size(); ++d)
                {
                    const Index k = dead[d];
                    const std::size_t i = order[d % order.size()];
                    const rvec target = matched_filter_power(phi, obs.samples[i], opts.clip_floor);
                    if (kron_form)
                    {
                        SufficientStats one{rvec::Ones(1), target.transpose(), 1};
                        const KroneckerFactors fk =
                            kronecker_m_step(one, model.doppler_size(), model.delay_size(), 1, opts.clip_floor);
                        factors.gamma_t.row(k) = fk.gamma_t.row(0);
                        factors.gamma_f.row(k) = fk.gamma_f.row(0);
                    }
                    else
                        gammas.row(k) = target.transpose();
                    weights(k) = 1.0 / double(obs.size());
                }
                weights /= weights.sum();
                trace.reinit_iterations.push_back(u + 1);
            }

            model = kron_form ? SbgmModel::kronecker(weights, std::move(factors.gamma_t), std::move(factors.gamma_f),
                                                     opts.clip_floor)
                              : SbgmModel::full(weights, std::move(gammas), opts.clip_floor);
            ++trace.iterations;
        }
        out.model = std::move(model);
        return out;
    }

    double total_log_likelihood(const SbgmModel &model, const ObservationSet &obs, const Dictionary &dict)
    {
        model.validate();
        obs.validate();
        const cmat phi = effective_dictionary(obs.measurement, dictionary_matrix_for(model, dict));
        const Index k_count = model.components();
        const Index m = phi.rows();
        std::vector<cmat> signal(static_cast<std::size_t>(k_count));
        for (Index k = 0; k < k_count; ++k)
            signal[std::size_t(k)] = signal_covariance(phi, model.gamma(k));

        const std::size_t n = obs.size();
        const std::size_t n_chunks = chunk_count(n, kEStepChunk);
        std::vector<double> chunk_ll(n_chunks, 0.0);
        parallel_chunks(n, kEStepChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end)
                        {
            rvec logp(k_count);
            for (std::size_t i = begin; i < end; ++i)
            {
                for (Index k = 0; k < k_count; ++k)
                {
                    const double rho = model.weights()(k);
                    if (rho <= 0.0)
                    {
                        logp(k) = -std::numeric_limits<double>::infinity();
                        continue;
                    }
                    const auto llt = factor_marginal(signal[std::size_t(k)], obs.noise_vars[i]);
                    const cvec w = llt.matrixL().solve(obs.samples[i]);
                    double log_det = 0.0;
                    for (Index r = 0; r < m; ++r)
                        log_det += 2.0 * std::log(llt.matrixLLT()(r, r).real());
                    logp(k) = std::log(rho) - double(m) * log_pi - log_det - w.squaredNorm();
                }
                const double mx = logp.maxCoeff();
                chunk_ll[chunk] += mx + std::log((logp.array() - mx).exp().sum());
            } });
        double ll = 0.0;
        for (double v : chunk_ll)
            ll += v;
        return ll;
    }

    // ---------- CSVAE terms ----------

    ElboBreakdown csvae_elbo_terms(const rvec &gamma, const cvec &y, const SelectionMatrix &a, const cmat &d,
                                   double sigma2, const rvec &enc_mean, const rvec &enc_var)
    {
        if (enc_mean.size() != enc_var.size())
            throw std::invalid_argument("csvae_elbo_terms: encoder mean and variance lengths differ");
        for (Index j = 0; j < enc_var.size(); ++j)
            if (!(enc_var(j) > 0.0))
                throw std::invalid_argument("csvae_elbo_terms: encoder variances must be positive");
        check_gamma(gamma, d.cols());
        if (!(gamma.minCoeff() > 0.0))
            throw std::invalid_argument("csvae_elbo_terms: variances must be strictly positive");

        ElboBreakdown out;
        out.encoder_kl = -0.5 * (1.0 + enc_var.array().log() - enc_mean.array().square() - enc_var.array()).sum();

        const PosteriorMoments pm = posterior_moments(gamma, y, a, d, sigma2, true);
        const cmat phi = effective_dictionary(a, d);
        const Index m = phi.rows();
        const Index s = phi.cols();
        const cmat &c = *pm.cov;
        const double resid = (y - phi * pm.mean).squaredNorm();
        const rvec inv_gamma = gamma.cwiseInverse();
        const double mahal = pm.mean.cwiseAbs2().cwiseProduct(inv_gamma).sum();

        // Expected log-likelihood under the posterior
        const cmat gram = phi.adjoint() * phi;
        const double trace_term = gram.cwiseProduct(c.transpose()).sum().real();
        out.reconstruction = -(double(m) * std::log(std::numbers::pi * sigma2) + (resid + trace_term) / sigma2);

        // log det C from the information form C^{-1} = diag(1/gamma) + Phi^H Phi / sigma2
        cmat info = gram / sigma2;
        info.diagonal() += inv_gamma.cast<cplx>();
        Eigen::LLT<cmat> info_llt(info);
        if (info_llt.info() != Eigen::Success)
            throw numeric_error("csvae_elbo_terms: posterior precision is not positive definite");
        double log_det_c = 0.0;
        for (Index j = 0; j < s; ++j)
            log_det_c -= 2.0 * std::log(info_llt.matrixLLT()(j, j).real());
        const double trace_ratio = c.diagonal().real().cwiseProduct(inv_gamma).sum();
        out.posterior_kl = gamma.array().log().sum() - log_det_c - double(s) + trace_ratio + mahal;

        // Cancelled form with log det C_y from its Cholesky factor
        const cmat l = marginal_cov_factor(gamma, a, d, sigma2);
        double log_det_cy = 0.0;
        for (Index i = 0; i < m; ++i)
            log_det_cy += 2.0 * std::log(l(i, i).real());
        out.combined = -(double(m) * std::log(std::numbers::pi * sigma2) + resid / sigma2) -
                       (-double(m) * std::log(sigma2) + log_det_cy + mahal);
        return out;
    }
}
