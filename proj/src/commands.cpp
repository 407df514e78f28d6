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

#include "chansbgm/commands.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/generation.hpp"
#include "chansbgm/linalg.hpp"
#include "chansbgm/metrics.hpp"
#include "chansbgm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace chansbgm
{
    namespace
    {
        std::string fmt(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return buf;
        }

        std::pair<double, double> range_from_json(const Json &j, const char *what)
        {
            if (!j.is_array() || j.size() != 2)
                throw std::invalid_argument(std::string(what) + " must be a [lo, hi] pair");
            return {j[0].get<double>(), j[1].get<double>()};
        }

        std::string scenario_kind(const Json &config)
        {
            if (config.contains("scenario") && config["scenario"].contains("kind"))
                return config["scenario"]["kind"].get<std::string>();
            if (config.contains("system") && config["system"].contains("kind"))
                return config["system"]["kind"].get<std::string>();
            return "simo";
        }

        void merge_defaults(Json &target, const Json &defaults)
        {
            for (auto it = defaults.begin(); it != defaults.end(); ++it)
            {
                if (!target.contains(it.key()))
                    target[it.key()] = it.value();
                else if (it.value().is_object() && target[it.key()].is_object())
                    merge_defaults(target[it.key()], it.value());
            }
        }

        std::uint64_t pick_seed(const CommandOptions &opts, std::uint64_t fallback)
        {
            if (opts.seed)
                return *opts.seed;
            if (opts.config.contains("seed"))
                return opts.config["seed"].get<std::uint64_t>();
            return fallback;
        }

        Json read_json_file(const fs::path &p)
        {
            return Json::parse(read_text_file(p));
        }
    }

    // ---------- Angle profiles ----------

    AngleProfile angle_profile_from_json(const Json &j)
    {
        std::vector<AngleComponent> comps;
        for (const auto &c : j.at("components"))
        {
            AngleComponent a;
            a.center = c.at("center_rad").get<double>();
            a.std_dev = c.at("std_rad").get<double>();
            a.half_width = c.value("half_width_rad", 3.0 * a.std_dev);
            a.weight = c.value("weight", 1.0);
            comps.push_back(a);
        }
        return AngleProfile::normalized(std::move(comps));
    }

    Json to_json(const AngleProfile &profile)
    {
        Json comps = Json::array();
        for (const auto &c : profile.components())
            comps.push_back(Json{{"center_rad", c.center}, {"std_rad", c.std_dev}, {"half_width_rad", c.half_width},
                                 {"weight", c.weight}});
        return Json{{"components", comps}};
    }

    // ---------- synth ----------

    Json resolve_synth_config(const Json &config, std::optional<std::uint64_t> seed)
    {
        Json c = config.is_object() ? config : Json::object();
        const std::string kind = scenario_kind(c);
        Json defaults;
        if (kind == "simo")
        {
            defaults = {
                {"seed", 0},
                {"n_samples", 10000},
                {"system", to_json(SystemConfig{SimoConfig{}})},
                {"grid", to_json(Grid{AngleGrid(256)})},
                {"scenario",
                 {{"kind", "simo"},
                  {"profile", to_json(AngleProfile::four_street_canyons())},
                  {"laplacian_std_rad", kDefaultLaplacianStdRad},
                  {"quadrature_points", kDefaultQuadraturePoints}}},
                {"observations", {{"snr_db", {0.0, 20.0}}, {"snr_reference", "full_channel"}}},
            };
        }
        else if (kind == "ofdm")
        {
            const OfdmScenario d;
            defaults = {
                {"seed", 0},
                {"n_samples", 10000},
                {"system", to_json(SystemConfig{OfdmConfig{}})},
                {"grid", to_json(Grid{DelayDopplerGrid(40, 40, 250.0, 6e-6)})},
                {"scenario",
                 {{"kind", "ofdm"},
                  {"max_paths", d.max_paths},
                  {"delay_range_s", {d.delay_range_s.first, d.delay_range_s.second}},
                  {"doppler_range_hz", {d.doppler_range_hz.first, d.doppler_range_hz.second}},
                  {"power_decay_per_s", d.power_decay_per_s},
                  {"snap_to_grid", false}}},
                {"observations", {{"m", 30}, {"snr_db", {5.0, 20.0}}, {"snr_reference", "observed"}}},
            };
        }
        else
            throw std::invalid_argument("unknown scenario kind " + kind);
        merge_defaults(c, defaults);
        if (seed)
            c["seed"] = *seed;
        if (!c["observations"].contains("m"))
            c["observations"]["m"] = channel_dim(system_config_from_json(c["system"]));

        // validation
        const SystemConfig sys = system_config_from_json(c["system"]);
        const Grid grid = grid_from_json(c["grid"]);
        if ((kind == "simo") != std::holds_alternative<SimoConfig>(sys) ||
            (kind == "simo") != std::holds_alternative<AngleGrid>(grid))
            throw domain_mismatch("synth: scenario, system and grid kinds disagree");
        if (c["n_samples"].get<std::int64_t>() < 1)
            throw std::invalid_argument("synth: n_samples must be >= 1");
        const Index m = c["observations"]["m"].get<Index>();
        if (m < 1 || m > channel_dim(sys))
            throw std::invalid_argument("synth: observation dimension m must lie in [1, channel dimension]");
        range_from_json(c["observations"]["snr_db"], "snr_db");
        const std::string ref = c["observations"]["snr_reference"].get<std::string>();
        if (ref != "observed" && ref != "full_channel")
            throw std::invalid_argument("synth: snr_reference must be observed or full_channel");
        if (kind == "simo")
            angle_profile_from_json(c["scenario"]["profile"]);
        return c;
    }

    int cmd_synth(const CommandOptions &opts, std::ostream &log)
    {
        const Json c = resolve_synth_config(opts.config, opts.seed);
        const std::string kind = scenario_kind(c);
        const std::uint64_t seed = c["seed"].get<std::uint64_t>();
        const std::size_t n = c["n_samples"].get<std::size_t>();
        const SystemConfig sys = system_config_from_json(c["system"]);
        const Grid grid = grid_from_json(c["grid"]);
        const Dictionary dict = build_dictionary(grid, sys);

        std::vector<cvec> channels;
        Container channel_file;
        channel_file.meta["kind"] = "channels";
        channel_file.meta["seed"] = seed;
        channel_file.meta["system"] = c["system"];

        if (kind == "simo")
        {
            SimoScenario scn;
            const Json &s = c["scenario"];
            scn.profile = angle_profile_from_json(s["profile"]);
            scn.laplacian_std_rad = s["laplacian_std_rad"].get<double>();
            scn.quadrature_points = s["quadrature_points"].get<int>();
            scn.n_antennas = std::get<SimoConfig>(sys).n_antennas;
            SimoDataset ds = draw_simo_dataset(scn, n, seed);

            const AngleGrid &ag = std::get<AngleGrid>(grid);
            GeneratedBatch truth;
            truth.model_id = "ground-truth";
            truth.seed = seed;
            truth.grid = grid;
            truth.params.resize(n);
            truth.labels.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i)
            {
                Rng rng = derive_stream(seed, StreamTag::ground_truth, i);
                truth.params[i] = grid_projected_parameters(ds.angles[i], scn.laplacian_std_rad, ag, rng);
            }
            save_batch(opts.out / "ground_truth", truth);
            channel_file.arrays.push_back(make_array("angles", "drawn center angles (rad)", ds.angles));
            channels = std::move(ds.channels);
        }
        else
        {
            OfdmScenario scn;
            const Json &s = c["scenario"];
            scn.max_paths = s["max_paths"].get<Index>();
            scn.delay_range_s = range_from_json(s["delay_range_s"], "delay_range_s");
            scn.doppler_range_hz = range_from_json(s["doppler_range_hz"], "doppler_range_hz");
            scn.power_decay_per_s = s["power_decay_per_s"].get<double>();
            scn.system = std::get<OfdmConfig>(sys);
            if (s["snap_to_grid"].get<bool>())
                scn.snap_grid = std::get<DelayDopplerGrid>(grid);
            channels = draw_ofdm_dataset(scn, n, seed);
        }
        channel_file.arrays.insert(channel_file.arrays.begin(), make_array("channels", "ground-truth channels h_i", channels));

        const Index dim = channel_dim(sys);
        const Index m = c["observations"]["m"].get<Index>();
        SelectionMatrix a = SelectionMatrix::identity(dim);
        if (m < dim)
        {
            Rng rng = derive_stream(seed, StreamTag::selection);
            a = random_selection_matrix(m, dim, rng);
        }
        const SnrReference ref = c["observations"]["snr_reference"].get<std::string>() == "observed"
                                     ? SnrReference::observed
                                     : SnrReference::full_channel;
        const ObservationSet obs =
            make_observations(channels, a, range_from_json(c["observations"]["snr_db"], "snr_db"), seed, std::nullopt, ref);

        save_observations(opts.out / "observations", obs, Json{{"seed", seed}, {"grid", c["grid"]}, {"system", c["system"]}});
        write_container(opts.out / "channels", channel_file);
        save_dictionary(opts.out / "dictionary", dict);
        write_text_file(opts.out / "scenario.json", c.dump(2) + "\n");
        log << "synth: wrote " << n << " samples (" << kind << ", M=" << a.rows() << ", S=" << dict.cols() << ") to "
            << opts.out.string() << "\n";
        return kExitOk;
    }

    // ---------- fit ----------

    int cmd_fit(const CommandOptions &opts, std::ostream &log)
    {
        fs::path dataset = opts.dataset ? *opts.dataset : fs::path(opts.config.value("dataset", std::string()));
        if (dataset.empty())
            throw std::invalid_argument("fit: a dataset directory is required");
        const ObservationSet obs = load_observations(dataset / "observations");
        const Dictionary dict = load_dictionary(dataset / "dictionary");

        std::uint64_t dataset_seed = 0;
        if (fs::exists(dataset / "scenario.json"))
            dataset_seed = read_json_file(dataset / "scenario.json").value("seed", std::uint64_t(0));

        FitOptions fo;
        if (opts.model == "msbl")
        {
            if (opts.components && *opts.components != 1)
                throw std::invalid_argument("fit: msbl is the single-component model; --K must be 1 or omitted");
            fo.components = 1;
        }
        else if (opts.model == "csgmm")
            fo.components = opts.components ? *opts.components : opts.config.value("K", Index(16));
        else
            throw std::invalid_argument("fit: unknown model " + opts.model);

        const std::string form = opts.variance_form ? *opts.variance_form : opts.config.value("variance_form", std::string("full"));
        if (form == "full")
            fo.variance_form = VarianceForm::full;
        else if (form == "kronecker")
            fo.variance_form = VarianceForm::kronecker;
        else
            throw std::invalid_argument("fit: unknown variance form " + form);
        fo.max_iters = opts.config.value("max_iters", fo.max_iters);
        fo.rel_tol = opts.config.value("rel_tol", fo.rel_tol);
        fo.coord_iters = opts.config.value("coord_iters", fo.coord_iters);
        fo.clip_floor = opts.config.value("clip_floor", fo.clip_floor);
        fo.seed = pick_seed(opts, dataset_seed);

        const FitResult fr = csgmm_fit(obs, dict, fo);
        save_model(opts.out / "model", fr.model, dict.grid(), dict.config());

        std::string csv = "iteration,log_likelihood,reinitialized\n";
        for (std::size_t u = 0; u < fr.trace.log_likelihood.size(); ++u)
        {
            const bool re = std::find(fr.trace.reinit_iterations.begin(), fr.trace.reinit_iterations.end(), int(u)) !=
                            fr.trace.reinit_iterations.end();
            csv += std::to_string(u) + "," + fmt(fr.trace.log_likelihood[u]) + "," + (re ? "1" : "0") + "\n";
        }
        write_text_file(opts.out / "trace.csv", csv);

        const bool monotone = fr.trace.monotone();
        Json summary{{"components", fo.components},
                     {"variance_form", form},
                     {"seed", fo.seed},
                     {"iterations", fr.trace.iterations},
                     {"converged", fr.trace.converged},
                     {"monotone", monotone},
                     {"final_log_likelihood", fr.trace.log_likelihood.back()}};
        write_text_file(opts.out / "fit.json", summary.dump(2) + "\n");
        log << "fit: K=" << fo.components << " " << form << ", " << fr.trace.iterations << " iterations, "
            << (fr.trace.converged ? "converged" : "iteration limit") << ", log-likelihood "
            << fmt(fr.trace.log_likelihood.back()) << "\n";
        if (!monotone)
        {
            log << "fit: log-likelihood trace is not monotone\n";
            return kExitNonMonotone;
        }
        return kExitOk;
    }

    // ---------- generate ----------

    int cmd_generate(const CommandOptions &opts, std::ostream &log)
    {
        fs::path model_path = opts.model_path ? *opts.model_path : fs::path(opts.config.value("model", std::string()));
        if (model_path.empty())
            throw std::invalid_argument("generate: a model path is required");
        const ModelFile mf = load_model(model_path);
        const std::size_t n = opts.count ? *opts.count : opts.config.value("n", std::size_t(10000));
        const std::uint64_t seed = pick_seed(opts, 0);

        GeneratedBatch batch = sample_parameters(mf.model, n, seed);
        batch.grid = mf.grid;
        std::optional<Index> p_max = opts.p_max;
        if (!p_max && opts.config.contains("p_max"))
            p_max = opts.config["p_max"].get<Index>();
        if (p_max)
            batch = limit_batch_paths(std::move(batch), *p_max);

        if (opts.render || opts.config.value("render", false))
        {
            if (!mf.grid)
                throw std::invalid_argument("generate: the model file carries no grid, cannot render");
            std::optional<SystemConfig> sys = mf.system;
            if (opts.swap_config)
            {
                const Json j = read_json_file(*opts.swap_config);
                sys = system_config_from_json(j.contains("system") ? j["system"] : j);
            }
            if (!sys)
                throw std::invalid_argument("generate: no system configuration to render with");
            batch = render_channels(std::move(batch), build_dictionary(*mf.grid, *sys));
        }
        save_batch(opts.out / "batch", batch);
        log << "generate: wrote " << n << " samples" << (batch.channels ? " with channels" : "") << " to "
            << opts.out.string() << "\n";
        return kExitOk;
    }

    // ---------- metrics ----------

    int cmd_metrics(const CommandOptions &opts, std::ostream &log)
    {
        if (!opts.batch)
            throw std::invalid_argument("metrics: a batch path is required");
        const GeneratedBatch batch = load_batch(*opts.batch);
        std::optional<GeneratedBatch> ref;
        if (opts.reference)
            ref = load_batch(*opts.reference);
        const bool want_channel = opts.config.value("channel_metrics", false);
        if (want_channel && (!ref || !ref->channels || !batch.channels))
            throw std::invalid_argument("metrics: channel metrics need a reference batch and rendered channels on both sides");

        Json report;
        report["n_samples"] = batch.size();
        report["provenance"] = {{"model_id", batch.model_id}, {"dictionary_id", batch.dictionary_id}, {"seed", batch.seed}};
        if (batch.size() == 0)
        {
            write_text_file(opts.out / "metrics.json", report.dump(2) + "\n");
            log << "metrics: empty batch\n";
            return kExitOk;
        }

        const HistogramBins bins{0.0, std::numbers::pi / 2, opts.config.value("bins", Index(64))};
        const AngleGrid *ag = batch.grid ? std::get_if<AngleGrid>(&*batch.grid) : nullptr;

        std::size_t skipped = 0;
        rvec profile;
        std::vector<double> spreads;
        if (ag)
        {
            AngularStats st = angular_stats(batch.params, *ag);
            profile = std::move(st.profile);
            spreads = std::move(st.spreads);
            skipped = st.skipped;
        }
        else
            profile = power_angular_profile(batch.params, &skipped);
        report["skipped_zero_norm"] = skipped;

        std::optional<rvec> ref_profile;
        std::vector<double> ref_spreads;
        if (ref && ref->size() > 0)
        {
            if (ref->params.front().size() != profile.size())
                throw domain_mismatch("metrics: reference parameters have a different grid size");
            std::size_t ref_skipped = 0;
            if (ag)
            {
                AngularStats st = angular_stats(ref->params, *ag);
                ref_profile = std::move(st.profile);
                ref_spreads = std::move(st.spreads);
                ref_skipped = st.skipped;
            }
            else
                ref_profile = power_angular_profile(ref->params, &ref_skipped);
            report["reference"] = {{"n_samples", ref->size()}, {"skipped_zero_norm", ref_skipped}};
        }

        std::vector<bool> mask;
        std::string support_source;
        if (opts.config.contains("support") && ag)
        {
            mask = angle_profile_from_json(opts.config["support"]).support_mask(*ag, opts.config.value("support_n_std", 3.0));
            support_source = "angle profile";
        }
        else
        {
            const rvec &basis = ref_profile ? *ref_profile : profile;
            mask.resize(std::size_t(basis.size()));
            for (Index g = 0; g < basis.size(); ++g)
                mask[std::size_t(g)] = basis(g) > 0.0;
            support_source = ref_profile ? "reference profile" : "own profile";
        }
        report["leakage"] = profile_support_leakage(profile, mask);
        report["support_source"] = support_source;

        std::string pcsv = ag ? "index,angle_rad,profile" : "index,profile";
        pcsv += ref_profile ? ",reference\n" : "\n";
        for (Index g = 0; g < profile.size(); ++g)
        {
            pcsv += std::to_string(g) + ",";
            if (ag)
                pcsv += fmt(ag->point(g)) + ",";
            pcsv += fmt(profile(g));
            if (ref_profile)
                pcsv += "," + fmt((*ref_profile)(g));
            pcsv += "\n";
        }
        write_text_file(opts.out / "profile.csv", pcsv);

        if (ag && !spreads.empty())
        {
            double mean = 0.0;
            for (double v : spreads)
                mean += v;
            report["mean_spread_rad"] = mean / double(spreads.size());
            const rvec h = histogram(spreads, bins);
            std::optional<rvec> hr;
            if (!ref_spreads.empty())
            {
                hr = histogram(ref_spreads, bins);
                double rm = 0.0;
                for (double v : ref_spreads)
                    rm += v;
                report["reference"]["mean_spread_rad"] = rm / double(ref_spreads.size());
                report["spread_w1_rad"] = histogram_w1(spreads, ref_spreads, bins);
            }
            std::string hcsv = hr ? "bin_lo,bin_hi,batch,reference\n" : "bin_lo,bin_hi,batch\n";
            for (Index b = 0; b < bins.count; ++b)
            {
                hcsv += fmt(bins.lo + double(b) * bins.width()) + "," + fmt(bins.lo + double(b + 1) * bins.width()) + "," +
                        fmt(h(b));
                if (hr)
                    hcsv += "," + fmt((*hr)(b));
                hcsv += "\n";
            }
            write_text_file(opts.out / "spread_histogram.csv", hcsv);
        }

        if (ref && ref->channels && batch.channels && ref->size() == batch.size())
        {
            report["nmse"] = nmse(*batch.channels, *ref->channels);
            report["cosine_similarity"] = cosine_similarity(*batch.channels, *ref->channels);
        }
        write_text_file(opts.out / "metrics.json", report.dump(2) + "\n");
        log << "metrics: leakage " << fmt(report["leakage"].get<double>()) << "\n";
        return kExitOk;
    }

    // ---------- selfcheck ----------

    int cmd_selfcheck(const CommandOptions &opts, std::ostream &log)
    {
        const std::uint64_t seed = pick_seed(opts, 7);
        int failures = 0;
        auto report = [&](const char *name, bool ok, double value)
        {
            log << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << fmt(value) << ")\n";
            failures += ok ? 0 : 1;
        };

        Rng rng = derive_stream(seed, StreamTag::init, 99);
        const Index n_ant = 8, s = 16;
        const Dictionary dict = build_simo_dictionary(AngleGrid(s), SimoConfig{n_ant});
        const SelectionMatrix a = random_selection_matrix(6, n_ant, rng);
        const cmat phi = a.apply_rows(dict.matrix());

        // posterior moments against an explicit inverse
        double post_err = 0.0, elbo_err = 0.0;
        for (int t = 0; t < 5; ++t)
        {
            rvec gamma(s);
            for (Index j = 0; j < s; ++j)
                gamma(j) = uniform(rng, 0.01, 2.0);
            cvec y(a.rows());
            for (Index i = 0; i < y.size(); ++i)
                y(i) = complex_normal(rng);
            const double sigma2 = uniform(rng, 1e-3, 1.0);
            const PosteriorMoments pm = posterior_moments(gamma, y, a, dict.matrix(), sigma2);
            cmat cy = phi * gamma.cast<cplx>().asDiagonal() * phi.adjoint();
            cy.diagonal().array() += sigma2;
            const cmat cs = gamma.cast<cplx>().asDiagonal() * phi.adjoint();
            const cmat inv = cy.inverse();
            const cvec mu = cs * inv * y;
            const cmat c = cmat(gamma.cast<cplx>().asDiagonal()) - cs * inv * cs.adjoint();
            post_err = std::max({post_err, (mu - pm.mean).cwiseAbs().maxCoeff(),
                                 (c.diagonal().real() - pm.cov_diag).cwiseAbs().maxCoeff()});

            const ElboBreakdown eb = csvae_elbo_terms(gamma, y, a, dict.matrix(), sigma2, rvec::Zero(4), rvec::Ones(4));
            elbo_err = std::max(elbo_err, std::abs(eb.reconstruction - eb.posterior_kl - eb.combined) / std::abs(eb.combined));
        }
        report("posterior moments match the explicit-inverse formula", post_err < 1e-10, post_err);
        report("ELBO cancellation identity", elbo_err < 1e-8, elbo_err);

        // EM on a small synthetic set
        SimoScenario scn;
        scn.n_antennas = n_ant;
        scn.quadrature_points = 256;
        const SimoDataset ds = draw_simo_dataset(scn, 60, seed);
        const ObservationSet obs = make_observations(ds.channels, a, {5.0, 15.0}, seed);
        FitOptions fo;
        fo.components = 3;
        fo.max_iters = 30;
        fo.seed = seed;
        const FitResult fr = csgmm_fit(obs, dict, fo);
        report("EM log-likelihood is non-decreasing", fr.trace.monotone(), double(fr.trace.iterations));

        const EStepResult e = csgmm_e_step(fr.model, obs, dict);
        const double row_err = (e.responsibilities.rowwise().sum().array() - 1.0).abs().maxCoeff();
        report("responsibilities are normalized", row_err < 1e-12, row_err);
        const double ll_err = std::abs(e.log_likelihood - total_log_likelihood(fr.model, obs, dict)) / std::abs(e.log_likelihood);
        report("E-step normalizer equals the Cholesky log-likelihood", ll_err < 1e-10, ll_err);

        double toep = 0.0;
        for (Index k = 0; k < fr.model.components(); ++k)
        {
            const cmat c = empirical_conditional_cov(fr.model, k, dict);
            toep = std::max(toep, toeplitz_deviation(c) / max_abs(c));
        }
        report("conditional covariances are Toeplitz", toep < 1e-9, toep);

        // Kronecker coordinate ascent
        SufficientStats st{rvec::Constant(2, 5.0), rmat(2, 12), 10};
        for (Index i = 0; i < st.second_moment.size(); ++i)
            st.second_moment.data()[i] = uniform(rng, 0.1, 10.0);
        std::vector<double> q;
        kronecker_m_step(st, 3, 4, 10, kDefaultVarianceFloor, nullptr, &q);
        bool q_ok = true;
        for (std::size_t i = 1; i < q.size(); ++i)
            q_ok = q_ok && q[i] >= q[i - 1] - 1e-12 * std::abs(q[i - 1]);
        report("Kronecker M-step never decreases the objective", q_ok, q.back());

        log << (failures == 0 ? "selfcheck: all checks passed\n" : "selfcheck: some checks failed\n");
        return failures == 0 ? kExitOk : kExitSelfcheckFailed;
    }
}
