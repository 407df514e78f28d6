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

// chansbgm command-line interface: synth, fit, generate, metrics, selfcheck

#include "chansbgm/commands.hpp"
#include "chansbgm/errors.hpp"
#include "chansbgm/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace chansbgm;

int main(int argc, char **argv)
{
    CLI::App app{"Sparse Bayesian generative modeling of wireless channel parameters"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out = ".";
    int threads = 0;
    CommandOptions opts;

    std::string model = "csgmm";
    Index k = 0;
    std::string variance_form;
    Index p_max = 0;
    std::string swap_config, dataset, model_path, batch, reference;
    std::size_t count = 0;

    auto common = [&](CLI::App *sub)
    {
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "top-level random seed");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--threads", threads, "worker threads (falls back to CHANSBGM_THREADS)")->check(CLI::PositiveNumber);
    };

    auto *synth = app.add_subcommand("synth", "synthesize ground-truth channels and noisy observations");
    common(synth);

    auto *fit = app.add_subcommand("fit", "fit a CSGMM or M-SBL model with EM");
    common(fit);
    fit->add_option("--dataset", dataset, "directory written by synth")->check(CLI::ExistingDirectory);
    fit->add_option("--model", model, "model type")->check(CLI::IsMember({"csgmm", "msbl"}));
    fit->add_option("--K", k, "number of mixture components")->check(CLI::PositiveNumber);
    fit->add_option("--variance-form", variance_form, "variance parametrization")->check(CLI::IsMember({"full", "kronecker"}));

    auto *gen = app.add_subcommand("generate", "generate parameters and optionally channels from a model");
    common(gen);
    gen->add_option("--model", model_path, "model base path (without .json/.bin)");
    gen->add_option("--n", count, "number of samples");
    gen->add_option("--p-max", p_max, "keep only the p_max strongest entries")->check(CLI::PositiveNumber);
    gen->add_flag("--render", opts.render, "also compute channels h = D s");
    gen->add_option("--swap-config", swap_config, "JSON system configuration used for rendering")->check(CLI::ExistingFile);

    auto *met = app.add_subcommand("metrics", "evaluate a generated batch");
    common(met);
    met->add_option("--batch", batch, "batch base path")->required();
    met->add_option("--reference", reference, "reference batch base path");

    auto *self = app.add_subcommand("selfcheck", "run the invariant suite on small built-in instances");
    common(self);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (threads > 0)
            set_thread_count(threads);
        if (!config_path.empty())
            opts.config = Json::parse(read_text_file(config_path));
        for (auto *sub : {synth, fit, gen, met, self})
            if (sub->count("--seed"))
                opts.seed = seed;
        opts.out = out;
        if (fit->parsed())
        {
            opts.model = model;
            if (k > 0)
                opts.components = k;
            if (!variance_form.empty())
                opts.variance_form = variance_form;
            if (!dataset.empty())
                opts.dataset = dataset;
            return cmd_fit(opts, std::cout);
        }
        if (gen->parsed())
        {
            if (!model_path.empty())
                opts.model_path = model_path;
            if (gen->count("--n"))
                opts.count = count;
            if (p_max > 0)
                opts.p_max = p_max;
            if (!swap_config.empty())
                opts.swap_config = swap_config;
            return cmd_generate(opts, std::cout);
        }
        if (met->parsed())
        {
            opts.batch = batch;
            if (!reference.empty())
                opts.reference = reference;
            return cmd_metrics(opts, std::cout);
        }
        if (synth->parsed())
            return cmd_synth(opts, std::cout);
        return cmd_selfcheck(opts, std::cout);
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
