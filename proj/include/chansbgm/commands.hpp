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

#ifndef CHANSBGM_COMMANDS_HPP
#define CHANSBGM_COMMANDS_HPP

#include "chansbgm/io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace chansbgm
{
    // Process exit codes
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitUsage = 1;
    inline constexpr int kExitRuntime = 2;
    inline constexpr int kExitNonMonotone = 3;
    inline constexpr int kExitSelfcheckFailed = 4;

    struct CommandOptions
    {
        Json config = Json::object();
        std::optional<std::uint64_t> seed;
        fs::path out = ".";
        std::string model = "csgmm"; // csgmm | msbl
        std::optional<Index> components;
        std::optional<std::string> variance_form;
        std::optional<Index> p_max;
        bool render = false;
        std::optional<fs::path> swap_config;
        std::optional<fs::path> dataset;   // fit: directory written by synth
        std::optional<fs::path> model_path; // generate: model base path
        std::optional<fs::path> batch;     // metrics: batch base path
        std::optional<fs::path> reference; // metrics: reference batch base path
        std::optional<std::size_t> count;  // generate: number of samples
    };

    // Fills defaults for the scenario kind and validates the document
    Json resolve_synth_config(const Json &config, std::optional<std::uint64_t> seed);

    // synth: channels, observations, dictionary, ground truth and the resolved scenario in opts.out
    int cmd_synth(const CommandOptions &opts, std::ostream &log);

    // fit: model + trace.csv; returns kExitNonMonotone if the trace is not monotone
    int cmd_fit(const CommandOptions &opts, std::ostream &log);

    // generate: batch (optionally path-limited and rendered)
    int cmd_generate(const CommandOptions &opts, std::ostream &log);

    // metrics: metrics.json, profile.csv, spread_histogram.csv
    int cmd_metrics(const CommandOptions &opts, std::ostream &log);

    // Runs the invariant suite on small built-in instances
    int cmd_selfcheck(const CommandOptions &opts, std::ostream &log);

    AngleProfile angle_profile_from_json(const Json &j);
    Json to_json(const AngleProfile &profile);
}

#endif
