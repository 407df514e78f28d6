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

#ifndef CHANSBGM_IO_HPP
#define CHANSBGM_IO_HPP

#include "chansbgm/dictionary.hpp"
#include "chansbgm/generation.hpp"
#include "chansbgm/sbgm.hpp"
#include "chansbgm/scenario.hpp"
#include "chansbgm/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chansbgm
{
    using Json = nlohmann::json;
    namespace fs = std::filesystem;

    // ------------------------------------------------------------------
    // Array container: <base>.json sidecar + <base>.bin payload.
    // The sidecar lists every array with its shape, dtype ("c128" or "f64"), row-major order,
    // little-endian byte order, semantic role and byte offset into the payload. Complex values
    // are stored as interleaved (re, im) pairs.
    // ------------------------------------------------------------------

    struct ArrayEntry
    {
        std::string name;
        std::string role;
        std::vector<std::int64_t> shape;
        bool is_complex = false;
        std::vector<double> data; // row-major, interleaved for complex

        std::int64_t element_count() const;
    };

    struct Container
    {
        Json meta = Json::object(); // kind, provenance and other metadata
        std::vector<ArrayEntry> arrays;

        const ArrayEntry &get(const std::string &name) const;
        bool has(const std::string &name) const;
    };

    // Writes both files through temporaries followed by atomic renames
    void write_container(const fs::path &base, const Container &c);
    Container read_container(const fs::path &base);

    ArrayEntry make_array(const std::string &name, const std::string &role, const cmat &m);
    ArrayEntry make_array(const std::string &name, const std::string &role, const rmat &m);
    ArrayEntry make_array(const std::string &name, const std::string &role, const rvec &v);
    ArrayEntry make_array(const std::string &name, const std::string &role, const std::vector<double> &v);
    // Stacks equal-length vectors into an n x dim complex array (shape {0, 0} when empty)
    ArrayEntry make_array(const std::string &name, const std::string &role, const std::vector<cvec> &rows);

    cmat to_cmat(const ArrayEntry &e);
    rmat to_rmat(const ArrayEntry &e);
    rvec to_rvec(const ArrayEntry &e);
    std::vector<double> to_doubles(const ArrayEntry &e);
    std::vector<cvec> to_cvec_rows(const ArrayEntry &e);

    // ------------------------------------------------------------------
    // JSON conversions for grids and system configurations
    // ------------------------------------------------------------------

    Json to_json(const Grid &grid);
    Grid grid_from_json(const Json &j);
    Json to_json(const SystemConfig &config);
    SystemConfig system_config_from_json(const Json &j);
    Json to_json(const SelectionMatrix &a);
    SelectionMatrix selection_from_json(const Json &j);

    // ------------------------------------------------------------------
    // Domain objects
    // ------------------------------------------------------------------

    struct ModelFile
    {
        SbgmModel model;
        std::optional<Grid> grid;
        std::optional<SystemConfig> system;
    };

    void save_model(const fs::path &base, const SbgmModel &model, const std::optional<Grid> &grid = std::nullopt,
                    const std::optional<SystemConfig> &system = std::nullopt);
    ModelFile load_model(const fs::path &base);

    void save_dictionary(const fs::path &base, const Dictionary &dict);
    // Rebuilds the dictionary from the stored grid and configuration and checks it against the stored matrix
    Dictionary load_dictionary(const fs::path &base);

    void save_observations(const fs::path &base, const ObservationSet &obs, const Json &provenance = Json::object());
    ObservationSet load_observations(const fs::path &base);

    void save_batch(const fs::path &base, const GeneratedBatch &batch);
    GeneratedBatch load_batch(const fs::path &base);

    // Atomic text-file write (temporary file + rename)
    void write_text_file(const fs::path &path, const std::string &content);
    std::string read_text_file(const fs::path &path);
}

#endif
