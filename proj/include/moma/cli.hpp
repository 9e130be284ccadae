// SPDX-License-Identifier: Apache-2.0
//
// moma-sim: link-level simulator for multi-service oriented multiple access
// Copyright (C) 2026 The moma-sim authors
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

#pragma once

#include "moma/experiment.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace moma::cli {

enum class Subcommand
{
    Codes,
    Channel,
    Hardening,
    Tti,
    Capacity,
    Coverage,
    Ra,
    PrintConfig
};

std::string_view to_string(Subcommand sub);
Subcommand parse_subcommand(std::string_view text);
const std::vector<Subcommand> &all_subcommands();

struct ExperimentSpec
{
    Subcommand subcommand = Subcommand::PrintConfig;
    std::filesystem::path config_path;   // empty: built-in defaults
    std::filesystem::path output_dir;    // empty: print-config writes to the stream only
    std::optional<std::uint64_t> master_seed;
    std::optional<int> mc_runs;
};

// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitRuntime = 3;

// Resolves the configuration, validates it, runs the subcommand and writes
// its CSV files plus resolved_config.ini into spec.output_dir. Diagnostics
// go to `log`. Outputs depend only on the resolved config and seed.
int run(const ExperimentSpec &spec, std::ostream &log);

// Configuration after the file, the defaults and the overrides are merged.
ExperimentConfig resolve(const ExperimentSpec &spec);

} // namespace moma::cli
