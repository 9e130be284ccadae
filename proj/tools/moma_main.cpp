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

#include "moma/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"moma: link-level simulator for multi-service oriented multiple access"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int runs = 0;

    for (auto sub : moma::cli::all_subcommands())
    {
        auto *cmd = app.add_subcommand(std::string(moma::cli::to_string(sub)));
        cmd->add_option("--config", config, "INI experiment config (defaults when omitted)")->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--seed", seed, "master seed, overrides [run] master_seed");
        cmd->add_option("--runs", runs, "Monte Carlo runs, overrides [metrics] mc_runs");
        if (sub != moma::cli::Subcommand::PrintConfig)
            cmd->get_option("--out")->required();
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : moma::cli::kExitInvalidConfig;
    }

    moma::cli::ExperimentSpec spec;
    for (auto sub : moma::cli::all_subcommands())
    {
        auto *cmd = app.get_subcommand(std::string(moma::cli::to_string(sub)));
        if (cmd->parsed())
        {
            spec.subcommand = sub;
            if (cmd->count("--seed"))
                spec.master_seed = seed;
            if (cmd->count("--runs"))
                spec.mc_runs = runs;
        }
    }
    spec.config_path = config;
    spec.output_dir = out;
    return moma::cli::run(spec, std::cout);
}
