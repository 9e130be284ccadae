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

#include <doctest.h>
#include <fmt/format.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace moma;
using namespace moma::cli;
namespace fs = std::filesystem;

namespace {

const char *const kSmallConfig = "[system]\nnum_bs_antennas = 4\n"
                                 "[metrics]\nmc_runs = 2\nk_max = 16\nrate_steps = 2\n"
                                 "[hardening]\nantennas = 1, 4\nrealizations = 10\n"
                                 "[ra]\nrounds = 500\n";

fs::path scratch(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("moma_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> csv_files(const fs::path &dir)
{
    std::map<std::string, std::string> out;
    for (const auto &e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv" || e.path().extension() == ".ini")
            out[e.path().filename().string()] = slurp(e.path());
    return out;
}

int run_into(Subcommand sub, const fs::path &config, const fs::path &out, std::optional<std::uint64_t> seed = {})
{
    ExperimentSpec spec;
    spec.subcommand = sub;
    spec.config_path = config;
    spec.output_dir = out;
    spec.master_seed = seed;
    std::ostringstream log;
    return run(spec, log);
}

} // namespace

TEST_CASE("subcommand names")
{
    CHECK(all_subcommands().size() == 8);
    for (auto s : all_subcommands())
        CHECK(parse_subcommand(to_string(s)) == s);
    CHECK(to_string(Subcommand::PrintConfig) == "print-config");
    CHECK_THROWS_AS(parse_subcommand("simulate"), std::invalid_argument);
}

TEST_CASE("every subcommand writes headed CSVs and repeats itself byte for byte")
{
    const auto dir = scratch("all");
    const auto cfg = write_file(dir / "small.ini", kSmallConfig);
    const std::map<Subcommand, std::vector<std::string>> expected{
        {Subcommand::Codes, {"codes_u.csv", "codes_w_md.csv", "codes_w_ld.csv", "codes_signatures.csv", "codes_gram.csv"}},
        {Subcommand::Channel, {"channel_response.csv", "channel_cv.csv"}},
        {Subcommand::Hardening, {"hardening.csv"}},
        {Subcommand::Tti, {"tti_users.csv", "tti_gains.csv", "tti_summary.csv"}},
        {Subcommand::Capacity, {"capacity_md.csv", "capacity_ld.csv"}},
        {Subcommand::Coverage, {"coverage.csv"}},
        {Subcommand::Ra, {"ra.csv"}},
        {Subcommand::PrintConfig, {}},
    };
    for (const auto &[sub, files] : expected)
    {
        CAPTURE(to_string(sub));
        const auto a = dir / (std::string(to_string(sub)) + "_a");
        const auto b = dir / (std::string(to_string(sub)) + "_b");
        REQUIRE(run_into(sub, cfg, a) == kExitOk);
        REQUIRE(run_into(sub, cfg, b) == kExitOk);
        const auto fa = csv_files(a);
        CHECK(fa == csv_files(b));
        CHECK(fa.count("resolved_config.ini") == 1);
        for (const auto &f : files)
        {
            CAPTURE(f);
            REQUIRE(fa.count(f) == 1);
            const auto &text = fa.at(f);
            CHECK(text.rfind(fmt::format("# moma {} config_hash=", to_string(sub)), 0) == 0);
            CHECK(text.find(" seed=20160501\n") != std::string::npos);
            // Header, column names, at least one row.
            CHECK(std::count(text.begin(), text.end(), '\n') >= 3);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("coverage rows carry the spreading gains")
{
    const auto dir = scratch("coverage");
    REQUIRE(run_into(Subcommand::Coverage, {}, dir) == kExitOk);
    const auto text = slurp(dir / "coverage.csv");
    CHECK(text.find("moma,MD,45,7.78151") != std::string::npos);
    CHECK(text.find("moma_bundled,LD,17,13.8021") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("the seed override changes outputs and headers")
{
    const auto dir = scratch("seed");
    const auto cfg = write_file(dir / "small.ini", kSmallConfig);
    REQUIRE(run_into(Subcommand::Tti, cfg, dir / "a") == kExitOk);
    REQUIRE(run_into(Subcommand::Tti, cfg, dir / "b", 7) == kExitOk);
    const auto a = slurp(dir / "a" / "tti_users.csv");
    const auto b = slurp(dir / "b" / "tti_users.csv");
    CHECK(a != b);
    CHECK(b.find(" seed=7\n") != std::string::npos);
    CHECK(resolve(ExperimentSpec{Subcommand::Tti, cfg, {}, 7, 3}).mc_runs == 3);
    fs::remove_all(dir);
}

TEST_CASE("invalid configurations exit with code 2")
{
    const auto dir = scratch("invalid");
    const auto partition = write_file(dir / "partition.ini", "[plan]\nn_md = 3\nn_ld = 2\n");
    const auto unknown = write_file(dir / "unknown.ini", "[plan]\nwhatever = 1\n");
    const auto ra = write_file(dir / "ra.ini", "[ra]\nscheme = contention_free\narrivals_ld = 40\n");
    const auto tiling = write_file(dir / "tiling.ini", "[plan]\nspreading_factor = 5\nn_md = 1\nn_ld = 4\nk_md = 1\nk_ld = 8\n");
    for (const auto &cfg : {partition, unknown, tiling})
        CHECK(run_into(Subcommand::Codes, cfg, dir / "out") == kExitInvalidConfig);
    CHECK(run_into(Subcommand::Ra, ra, dir / "out") == kExitInvalidConfig);

    std::ostringstream log;
    ExperimentSpec spec;
    spec.subcommand = Subcommand::Codes;
    spec.config_path = partition;
    spec.output_dir = dir / "out";
    run(spec, log);
    CHECK(log.str().find("partition") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("print-config without an output directory prints the resolved INI")
{
    std::ostringstream log;
    ExperimentSpec spec;
    CHECK(run(spec, log) == kExitOk);
    CHECK(log.str() == ExperimentConfig{}.to_ini());
}

TEST_CASE("the executable maps errors to exit codes")
{
    const char *bin = std::getenv("MOMA_BIN");
    if (bin == nullptr)
        return;
    const auto dir = scratch("bin");
    const auto bad = write_file(dir / "bad.ini", "[plan]\nn_md = 3\nn_ld = 2\n");
    auto status = [](const std::string &cmd) {
        const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    const std::string b = std::string("\"") + bin + "\"";
    CHECK(status(b + " coverage --out \"" + (dir / "ok").string() + "\"") == 0);
    CHECK(fs::exists(dir / "ok" / "coverage.csv"));
    CHECK(status(b + " codes --config \"" + bad.string() + "\" --out \"" + (dir / "x").string() + "\"") == 2);
    CHECK(status(b + " nonsense") == 2);
    CHECK(status(b + " print-config") == 0);
    fs::remove_all(dir);
}
