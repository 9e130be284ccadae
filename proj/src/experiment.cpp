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

#include "moma/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace moma {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

template <class T> T parse_number(const std::string &key, std::string_view text)
{
    T v{};
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("config key '" + key + "': cannot read '" + std::string(text) + "' as a number");
    return v;
}

bool parse_bool(const std::string &key, std::string_view text)
{
    if (text == "true" || text == "1")
        return true;
    if (text == "false" || text == "0")
        return false;
    throw std::invalid_argument("config key '" + key + "': expected true or false, got '" + std::string(text) + "'");
}

std::vector<int> parse_int_list(const std::string &key, std::string_view text)
{
    std::vector<int> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ','))
        out.push_back(parse_number<int>(key, trim(item)));
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "': empty list");
    return out;
}

// One INI key: how to print it from a config and how to store it back.
struct Field
{
    std::string section;
    std::string name;
    std::function<std::string(const ExperimentConfig &)> get;
    std::function<void(ExperimentConfig &, const std::string &key, std::string_view)> set;
};

template <class T> std::string num(T v) { return fmt::format("{}", v); }

#define MOMA_NUM(sec, key, member, T)                                                                                  \
    Field                                                                                                              \
    {                                                                                                                  \
        sec, key, [](const ExperimentConfig &c) { return num(c.member); },                                             \
            [](ExperimentConfig &c, const std::string &k, std::string_view v) { c.member = parse_number<T>(k, v); }    \
    }

#define MOMA_BOOL(sec, key, member)                                                                                    \
    Field                                                                                                              \
    {                                                                                                                  \
        sec, key, [](const ExperimentConfig &c) { return std::string(c.member ? "true" : "false"); },                 \
            [](ExperimentConfig &c, const std::string &k, std::string_view v) { c.member = parse_bool(k, v); }         \
    }

#define MOMA_ENUM(sec, key, member, parser)                                                                            \
    Field                                                                                                              \
    {                                                                                                                  \
        sec, key, [](const ExperimentConfig &c) { return std::string(to_string(c.member)); },                         \
            [](ExperimentConfig &c, const std::string &, std::string_view v) { c.member = parser(v); }                 \
    }

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = {
        MOMA_NUM("system", "num_bs_antennas", system.num_bs_antennas, int),
        MOMA_ENUM("system", "bandwidth_mode", system.bandwidth_mode, parse_bandwidth_mode),
        MOMA_NUM("system", "total_bandwidth_hz", system.total_bandwidth_hz, double),
        MOMA_NUM("system", "hd_bandwidth_hz", system.hd_bandwidth_hz, double),
        MOMA_NUM("system", "lmd_bandwidth_hz", system.lmd_bandwidth_hz, double),
        MOMA_NUM("system", "tx_power_dbm", system.tx_power_dbm, double),
        MOMA_NUM("system", "noise_psd_dbm_hz", system.noise_psd_dbm_hz, double),
        MOMA_NUM("system", "noise_figure_db", system.noise_figure_db, double),
        MOMA_NUM("system", "carrier_freq_hz", system.carrier_freq_hz, double),
        MOMA_NUM("system", "subcarrier_spacing_hz", system.subcarrier_spacing_hz, double),

        MOMA_NUM("plan", "spreading_factor", plan.spreading_factor, int),
        MOMA_NUM("plan", "n_md", plan.n_md, int),
        MOMA_NUM("plan", "n_ld", plan.n_ld, int),
        MOMA_NUM("plan", "k_md", plan.k_md, int),
        MOMA_NUM("plan", "k_ld", plan.k_ld, int),
        MOMA_NUM("plan", "r_md_kbps", plan.r_md_kbps, double),
        MOMA_NUM("plan", "r_ld_kbps", plan.r_ld_kbps, double),
        MOMA_BOOL("plan", "tti_bundling", plan.tti_bundling),

        MOMA_ENUM("codes", "code_kind", code_kind, parse_code_kind),
        MOMA_ENUM("codes", "overloading", generation, parse_overloading_generation),

        MOMA_ENUM("channel", "profile", profile, parse_profile_name),
        MOMA_ENUM("channel", "evolution", fading.evolution, parse_evolution),
        MOMA_NUM("channel", "doppler_hz", fading.doppler_hz, double),
        MOMA_ENUM("channel", "pathloss", pathloss.kind, parse_pathloss_kind),
        MOMA_NUM("channel", "pathloss_pl0_db", pathloss.pl0_db, double),
        MOMA_NUM("channel", "pathloss_exponent", pathloss.exponent, double),
        MOMA_NUM("channel", "min_distance_m", min_distance_m, double),
        MOMA_NUM("channel", "max_distance_m", max_distance_m, double),

        MOMA_BOOL("phy", "cancel_md_before_ld", cancel_md_before_ld),
        MOMA_BOOL("phy", "noiseless", noiseless),

        MOMA_NUM("metrics", "outage_eps", outage_eps, double),
        MOMA_NUM("metrics", "mc_runs", mc_runs, int),
        MOMA_NUM("metrics", "md_rate_min_kbps", md_rate_min_kbps, double),
        MOMA_NUM("metrics", "md_rate_max_kbps", md_rate_max_kbps, double),
        MOMA_NUM("metrics", "ld_rate_min_kbps", ld_rate_min_kbps, double),
        MOMA_NUM("metrics", "ld_rate_max_kbps", ld_rate_max_kbps, double),
        MOMA_NUM("metrics", "rate_steps", rate_steps, int),
        MOMA_NUM("metrics", "k_max", k_max, int),

        MOMA_ENUM("hardening", "profile", hardening_profile, parse_profile_name),
        Field{"hardening", "antennas",
              [](const ExperimentConfig &c) { return fmt::format("{}", fmt::join(c.hardening_antennas, ",")); },
              [](ExperimentConfig &c, const std::string &k, std::string_view v) {
                  c.hardening_antennas = parse_int_list(k, v);
              }},
        MOMA_NUM("hardening", "realizations", hardening_realizations, int),

        MOMA_ENUM("ra", "scheme", ra.scheme, parse_ra_scheme),
        MOMA_NUM("ra", "pool_md", ra.pool_md, int),
        MOMA_NUM("ra", "pool_ld", ra.pool_ld, int),
        MOMA_NUM("ra", "arrivals_md", ra.arrivals_md, int),
        MOMA_NUM("ra", "arrivals_ld", ra.arrivals_ld, int),
        MOMA_NUM("ra", "rounds", ra_rounds, int),

        MOMA_NUM("run", "master_seed", master_seed, std::uint64_t),
    };
    return table;
}

#undef MOMA_NUM
#undef MOMA_BOOL
#undef MOMA_ENUM

} // namespace

LinkScenario ExperimentConfig::scenario() const
{
    LinkScenario sc;
    sc.system = system;
    sc.plan = plan;
    sc.code_kind = code_kind;
    sc.generation = generation;
    sc.profile = profile;
    sc.fading = fading;
    sc.pathloss = pathloss;
    sc.pathloss.carrier_freq_hz = system.carrier_freq_hz;
    sc.min_distance_m = min_distance_m;
    sc.max_distance_m = max_distance_m;
    sc.noiseless = noiseless;
    sc.detection.cancel_md_before_ld = cancel_md_before_ld;
    sc.k_max = k_max;
    return sc;
}

std::string ExperimentConfig::to_ini() const
{
    std::string out;
    std::string section;
    for (const auto &f : fields())
    {
        if (f.section != section)
        {
            if (!section.empty())
                out += '\n';
            section = f.section;
            out += '[' + section + "]\n";
        }
        out += f.name + " = " + f.get(*this) + '\n';
    }
    return out;
}

ExperimentConfig parse_config(std::string_view ini_text)
{
    boost::property_tree::ptree tree;
    {
        std::istringstream in{std::string(ini_text)};
        try
        {
            boost::property_tree::ini_parser::read_ini(in, tree);
        }
        catch (const boost::property_tree::ini_parser_error &e)
        {
            throw std::invalid_argument(std::string("malformed config: ") + e.message() + " at line " +
                                        std::to_string(e.line()));
        }
    }

    ExperimentConfig cfg;
    std::set<std::string> seen;
    for (const auto &[section, keys] : tree)
    {
        if (keys.empty() && !keys.data().empty())
            throw std::invalid_argument("config key '" + section + "' sits outside any section");
        for (const auto &[name, value] : keys)
        {
            const std::string key = section + "." + name;
            const Field *match = nullptr;
            for (const auto &f : fields())
                if (f.section == section && f.name == name)
                    match = &f;
            if (!match)
                throw std::invalid_argument("unknown config key '" + key + "'");
            match->set(cfg, key, trim(value.data()));
            seen.insert(key);
        }
    }

    // An LMD/HD split that is not spelled out follows the bandwidth mode.
    if (!seen.count("system.lmd_bandwidth_hz"))
        cfg.system.lmd_bandwidth_hz = prb_count(cfg.system.bandwidth_mode) * kPrbBandwidthHz;
    if (!seen.count("system.hd_bandwidth_hz"))
        cfg.system.hd_bandwidth_hz = cfg.system.total_bandwidth_hz - cfg.system.lmd_bandwidth_hz;

    if (cfg.mc_runs < 1)
        throw std::invalid_argument("metrics.mc_runs must be at least 1");
    if (!(cfg.outage_eps > 0.0 && cfg.outage_eps < 1.0))
        throw std::invalid_argument("metrics.outage_eps must lie in (0, 1)");
    if (cfg.hardening_realizations < 1)
        throw std::invalid_argument("hardening.realizations must be at least 1");
    for (int m : cfg.hardening_antennas)
        if (m < 1)
            throw std::invalid_argument("hardening.antennas entries must be positive");
    if (cfg.ra_rounds < 1)
        throw std::invalid_argument("ra.rounds must be at least 1");
    if (!(cfg.min_distance_m > 0.0) || cfg.max_distance_m < cfg.min_distance_m)
        throw std::invalid_argument("channel distances must satisfy 0 < min <= max");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::uint64_t config_hash(const ExperimentConfig &cfg)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : cfg.to_ini())
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace moma
