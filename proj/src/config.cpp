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

#include "moma/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace moma {

std::string_view to_string(BandwidthMode mode)
{
    return mode == BandwidthMode::Wide1M4 ? "wide_1m4" : "narrow_200k";
}

std::string_view to_string(UserClass cls) { return cls == UserClass::MD ? "MD" : "LD"; }

BandwidthMode parse_bandwidth_mode(std::string_view text)
{
    if (text == "wide_1m4")
        return BandwidthMode::Wide1M4;
    if (text == "narrow_200k")
        return BandwidthMode::Narrow200k;
    throw std::invalid_argument("unknown bandwidth mode '" + std::string(text) + "'");
}

int prb_count(BandwidthMode mode) { return mode == BandwidthMode::Wide1M4 ? 6 : 1; }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

double SystemConfig::noise_variance_per_re() const
{
    return dbm_to_watt(noise_psd_dbm_hz + linear_to_db(subcarrier_spacing_hz) + noise_figure_db);
}

SystemConfig make_system_config(BandwidthMode mode, double total_bandwidth_hz)
{
    SystemConfig cfg;
    cfg.bandwidth_mode = mode;
    cfg.total_bandwidth_hz = total_bandwidth_hz;
    cfg.lmd_bandwidth_hz = prb_count(mode) * kPrbBandwidthHz;
    cfg.hd_bandwidth_hz = total_bandwidth_hz - cfg.lmd_bandwidth_hz;
    return cfg;
}

bool ValidationResult::has(std::string_view name) const
{
    for (const auto &v : violations)
        if (v.name == name)
            return true;
    return false;
}

std::string ValidationResult::to_string() const
{
    if (ok())
        return "OK";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i)
    {
        if (i)
            os << "; ";
        os << violations[i].name << ": " << violations[i].detail;
    }
    return os.str();
}

ValidationResult validate_plan(const SystemConfig &cfg, const ClassPlan &plan)
{
    ValidationResult r;
    auto add = [&](std::string name, std::string detail) { r.violations.push_back({std::move(name), std::move(detail)}); };

    if (cfg.num_bs_antennas < 1)
        add("antennas", "num_bs_antennas must be at least 1");
    if (cfg.tx_power_dbm > kMaxTxPowerDbm)
        add("tx power cap", "tx_power_dbm exceeds 23 dBm");
    if (cfg.subcarrier_spacing_hz != kSubcarrierSpacingHz)
        add("subcarrier spacing", "only 15 kHz numerology is supported");
    if (cfg.hd_bandwidth_hz < 0.0 || cfg.hd_bandwidth_hz + cfg.lmd_bandwidth_hz != cfg.total_bandwidth_hz)
        add("bandwidth split", "hd_bandwidth + lmd_bandwidth must equal total_bandwidth");
    if (std::abs(cfg.lmd_bandwidth_hz - prb_count(cfg.bandwidth_mode) * kPrbBandwidthHz) > 1e-6)
        add("lmd bandwidth", "lmd_bandwidth does not match the PRB count of the bandwidth mode");

    if (plan.spreading_factor < 1 || plan.n_md < 1 || plan.n_ld < 1 ||
        plan.n_md + plan.n_ld != plan.spreading_factor)
        add("partition", "n_md + n_ld must equal spreading_factor with both parts positive");
    if (plan.k_md < 1 || plan.k_ld < 1)
        add("user counts", "k_md and k_ld must be positive");
    // K_LD/N_LD > K_MD/N_MD, compared exactly in integers.
    else if (plan.n_md >= 1 && plan.n_ld >= 1 &&
             static_cast<long long>(plan.k_ld) * plan.n_md <= static_cast<long long>(plan.k_md) * plan.n_ld)
        add("class ordering", "k_ld/n_ld must strictly exceed k_md/n_md");
    if (!(plan.r_md_kbps > plan.r_ld_kbps && plan.r_ld_kbps > 0.0))
        add("rate ordering", "targets must satisfy r_md > r_ld > 0");
    return r;
}

RePosition GridSpec::position(int re) const
{
    const int sc = re % subcarriers_per_prb;
    int rest = re / subcarriers_per_prb;
    const int sym = rest % symbols_per_tti;
    rest /= symbols_per_tti;
    const int prb = rest % prb_count;
    const int tti = rest / prb_count;
    return {prb * subcarriers_per_prb + sc, tti * symbols_per_tti + sym};
}

int GridSpec::index(int subcarrier, int symbol) const
{
    const int prb = subcarrier / subcarriers_per_prb;
    const int sc = subcarrier % subcarriers_per_prb;
    const int tti = symbol / symbols_per_tti;
    const int sym = symbol % symbols_per_tti;
    return ((tti * prb_count + prb) * symbols_per_tti + sym) * subcarriers_per_prb + sc;
}

GridSpec derive_grid(const SystemConfig &cfg, const ClassPlan &plan)
{
    const auto v = validate_plan(cfg, plan);
    if (!v.ok())
        throw std::invalid_argument("invalid plan: " + v.to_string());

    GridSpec g;
    g.prb_count = prb_count(cfg.bandwidth_mode);
    g.bundle_ttis = plan.tti_bundling ? kBundleTtis : 1;
    g.spread_len = plan.tti_bundling ? kBundleTtis * plan.spreading_factor : plan.spreading_factor;
    if (g.res_per_prb % g.spread_len != 0)
        throw std::invalid_argument("spread length " + std::to_string(g.spread_len) +
                                    " does not tile a 168-RE resource block");
    return g;
}

OverloadingFactors overloading_factors(const ClassPlan &plan)
{
    const auto v = validate_plan(SystemConfig{}, plan);
    if (!v.ok())
        throw std::invalid_argument("invalid plan: " + v.to_string());
    return {static_cast<double>(plan.k_md) / plan.n_md, static_cast<double>(plan.k_ld) / plan.n_ld};
}

} // namespace moma
