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

#include <string>
#include <string_view>
#include <vector>

namespace moma {

enum class BandwidthMode
{
    Wide1M4,   // 6 PRBs, 1.08 MHz occupied
    Narrow200k // 1 PRB, 180 kHz occupied
};

enum class UserClass
{
    MD,
    LD
};

std::string_view to_string(BandwidthMode mode);
std::string_view to_string(UserClass cls);
BandwidthMode parse_bandwidth_mode(std::string_view text);

inline constexpr int kSubcarriersPerPrb = 12;
inline constexpr int kSymbolsPerTti = 14;
inline constexpr int kResPerPrb = kSubcarriersPerPrb * kSymbolsPerTti; // 168
inline constexpr double kPrbBandwidthHz = 180e3;
inline constexpr double kSubcarrierSpacingHz = 15e3;
inline constexpr double kTtiDurationMs = 1.0;
inline constexpr int kBundleTtis = 4;
inline constexpr double kMaxTxPowerDbm = 23.0;

int prb_count(BandwidthMode mode);

struct SystemConfig
{
    int num_bs_antennas = 64;
    BandwidthMode bandwidth_mode = BandwidthMode::Wide1M4;
    double total_bandwidth_hz = 10e6;
    double hd_bandwidth_hz = 10e6 - 6 * kPrbBandwidthHz;
    double lmd_bandwidth_hz = 6 * kPrbBandwidthHz;
    double tx_power_dbm = 23.0;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 5.0;
    double carrier_freq_hz = 2e9;
    double subcarrier_spacing_hz = kSubcarrierSpacingHz;

    // Noise power collected by one resource element, in watts.
    double noise_variance_per_re() const;
};

// System config whose LMD band matches `mode` and whose HD band takes the rest.
SystemConfig make_system_config(BandwidthMode mode, double total_bandwidth_hz = 10e6);

// Spreading and overloading parameters for the MD and LD classes.
struct ClassPlan
{
    int spreading_factor = 6;
    int n_md = 2;
    int n_ld = 4;
    int k_md = 4;
    int k_ld = 16;
    double r_md_kbps = 45.0;
    double r_ld_kbps = 17.0;
    bool tti_bundling = false;

    int n_class(UserClass cls) const { return cls == UserClass::MD ? n_md : n_ld; }
    int k_class(UserClass cls) const { return cls == UserClass::MD ? k_md : k_ld; }
    double target_kbps(UserClass cls) const { return cls == UserClass::MD ? r_md_kbps : r_ld_kbps; }
};

struct Violation
{
    std::string name;
    std::string detail;
};

struct ValidationResult
{
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(std::string_view name) const;
    std::string to_string() const;
};

ValidationResult validate_plan(const SystemConfig &cfg, const ClassPlan &plan);

struct RePosition
{
    int subcarrier; // 0 .. prb_count*12 - 1
    int symbol;     // 0 .. bundle_ttis*14 - 1
};

// Resource grid seen by the LMD classes over one TTI, or one bundle of
// four TTIs. Resource elements are indexed PRB-locally: frequency first
// within a PRB, then OFDM symbol, then PRB, then TTI. A spread symbol
// occupies `spread_len` consecutive indices, which always lie inside a
// single PRB of a single TTI.
struct GridSpec
{
    int subcarriers_per_prb = kSubcarriersPerPrb;
    int symbols_per_tti = kSymbolsPerTti;
    int prb_count = 6;
    double tti_duration_ms = kTtiDurationMs;
    int res_per_prb = kResPerPrb;
    int spread_len = 6;
    int bundle_ttis = 1;

    int subcarriers() const { return prb_count * subcarriers_per_prb; }
    int symbols() const { return bundle_ttis * symbols_per_tti; }
    int res_per_bundle() const { return prb_count * res_per_prb * bundle_ttis; }
    int symbols_per_user() const { return res_per_bundle() / spread_len; }
    double symbols_per_ms() const { return symbols_per_user() / (bundle_ttis * tti_duration_ms); }

    RePosition position(int re) const;
    int index(int subcarrier, int symbol) const;
};

// Throws std::invalid_argument if the plan is invalid or the spread
// symbols do not tile the class band exactly.
GridSpec derive_grid(const SystemConfig &cfg, const ClassPlan &plan);

struct OverloadingFactors
{
    double md;
    double ld;

    bool md_overloaded() const { return md > 1.0; }
    bool ld_overloaded() const { return ld > 1.0; }
};

OverloadingFactors overloading_factors(const ClassPlan &plan);

double dbm_to_watt(double dbm);
double db_to_linear(double db);
double linear_to_db(double x);

} // namespace moma
