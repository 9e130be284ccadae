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

#include "moma/channel.hpp"
#include "moma/codes.hpp"
#include "moma/config.hpp"
#include "moma/phy.hpp"

#include <cstdint>
#include <vector>

namespace moma {

// Everything needed to drop users in a cell and run one TTI of detection.
struct LinkScenario
{
    SystemConfig system;
    ClassPlan plan;
    CodeKind code_kind = CodeKind::Dft;
    OverloadingGeneration generation = OverloadingGeneration::RandomSphere;
    ProfileName profile = ProfileName::Eva;
    FadingProcess fading;
    PathlossModel pathloss;
    double min_distance_m = 25.0;
    double max_distance_m = 100.0;
    bool noiseless = false;
    DetectionOptions detection;
    int k_max = 1024; // search ceiling for served_users
};

// Per-RE transmit power of a user spreading `tx_power_dbm` evenly over
// `subcarriers` subcarriers.
double per_re_power_w(double tx_power_dbm, int subcarriers);

// k_md MD users followed by k_ld LD users, each on its own overloading
// column, at distances uniform in [min, max]. Symbols are left empty
// unless `with_symbols` is set.
std::vector<UserState> drop_users(const LinkScenario &sc, const GridSpec &grid, int k_md, int k_ld, std::uint64_t seed,
                                  bool with_symbols = false);

// Fraction of user-trials of class `cls` whose rate falls short of
// `r_target` with `k` users of that class active.
double outage_fraction(UserClass cls, int k, double r_target, const LinkScenario &sc, int mc_runs, std::uint64_t seed);

// Largest K whose outage stays within outage_eps (doubling, then bisection).
int served_users(UserClass cls, double r_target, const LinkScenario &sc, int mc_runs, double outage_eps,
                 std::uint64_t seed);

// Orthogonal access: one PRB per user, no spreading. Returns the number of
// PRB sub-channels if a dedicated sub-channel meets r_target within
// outage_eps, otherwise 0.
int orthogonal_baseline(double r_target, const LinkScenario &sc, int mc_runs, double outage_eps, std::uint64_t seed);

struct LinkBudgetInputs
{
    double tx_power_dbm = 23.0;
    double bandwidth_hz = kPrbBandwidthHz;
    double noise_figure_db = 5.0;
    double required_snr_db = 0.0;
    double processing_gain_db = 0.0;
};

struct LinkBudget
{
    double tx_power_dbm;
    double occupied_bandwidth_hz;
    double noise_figure_db;
    double required_snr_db;
    double processing_gain_db;
    double sensitivity_dbm;
    double mcl_db;
};

LinkBudget mcl(const LinkBudgetInputs &in);

// MCL increase from N-chip spreading, and 4N-chip spreading with bundling.
double coverage_gain_db(int n, bool bundling);

// SNR at which the capped Shannon map reaches `rate_kbps` on `symbols_per_ms`.
double required_snr_db(double rate_kbps, double symbols_per_ms = kResPerPrb / kTtiDurationMs);

struct CapacityCurve
{
    UserClass user_class = UserClass::MD;
    std::vector<double> target_rates;
    std::vector<int> served_counts;
    std::vector<int> baseline_counts;
    double outage_eps = 0.1;
    int mc_runs = 0;
    bool isotonic_violation = false; // a count rose by more than one step
};

std::vector<double> rate_grid(double r_min, double r_max, int steps);

CapacityCurve capacity_curve(UserClass cls, double r_min, double r_max, int steps, const LinkScenario &sc,
                             int mc_runs, double outage_eps, std::uint64_t seed);

} // namespace moma
