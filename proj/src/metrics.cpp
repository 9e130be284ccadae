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

#include "moma/metrics.hpp"

#include "moma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace moma {

double per_re_power_w(double tx_power_dbm, int subcarriers) { return dbm_to_watt(tx_power_dbm) / subcarriers; }

std::vector<UserState> drop_users(const LinkScenario &sc, const GridSpec &grid, int k_md, int k_ld, std::uint64_t seed,
                                  bool with_symbols)
{
    const int stretch = grid.bundle_ttis;
    const auto u = build_code_matrix(sc.code_kind, grid.spread_len);
    const auto part = partition(u, sc.plan.n_md * stretch);

    const auto &profile = tap_profile(sc.profile);
    const double energy = per_re_power_w(sc.system.tx_power_dbm, grid.subcarriers()) * grid.spread_len;

    Rng drng(derive_seed(seed, {stream::distance}));
    std::uniform_real_distribution<double> dist(sc.min_distance_m, sc.max_distance_m);

    std::vector<UserState> users;
    users.reserve(static_cast<std::size_t>(k_md + k_ld));
    int id = 0;
    for (auto cls : {UserClass::MD, UserClass::LD})
    {
        const int k = cls == UserClass::MD ? k_md : k_ld;
        if (k == 0)
            continue;
        const auto w = build_overloading(cls, sc.plan.n_class(cls) * stretch, k, sc.generation,
                                         derive_seed(seed, {stream::overloading, static_cast<std::uint64_t>(cls)}));
        for (int i = 0; i < k; ++i, ++id)
        {
            UserState us;
            us.id = id;
            us.user_class = cls;
            us.sequence_index = i;
            us.signature = signature_of(part, w, i);
            us.distance_m = dist(drng);
            us.channel = sample_channel(profile, sc.fading, sc.system.num_bs_antennas, grid,
                                        derive_seed(seed, {stream::channel, static_cast<std::uint64_t>(id)}));
            us.channel.large_scale_gain = pathloss(us.distance_m, sc.pathloss);
            us.symbol_energy = energy;
            if (with_symbols)
                us.symbols = random_symbols(grid.symbols_per_user(),
                                            derive_seed(seed, {stream::symbols, static_cast<std::uint64_t>(id)}));
            users.push_back(std::move(us));
        }
    }
    return users;
}

double outage_fraction(UserClass cls, int k, double r_target, const LinkScenario &sc, int mc_runs, std::uint64_t seed)
{
    if (k < 1 || mc_runs < 1)
        throw std::invalid_argument("outage_fraction needs k >= 1 and mc_runs >= 1");
    const auto grid = derive_grid(sc.system, sc.plan);
    ClassPlan plan = sc.plan;
    (cls == UserClass::MD ? plan.r_md_kbps : plan.r_ld_kbps) = r_target;
    const int k_md = cls == UserClass::MD ? k : sc.plan.k_md;
    const int k_ld = cls == UserClass::LD ? k : sc.plan.k_ld;
    const double noise = sc.noiseless ? 0.0 : sc.system.noise_variance_per_re();

    long long failures = 0;
    for (int t = 0; t < mc_runs; ++t)
    {
        const auto users = drop_users(sc, grid, k_md, k_ld, derive_seed(seed, {stream::trial, static_cast<std::uint64_t>(t)}));
        const auto gains = compute_gains(users, grid, noise);
        const auto rep = detect_tti(users, gains, plan, grid, sc.detection);
        for (const auto &r : rep.users)
            if (r.user_class == cls && r.rate_kbps < r_target)
                ++failures;
    }
    return static_cast<double>(failures) / (static_cast<double>(k) * mc_runs);
}

int served_users(UserClass cls, double r_target, const LinkScenario &sc, int mc_runs, double outage_eps,
                 std::uint64_t seed)
{
    if (!(r_target > 0.0))
        throw std::invalid_argument("served_users needs a positive target rate");
    int k_max = sc.k_max;
    if (sc.generation == OverloadingGeneration::Identity)
    {
        const auto grid = derive_grid(sc.system, sc.plan);
        k_max = std::min(k_max, sc.plan.n_class(cls) * grid.bundle_ttis);
    }

    std::map<int, bool> cache;
    auto feasible = [&](int k) {
        auto it = cache.find(k);
        if (it != cache.end())
            return it->second;
        // Each candidate load gets its own seed stream.
        const bool ok = outage_fraction(cls, k, r_target, sc, mc_runs, derive_seed(seed, {static_cast<std::uint64_t>(k)})) <=
                        outage_eps;
        cache.emplace(k, ok);
        return ok;
    };

    if (k_max < 1 || !feasible(1))
        return 0;
    int lo = 1, hi = 0;
    for (;;)
    {
        const int next = std::min(lo * 2, k_max);
        if (next == lo)
            return lo;
        if (feasible(next))
            lo = next;
        else
        {
            hi = next;
            break;
        }
    }
    while (hi - lo > 1)
    {
        const int mid = lo + (hi - lo) / 2;
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

int orthogonal_baseline(double r_target, const LinkScenario &sc, int mc_runs, double outage_eps, std::uint64_t seed)
{
    const auto grid = derive_grid(sc.system, sc.plan);
    const int n_sub = grid.prb_count;
    const int reps = grid.bundle_ttis; // a bundle repeats each symbol once per TTI
    const double p_re = per_re_power_w(sc.system.tx_power_dbm, kSubcarriersPerPrb);
    const double noise = sc.noiseless ? 0.0 : sc.system.noise_variance_per_re();
    const double symbols_per_ms = kResPerPrb / kTtiDurationMs / reps;
    const auto &profile = tap_profile(sc.profile);

    Rng drng(derive_seed(seed, {stream::distance}));
    std::uniform_real_distribution<double> dist(sc.min_distance_m, sc.max_distance_m);

    long long failures = 0;
    for (int t = 0; t < mc_runs; ++t)
        for (int u = 0; u < n_sub; ++u)
        {
            const double beta = pathloss(dist(drng), sc.pathloss);
            const auto h = sample_channel(profile, sc.fading, sc.system.num_bs_antennas, grid,
                                          derive_seed(seed, {stream::trial, static_cast<std::uint64_t>(t),
                                                             static_cast<std::uint64_t>(u)}));
            // Symbol on RE (sc, sym) of the user's PRB, repeated in every TTI
            // of the bundle: G = sqrt(E beta)/R sum ||h||^2, noise = s2/R sum ||h||^2.
            double signal = 0.0, noise_power = 0.0;
            const double e = p_re * reps;
            for (int sym = 0; sym < kSymbolsPerTti; ++sym)
                for (int f = u * kSubcarriersPerPrb; f < (u + 1) * kSubcarriersPerPrb; ++f)
                {
                    double acc = 0.0;
                    for (int r = 0; r < reps; ++r)
                        for (const auto &x : h.antenna_vector(f, r * kSymbolsPerTti + sym))
                            acc += std::norm(x);
                    acc /= reps;
                    signal += e * beta * acc * acc;
                    noise_power += noise * acc;
                }
            const double snr = noise_power <= signal / kSinrCap ? kSinrCap : signal / noise_power;
            const double rate = symbols_per_ms * std::min(std::log2(1.0 + snr), kMaxBitsPerSymbol);
            if (rate < r_target)
                ++failures;
        }
    const double outage = static_cast<double>(failures) / (static_cast<double>(n_sub) * mc_runs);
    return outage <= outage_eps ? n_sub : 0;
}

LinkBudget mcl(const LinkBudgetInputs &in)
{
    if (!(in.bandwidth_hz > 0.0))
        throw std::invalid_argument("mcl needs a positive bandwidth");
    LinkBudget b{};
    b.tx_power_dbm = in.tx_power_dbm;
    b.occupied_bandwidth_hz = in.bandwidth_hz;
    b.noise_figure_db = in.noise_figure_db;
    b.required_snr_db = in.required_snr_db;
    b.processing_gain_db = in.processing_gain_db;
    b.sensitivity_dbm =
        -174.0 + linear_to_db(in.bandwidth_hz) + in.noise_figure_db + in.required_snr_db - in.processing_gain_db;
    b.mcl_db = in.tx_power_dbm - b.sensitivity_dbm;
    return b;
}

double coverage_gain_db(int n, bool bundling)
{
    if (n < 1)
        throw std::invalid_argument("coverage_gain_db needs N >= 1");
    return linear_to_db(bundling ? 4.0 * n : static_cast<double>(n));
}

double required_snr_db(double rate_kbps, double symbols_per_ms)
{
    const double bits = rate_kbps / symbols_per_ms;
    if (!(bits > 0.0) || bits > kMaxBitsPerSymbol)
        throw std::invalid_argument("target rate outside the capped rate map");
    return linear_to_db(std::exp2(bits) - 1.0);
}

std::vector<double> rate_grid(double r_min, double r_max, int steps)
{
    if (steps < 1 || !(r_min > 0.0) || r_max < r_min)
        throw std::invalid_argument("invalid rate range");
    std::vector<double> r;
    for (int i = 0; i < steps; ++i)
        r.push_back(steps == 1 ? r_min : r_min + (r_max - r_min) * i / (steps - 1));
    return r;
}

CapacityCurve capacity_curve(UserClass cls, double r_min, double r_max, int steps, const LinkScenario &sc,
                             int mc_runs, double outage_eps, std::uint64_t seed)
{
    CapacityCurve c;
    c.user_class = cls;
    c.target_rates = rate_grid(r_min, r_max, steps);
    c.outage_eps = outage_eps;
    c.mc_runs = mc_runs;
    for (std::size_t i = 0; i < c.target_rates.size(); ++i)
    {
        // Same seed at every rate so the sweep sees common random numbers.
        c.served_counts.push_back(served_users(cls, c.target_rates[i], sc, mc_runs, outage_eps, seed));
        c.baseline_counts.push_back(orthogonal_baseline(c.target_rates[i], sc, mc_runs, outage_eps, seed));
        if (i > 0 && c.served_counts[i] > c.served_counts[i - 1] + 1)
            c.isotonic_violation = true;
    }
    return c;
}

} // namespace moma
