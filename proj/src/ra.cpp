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

#include "moma/ra.hpp"

#include "moma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace moma {

std::string_view to_string(RaScheme scheme)
{
    switch (scheme)
    {
    case RaScheme::ContentionFree:
        return "contention_free";
    case RaScheme::ContentionBased:
        return "contention_based";
    case RaScheme::Hybrid:
        return "hybrid";
    }
    return "?";
}

RaScheme parse_ra_scheme(std::string_view text)
{
    for (auto s : {RaScheme::ContentionFree, RaScheme::ContentionBased, RaScheme::Hybrid})
        if (text == to_string(s))
            return s;
    throw std::invalid_argument("unknown random access scheme '" + std::string(text) + "'");
}

namespace {

bool contention_free(RaScheme scheme, UserClass cls)
{
    return scheme == RaScheme::ContentionFree || (scheme == RaScheme::Hybrid && cls == UserClass::MD);
}

RaClassOutcome run_class(bool scheduled, int arrivals, int pool, Rng &rng)
{
    RaClassOutcome out;
    out.picks.resize(static_cast<std::size_t>(arrivals));
    if (scheduled)
    {
        for (int i = 0; i < arrivals; ++i)
            out.picks[static_cast<std::size_t>(i)] = i;
        out.clean_users = arrivals;
        return out;
    }
    std::uniform_int_distribution<int> pick(0, pool - 1);
    std::vector<int> load(static_cast<std::size_t>(pool), 0);
    for (auto &p : out.picks)
    {
        p = pick(rng);
        ++load[static_cast<std::size_t>(p)];
    }
    for (int l : load)
        if (l >= 2)
        {
            ++out.collision_events;
            out.collided_users += l;
        }
    out.clean_users = arrivals - out.collided_users;
    return out;
}

} // namespace

void validate(const RaConfig &cfg)
{
    if (cfg.pool_md < 1 || cfg.pool_ld < 1)
        throw std::invalid_argument("random access pools must hold at least one sequence");
    if (cfg.arrivals_md < 0 || cfg.arrivals_ld < 0)
        throw std::invalid_argument("arrival counts must be non-negative");
    if (contention_free(cfg.scheme, UserClass::MD) && cfg.arrivals_md > cfg.pool_md)
        throw std::invalid_argument("contention-free MD access with more arrivals than sequences");
    if (contention_free(cfg.scheme, UserClass::LD) && cfg.arrivals_ld > cfg.pool_ld)
        throw std::invalid_argument("contention-free LD access with more arrivals than sequences");
}

RaOutcome simulate_round(const RaConfig &cfg)
{
    validate(cfg);
    Rng rng(derive_seed(cfg.seed, {stream::random_access}));
    RaOutcome out;
    out.md = run_class(contention_free(cfg.scheme, UserClass::MD), cfg.arrivals_md, cfg.pool_md, rng);
    out.ld = run_class(contention_free(cfg.scheme, UserClass::LD), cfg.arrivals_ld, cfg.pool_ld, rng);
    const auto oh = overhead_report(cfg);
    out.grants_sent = oh.grants_sent;
    out.broadcasts_sent = oh.broadcasts_sent;
    return out;
}

double collision_prob(int k, int s)
{
    if (k < 0 || s < 1)
        throw std::invalid_argument("collision_prob needs K >= 0 and S >= 1");
    if (k > s)
        return 1.0;
    double clear = 1.0;
    for (int i = 0; i < k; ++i)
        clear *= 1.0 - static_cast<double>(i) / s;
    return 1.0 - clear;
}

CollisionCount collision_count_oracle(int k, int s)
{
    if (k < 0 || s < 1)
        throw std::invalid_argument("collision oracle needs K >= 0 and S >= 1");
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i)
    {
        total *= static_cast<std::uint64_t>(s);
        if (total > 10'000'000ULL)
            throw std::invalid_argument("collision oracle budget exceeded (S^K > 1e7)");
    }

    std::vector<int> picks(static_cast<std::size_t>(k), 0);
    std::vector<int> seen(static_cast<std::size_t>(s), 0);
    std::uint64_t clean = 0;
    for (std::uint64_t n = 0; n < total; ++n)
    {
        // picks <- base-S digits of n
        std::uint64_t v = n;
        for (auto &p : picks)
        {
            p = static_cast<int>(v % static_cast<std::uint64_t>(s));
            v /= static_cast<std::uint64_t>(s);
        }
        std::fill(seen.begin(), seen.end(), 0);
        bool collide = false;
        for (int p : picks)
            if (seen[static_cast<std::size_t>(p)]++)
            {
                collide = true;
                break;
            }
        if (!collide)
            ++clean;
    }
    return {clean, total};
}

double collision_prob_oracle(int k, int s)
{
    const auto c = collision_count_oracle(k, s);
    return static_cast<double>(c.total - c.collision_free) / static_cast<double>(c.total);
}

OverheadReport overhead_report(const RaConfig &cfg)
{
    OverheadReport r;
    r.broadcasts_sent = 1;
    if (contention_free(cfg.scheme, UserClass::MD))
        r.grants_sent += cfg.arrivals_md;
    if (contention_free(cfg.scheme, UserClass::LD))
        r.grants_sent += cfg.arrivals_ld;
    return r;
}

CollisionImpact collision_impact_bridge(const RaOutcome &outcome, int pool_ld, const LinkScenario &sc,
                                        std::uint64_t seed)
{
    const auto &ld_picks = outcome.ld.picks;
    const int k_md = static_cast<int>(outcome.md.picks.size());
    const int k_ld = static_cast<int>(ld_picks.size());
    if (k_ld > pool_ld)
        throw std::invalid_argument("collision bridge needs pool_ld >= LD arrivals to build the collision-free case");

    const auto grid = derive_grid(sc.system, sc.plan);
    const auto part = partition(build_code_matrix(sc.code_kind, grid.spread_len), sc.plan.n_md * grid.bundle_ttis);
    const auto w_ld = build_overloading(UserClass::LD, sc.plan.n_ld * grid.bundle_ttis, pool_ld, sc.generation,
                                        derive_seed(seed, {stream::overloading, 99}));

    // Collision-free reassignment: the first user on each column keeps it,
    // the others move to columns nobody picked.
    std::vector<int> clean_picks(ld_picks);
    {
        std::vector<char> used(static_cast<std::size_t>(pool_ld), 0);
        std::vector<std::size_t> movers;
        for (std::size_t i = 0; i < clean_picks.size(); ++i)
        {
            auto &u = used[static_cast<std::size_t>(clean_picks[i])];
            if (u)
                movers.push_back(i);
            u = 1;
        }
        int next_free = 0;
        for (auto i : movers)
        {
            while (used[static_cast<std::size_t>(next_free)])
                ++next_free;
            clean_picks[i] = next_free;
            used[static_cast<std::size_t>(next_free)] = 1;
        }
    }

    auto users = drop_users(sc, grid, k_md, k_ld, seed);
    const double noise = sc.noiseless ? 0.0 : sc.system.noise_variance_per_re();
    auto run = [&](const std::vector<int> &picks) {
        for (int i = 0; i < k_ld; ++i)
        {
            auto &u = users[static_cast<std::size_t>(k_md + i)];
            u.sequence_index = picks[static_cast<std::size_t>(i)];
            u.signature = signature_of(part, w_ld, u.sequence_index);
        }
        return detect_tti(users, compute_gains(users, grid, noise), sc.plan, grid, sc.detection);
    };
    const auto with = run(ld_picks);
    const auto without = run(clean_picks);

    CollisionImpact impact;
    for (int k = 0; k < k_md; ++k)
    {
        const double a = with.users[static_cast<std::size_t>(k)].sinr;
        const double b = without.users[static_cast<std::size_t>(k)].sinr;
        impact.md_sinr_delta_db.push_back(linear_to_db(a) - linear_to_db(b));
        impact.md_sinr_relative.push_back(std::abs(a - b) / b);
    }
    for (int i = 0; i < k_ld; ++i)
    {
        const auto &r = with.users[static_cast<std::size_t>(k_md + i)];
        if (r.collided)
        {
            ++impact.ld_collided;
            if (r.served)
                ++impact.ld_collided_served;
        }
    }
    return impact;
}

} // namespace moma
