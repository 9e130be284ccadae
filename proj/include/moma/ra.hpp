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

#include "moma/metrics.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace moma {

enum class RaScheme
{
    ContentionFree,
    ContentionBased,
    Hybrid // contention-free for MD, contention-based for LD
};

std::string_view to_string(RaScheme scheme);
RaScheme parse_ra_scheme(std::string_view text);

struct RaConfig
{
    RaScheme scheme = RaScheme::Hybrid;
    int pool_md = 4;
    int pool_ld = 16;
    int arrivals_md = 3;
    int arrivals_ld = 10;
    std::uint64_t seed = 1;
};

struct RaClassOutcome
{
    int collided_users = 0;
    int clean_users = 0;
    int collision_events = 0;   // sequences picked by two or more users
    std::vector<int> picks;     // overloading column chosen by each arrival
};

struct RaOutcome
{
    RaClassOutcome md;
    RaClassOutcome ld;
    int grants_sent = 0;
    int broadcasts_sent = 0;

    const RaClassOutcome &of(UserClass cls) const { return cls == UserClass::MD ? md : ld; }
};

// Throws std::invalid_argument when the config breaks its invariants,
// including contention-free access with more arrivals than sequences.
void validate(const RaConfig &cfg);

RaOutcome simulate_round(const RaConfig &cfg);

// Probability that at least two of K uniform picks among S sequences coincide.
double collision_prob(int k, int s);

// Exact count of collision-free pick vectors, S*(S-1)*...*(S-K+1), and
// S^K. Both are exact for S^K below 2^63.
struct CollisionCount
{
    std::uint64_t collision_free;
    std::uint64_t total;
};

// Enumerates every pick vector. Throws std::invalid_argument if S^K > 1e7.
CollisionCount collision_count_oracle(int k, int s);
double collision_prob_oracle(int k, int s);

struct OverheadReport
{
    int grants_sent = 0;
    int broadcasts_sent = 0;
};

// Message tally model: one grant per contention-free arrival plus one
// broadcast of (N_MD, N_LD) per round.
OverheadReport overhead_report(const RaConfig &cfg);

struct CollisionImpact
{
    std::vector<double> md_sinr_delta_db;    // with collision minus without, per MD user
    std::vector<double> md_sinr_relative;    // |delta| / SINR without collision
    int ld_collided = 0;
    int ld_collided_served = 0;              // must stay 0
};

// Runs one TTI twice on the same users and channels: once with the LD
// overloading columns picked in `outcome`, once with colliding LD users
// moved to unused columns. `pool_ld` is the LD overloading pool size.
CollisionImpact collision_impact_bridge(const RaOutcome &outcome, int pool_ld, const LinkScenario &sc,
                                        std::uint64_t seed);

} // namespace moma
