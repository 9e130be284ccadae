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
#include "moma/ra.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moma {

// Fully-resolved experiment parameters. The on-disk form is an INI file
// with one scalar per key and one section per module:
//
//   [system]  [plan]  [codes]  [channel]  [phy]  [metrics]  [hardening]  [ra]  [run]
//
// Keys left out keep their defaults; unknown keys are rejected.
struct ExperimentConfig
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

    bool cancel_md_before_ld = true;
    bool noiseless = false;

    double outage_eps = 0.1;
    int mc_runs = 100;
    double md_rate_min_kbps = 30.0;
    double md_rate_max_kbps = 60.0;
    double ld_rate_min_kbps = 10.0;
    double ld_rate_max_kbps = 25.0;
    int rate_steps = 4;
    int k_max = 1024;

    ProfileName hardening_profile = ProfileName::Etu;
    std::vector<int> hardening_antennas{1, 4, 16, 64, 100};
    int hardening_realizations = 500;

    RaConfig ra;
    int ra_rounds = 100000;

    std::uint64_t master_seed = 20160501;

    LinkScenario scenario() const;
    std::string to_ini() const;
};

ExperimentConfig parse_config(std::string_view ini_text);
ExperimentConfig load_config(const std::filesystem::path &path);

// FNV-1a 64 of to_ini(); identifies the resolved configuration.
std::uint64_t config_hash(const ExperimentConfig &cfg);

} // namespace moma
