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
#include "moma/config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace moma {

// SINR reports are capped at 60 dB so they stay finite without noise.
inline constexpr double kSinrCap = 1e6;
// Rate map ceiling (64-QAM).
inline constexpr double kMaxBitsPerSymbol = 6.0;

struct UserState
{
    int id = 0;
    UserClass user_class = UserClass::MD;
    // Overloading column the user transmits on; users of one class with the
    // same non-negative index share a signature and collide.
    int sequence_index = -1;
    Eigen::VectorXcd signature; // spread_len chips, unit norm
    ChannelRealization channel;
    // Energy per data symbol in watts per RE: the per-RE transmit power
    // times the spread length, since a symbol occupies spread_len REs.
    double symbol_energy = 1.0;
    double distance_m = 0.0;
    std::vector<cdouble> symbols; // data symbols; needed only for grid-level simulation

    double amplitude() const;
};

// Received grid at the base station, one M-vector per RE.
struct RxGrid
{
    int antennas = 0;
    int res = 0;
    std::vector<cdouble> y; // [re][antenna]
    double noise_variance = 0.0;

    cdouble &at(int antenna, int re) { return y[static_cast<std::size_t>(re) * antennas + antenna]; }
    cdouble at(int antenna, int re) const { return y[static_cast<std::size_t>(re) * antennas + antenna]; }
};

// Chip sequence of one user over the whole grid: chip p of block i sits on
// RE i*spread_len + p and equals symbols[i] * signature[p].
std::vector<cdouble> spread_and_map(std::span<const cdouble> symbols, const Eigen::VectorXcd &signature,
                                    const GridSpec &grid);

// Unit-power complex Gaussian data symbols.
std::vector<cdouble> random_symbols(int count, std::uint64_t seed);

RxGrid synthesize_rx(std::span<const UserState> users, const GridSpec &grid, int antennas, double noise_variance,
                     std::uint64_t seed);

// Chip-level MRC with the user's channel followed by despreading; one
// decision statistic per data symbol.
std::vector<cdouble> mrc_despread(const RxGrid &rx, const UserState &user, const GridSpec &grid);

// Genie-aided cancellation: subtracts the user's exact contribution.
void cancel_user(RxGrid &rx, const UserState &user, const GridSpec &grid);

// Aggregated decision-statistic gains. For symbol block i,
// G_i[k,j] is the amplitude of user j's symbol in user k's statistic.
struct DecisionGains
{
    Eigen::MatrixXd power;  // sum_i |G_i[k,j]|^2
    Eigen::VectorXd noise;  // sum_i noise power in user k's statistic
    Eigen::MatrixXcd block0; // G_0, kept for reporting
};

// Gains computed from per-RE channel Gram matrices; blocks with identical
// channel footprints are evaluated once.
DecisionGains compute_gains(std::span<const UserState> users, const GridSpec &grid, double noise_variance);

// Row k of G_i for every block i, obtained by pushing each user's solo
// noiseless grid (unit symbols) through mrc_despread. Reference route for
// compute_gains; cost grows with K * M * grid size.
Eigen::MatrixXcd gain_row_by_chain(std::span<const UserState> users, int k, const GridSpec &grid);

// SINR_k = P[k,k] / (sum over live j != k of P[k,j] + noise_k), capped.
// `cancelled` may be empty.
double sinr(const DecisionGains &gains, int k, std::span<const char> cancelled = {});
std::vector<double> sinr(const DecisionGains &gains, std::span<const char> cancelled = {});

// Post-despreading SNR of each data symbol of a user received alone:
// E |h|^2-weighted chip energy over noise, one value per symbol block.
std::vector<double> solo_symbol_snr(const UserState &user, const GridSpec &grid, double noise_variance);

// Capped Shannon map.
double rate_kbps(double sinr, const GridSpec &grid);

struct DetectionOptions
{
    bool cancel_md_before_ld = true;
};

struct UserReport
{
    int id = 0;
    UserClass user_class = UserClass::MD;
    double pre_sinr = 0.0; // nothing cancelled
    double sinr = 0.0;     // at detection time
    double rate_kbps = 0.0;
    int sic_order = -1; // position in the MD decoding order, -1 for LD
    bool served = false;
    bool collided = false;
    double intra = 0.0; // residual intra-class interference power
    double inter = 0.0; // residual inter-class interference power
    double noise = 0.0;
};

struct DetectionReport
{
    std::vector<UserReport> users;
    std::vector<int> sic_order; // user indices of MD users in decoding order

    int served(UserClass cls) const;
};

// MD: successive cancellation in descending SINR order, cancelling only
// users that meet r_md. LD: single-user detection on what remains.
DetectionReport detect_tti(std::span<const UserState> users, const DecisionGains &gains, const ClassPlan &plan,
                           const GridSpec &grid, const DetectionOptions &options = {});

DetectionReport detect_tti(std::span<const UserState> users, const RxGrid &rx, const ClassPlan &plan,
                           const GridSpec &grid, const DetectionOptions &options = {});

} // namespace moma
