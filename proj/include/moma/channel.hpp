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

#include "moma/config.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moma {

using cdouble = std::complex<double>;

enum class ProfileName
{
    Etu,
    Eva,
    Epa,
    Flat
};

std::string_view to_string(ProfileName name);
ProfileName parse_profile_name(std::string_view text);

// Tapped-delay-line power delay profile; powers are normalized to unit sum.
struct TapProfile
{
    std::string name;
    std::vector<double> delays_ns;
    std::vector<double> powers_db;

    std::vector<double> linear_powers() const;
};

// Parses "profile,delay_ns,power_db" rows ('#' starts a comment) and
// normalizes each profile. Throws std::invalid_argument on malformed input.
std::map<std::string, TapProfile> parse_tap_profiles(std::string_view csv);

// Profiles shipped in data/tap_profiles.csv, compiled into the library.
const TapProfile &tap_profile(ProfileName name);

enum class Evolution
{
    BlockPerTti, // taps constant within a TTI, redrawn independently per TTI
    JakesSos     // sum-of-sinusoids Doppler process sampled once per OFDM symbol
};

std::string_view to_string(Evolution evolution);
Evolution parse_evolution(std::string_view text);

struct FadingProcess
{
    double doppler_hz = 70.0;
    Evolution evolution = Evolution::BlockPerTti;
};

// Frequency response of one user's channel at every antenna, subcarrier and
// time sample of a grid. Under BlockPerTti there is one time sample per TTI;
// under JakesSos one per OFDM symbol.
class ChannelRealization
{
  public:
    ChannelRealization() = default;
    ChannelRealization(int antennas, int subcarriers, int symbols, int symbols_per_sample);

    int antennas() const { return antennas_; }
    int subcarriers() const { return subcarriers_; }
    int symbols() const { return symbols_; }
    int time_samples() const { return samples_; }
    int sample_of_symbol(int symbol) const { return symbol / symbols_per_sample_; }

    cdouble &at(int antenna, int subcarrier, int symbol)
    {
        return h_[offset(sample_of_symbol(symbol), subcarrier) + static_cast<std::size_t>(antenna)];
    }
    cdouble at(int antenna, int subcarrier, int symbol) const
    {
        return h_[offset(sample_of_symbol(symbol), subcarrier) + static_cast<std::size_t>(antenna)];
    }

    // Contiguous M-element vector for one RE.
    std::span<const cdouble> antenna_vector(int subcarrier, int symbol) const
    {
        return {h_.data() + offset(sample_of_symbol(symbol), subcarrier), static_cast<std::size_t>(antennas_)};
    }
    std::span<cdouble> sample_vector(int sample, int subcarrier)
    {
        return {h_.data() + offset(sample, subcarrier), static_cast<std::size_t>(antennas_)};
    }

    const std::vector<cdouble> &data() const { return h_; }

    double large_scale_gain = 1.0;

  private:
    std::size_t offset(int sample, int subcarrier) const
    {
        return (static_cast<std::size_t>(sample) * subcarriers_ + subcarrier) * antennas_;
    }

    int antennas_ = 0;
    int subcarriers_ = 0;
    int symbols_ = 0;
    int symbols_per_sample_ = 1;
    int samples_ = 0;
    std::vector<cdouble> h_;
};

// i.i.d. Rayleigh taps per antenna, transformed to the grid's subcarriers.
ChannelRealization sample_channel(const TapProfile &profile, const FadingProcess &fading, int antennas,
                                  const GridSpec &grid, std::uint64_t seed);

// Frequency response of the given taps at `subcarrier` (15 kHz spacing).
cdouble frequency_response(std::span<const cdouble> taps, std::span<const double> delays_ns, int subcarrier);

enum class PathlossKind
{
    LogDistance,
    FreeSpace
};

std::string_view to_string(PathlossKind kind);
PathlossKind parse_pathloss_kind(std::string_view text);

struct PathlossModel
{
    PathlossKind kind = PathlossKind::LogDistance;
    double pl0_db = 30.0; // loss at 1 m
    double exponent = 3.76;
    double carrier_freq_hz = 2e9;

    double loss_db(double distance_m) const;
};

// Linear power gain at `distance_m`. Throws std::invalid_argument for d <= 0.
double pathloss(double distance_m, const PathlossModel &model);

// Post-MRC desired-signal gain g(f,t) = ||h(f,t)||^2.
struct EffectiveResponse
{
    int subcarriers = 0;
    int symbols = 0;
    std::vector<double> g; // [symbol][subcarrier]

    double at(int subcarrier, int symbol) const
    {
        return g[static_cast<std::size_t>(symbol) * subcarriers + subcarrier];
    }
};

EffectiveResponse mrc_effective_response(const ChannelRealization &h);

// Population standard deviation over mean.
double coefficient_of_variation(std::span<const double> values);

struct HardeningStats
{
    std::vector<int> antennas;
    std::vector<std::vector<double>> cv; // [antenna count][realization]
    std::vector<double> median_cv;
};

HardeningStats hardening_stats(const TapProfile &profile, const FadingProcess &fading, std::span<const int> antennas,
                               int realizations, const GridSpec &grid, std::uint64_t seed);

double median(std::vector<double> values);

} // namespace moma
