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

#include "moma/channel.hpp"

#include "moma/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace moma {

namespace detail {
extern const char *const kTapProfilesCsv;
}

std::string_view to_string(ProfileName name)
{
    switch (name)
    {
    case ProfileName::Etu:
        return "ETU";
    case ProfileName::Eva:
        return "EVA";
    case ProfileName::Epa:
        return "EPA";
    case ProfileName::Flat:
        return "FLAT";
    }
    return "?";
}

ProfileName parse_profile_name(std::string_view text)
{
    for (auto p : {ProfileName::Etu, ProfileName::Eva, ProfileName::Epa, ProfileName::Flat})
    {
        const auto s = to_string(p);
        if (std::equal(text.begin(), text.end(), s.begin(), s.end(),
                       [](char a, char b) { return std::toupper(static_cast<unsigned char>(a)) == b; }))
            return p;
    }
    throw std::invalid_argument("unknown tap profile '" + std::string(text) + "'");
}

std::vector<double> TapProfile::linear_powers() const
{
    std::vector<double> p(powers_db.size());
    std::transform(powers_db.begin(), powers_db.end(), p.begin(), db_to_linear);
    return p;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, int line)
{
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("tap profile line " + std::to_string(line) + ": bad number '" +
                                    std::string(s) + "'");
    return v;
}

} // namespace

std::map<std::string, TapProfile> parse_tap_profiles(std::string_view csv)
{
    std::map<std::string, TapProfile> out;
    int line_no = 0;
    while (!csv.empty())
    {
        ++line_no;
        const auto eol = csv.find('\n');
        auto line = trim(csv.substr(0, eol));
        csv = eol == std::string_view::npos ? std::string_view{} : csv.substr(eol + 1);
        if (line.empty() || line.front() == '#')
            continue;

        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos)
            throw std::invalid_argument("tap profile line " + std::to_string(line_no) + ": expected 3 fields");
        auto &p = out[std::string(trim(line.substr(0, c1)))];
        p.delays_ns.push_back(parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no));
        p.powers_db.push_back(parse_number(line.substr(c2 + 1), line_no));
    }

    for (auto &[name, p] : out)
    {
        p.name = name;
        for (std::size_t i = 0; i < p.delays_ns.size(); ++i)
            if (p.delays_ns[i] < 0.0 || (i > 0 && p.delays_ns[i] <= p.delays_ns[i - 1]))
                throw std::invalid_argument("profile " + name + ": delays must be non-negative and increasing");
        const auto lin = p.linear_powers();
        const double total_db = linear_to_db(std::accumulate(lin.begin(), lin.end(), 0.0));
        for (auto &db : p.powers_db)
            db -= total_db;
    }
    return out;
}

const TapProfile &tap_profile(ProfileName name)
{
    static const auto profiles = parse_tap_profiles(detail::kTapProfilesCsv);
    const auto it = profiles.find(std::string(to_string(name)));
    if (it == profiles.end())
        throw std::logic_error("tap profile missing from built-in table");
    return it->second;
}

std::string_view to_string(Evolution evolution)
{
    return evolution == Evolution::BlockPerTti ? "block_per_tti" : "jakes_sos";
}

Evolution parse_evolution(std::string_view text)
{
    if (text == "block_per_tti")
        return Evolution::BlockPerTti;
    if (text == "jakes_sos")
        return Evolution::JakesSos;
    throw std::invalid_argument("unknown channel evolution '" + std::string(text) + "'");
}

ChannelRealization::ChannelRealization(int antennas, int subcarriers, int symbols, int symbols_per_sample)
    : antennas_(antennas), subcarriers_(subcarriers), symbols_(symbols), symbols_per_sample_(symbols_per_sample),
      samples_((symbols + symbols_per_sample - 1) / symbols_per_sample),
      h_(static_cast<std::size_t>(samples_) * subcarriers * antennas)
{
}

cdouble frequency_response(std::span<const cdouble> taps, std::span<const double> delays_ns, int subcarrier)
{
    cdouble h = 0.0;
    for (std::size_t l = 0; l < taps.size(); ++l)
        h += taps[l] * std::polar(1.0, -2.0 * std::numbers::pi * subcarrier * kSubcarrierSpacingHz *
                                           delays_ns[l] * 1e-9);
    return h;
}

namespace {

// Number of sinusoids per tap in the Doppler process.
constexpr int kSosTerms = 16;

} // namespace

ChannelRealization sample_channel(const TapProfile &profile, const FadingProcess &fading, int antennas,
                                  const GridSpec &grid, std::uint64_t seed)
{
    if (antennas < 1)
        throw std::invalid_argument("sample_channel needs at least one antenna");
    const bool per_symbol = fading.evolution == Evolution::JakesSos;
    ChannelRealization h(antennas, grid.subcarriers(), grid.symbols(), per_symbol ? 1 : grid.symbols_per_tti);

    const auto powers = profile.linear_powers();
    const std::size_t n_taps = powers.size();
    const int n_sc = grid.subcarriers();

    // phase[f][l] = exp(-j 2 pi f df tau_l)
    std::vector<cdouble> phase(static_cast<std::size_t>(n_sc) * n_taps);
    for (int f = 0; f < n_sc; ++f)
        for (std::size_t l = 0; l < n_taps; ++l)
            phase[f * n_taps + l] =
                std::polar(1.0, -2.0 * std::numbers::pi * f * kSubcarrierSpacingHz * profile.delays_ns[l] * 1e-9);

    Rng rng(seed);
    ComplexGaussian cn;
    std::vector<cdouble> taps(static_cast<std::size_t>(h.time_samples()) * antennas * n_taps);
    auto tap = [&](int s, int a, std::size_t l) -> cdouble & {
        return taps[(static_cast<std::size_t>(s) * antennas + a) * n_taps + l];
    };

    if (!per_symbol)
    {
        for (int s = 0; s < h.time_samples(); ++s)
            for (int a = 0; a < antennas; ++a)
                for (std::size_t l = 0; l < n_taps; ++l)
                    tap(s, a, l) = std::sqrt(powers[l]) * cn(rng);
    }
    else
    {
        std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
        const double symbol_s = grid.tti_duration_ms * 1e-3 / grid.symbols_per_tti;
        std::vector<double> doppler(kSosTerms), offset(kSosTerms);
        for (int a = 0; a < antennas; ++a)
            for (std::size_t l = 0; l < n_taps; ++l)
            {
                for (int n = 0; n < kSosTerms; ++n)
                {
                    doppler[n] = 2.0 * std::numbers::pi * fading.doppler_hz * std::cos(uni(rng));
                    offset[n] = uni(rng);
                }
                const double amp = std::sqrt(powers[l] / kSosTerms);
                for (int s = 0; s < h.time_samples(); ++s)
                {
                    cdouble g = 0.0;
                    for (int n = 0; n < kSosTerms; ++n)
                        g += std::polar(amp, doppler[n] * s * symbol_s + offset[n]);
                    tap(s, a, l) = g;
                }
            }
    }

    // H_s = T_s^T P^T, antenna index fastest, as stored in the realization.
    using RowMajor = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> p(phase.data(), n_sc, static_cast<Eigen::Index>(n_taps));
    for (int s = 0; s < h.time_samples(); ++s)
    {
        const Eigen::Map<const Eigen::MatrixXcd> t(&tap(s, 0, 0), static_cast<Eigen::Index>(n_taps), antennas);
        Eigen::Map<Eigen::MatrixXcd> out(h.sample_vector(s, 0).data(), antennas, n_sc);
        out.noalias() = t.transpose() * p.transpose();
    }
    return h;
}

std::string_view to_string(PathlossKind kind) { return kind == PathlossKind::LogDistance ? "log_distance" : "free_space"; }

PathlossKind parse_pathloss_kind(std::string_view text)
{
    if (text == "log_distance")
        return PathlossKind::LogDistance;
    if (text == "free_space")
        return PathlossKind::FreeSpace;
    throw std::invalid_argument("unknown pathloss model '" + std::string(text) + "'");
}

double PathlossModel::loss_db(double distance_m) const
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("pathloss needs a positive distance");
    if (kind == PathlossKind::LogDistance)
        return pl0_db + 10.0 * exponent * std::log10(distance_m);
    constexpr double c = 299792458.0;
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_freq_hz / c);
}

double pathloss(double distance_m, const PathlossModel &model) { return db_to_linear(-model.loss_db(distance_m)); }

EffectiveResponse mrc_effective_response(const ChannelRealization &h)
{
    EffectiveResponse r{h.subcarriers(), h.symbols(), {}};
    r.g.resize(static_cast<std::size_t>(r.subcarriers) * r.symbols);
    for (int t = 0; t < r.symbols; ++t)
        for (int f = 0; f < r.subcarriers; ++f)
        {
            double acc = 0.0;
            for (const auto &x : h.antenna_vector(f, t))
                acc += std::norm(x);
            r.g[static_cast<std::size_t>(t) * r.subcarriers + f] = acc;
        }
    return r;
}

double coefficient_of_variation(std::span<const double> values)
{
    if (values.empty())
        return 0.0;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    var /= n;
    return mean > 0.0 ? std::sqrt(var) / mean : 0.0;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return 0.0;
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2)
        return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

HardeningStats hardening_stats(const TapProfile &profile, const FadingProcess &fading, std::span<const int> antennas,
                               int realizations, const GridSpec &grid, std::uint64_t seed)
{
    if (realizations < 1)
        throw std::invalid_argument("hardening_stats needs at least one realization");
    if (antennas.empty())
        throw std::invalid_argument("hardening_stats needs at least one antenna count");
    const int m_max = *std::max_element(antennas.begin(), antennas.end());

    HardeningStats st;
    st.antennas.assign(antennas.begin(), antennas.end());
    st.cv.assign(antennas.size(), std::vector<double>(static_cast<std::size_t>(realizations)));

    // Each realization is drawn once with the largest array; smaller arrays
    // use its leading antennas, so the CVs of one realization are paired.
    std::vector<double> g(static_cast<std::size_t>(grid.subcarriers()) * grid.symbols());
    for (int r = 0; r < realizations; ++r)
    {
        const auto h = sample_channel(profile, fading, m_max, grid, derive_seed(seed, {stream::channel, static_cast<std::uint64_t>(r)}));
        for (std::size_t i = 0; i < antennas.size(); ++i)
        {
            const int m = antennas[i];
            for (int t = 0; t < grid.symbols(); ++t)
                for (int f = 0; f < grid.subcarriers(); ++f)
                {
                    double acc = 0.0;
                    const auto v = h.antenna_vector(f, t);
                    for (int a = 0; a < m; ++a)
                        acc += std::norm(v[a]);
                    g[static_cast<std::size_t>(t) * grid.subcarriers() + f] = acc;
                }
            st.cv[i][static_cast<std::size_t>(r)] = coefficient_of_variation(g);
        }
    }
    for (const auto &cvs : st.cv)
        st.median_cv.push_back(median(cvs));
    return st;
}

} // namespace moma
