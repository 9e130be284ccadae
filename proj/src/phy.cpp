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

#include "moma/phy.hpp"

#include "moma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace moma {

double UserState::amplitude() const { return std::sqrt(symbol_energy * channel.large_scale_gain); }

namespace {

void check_user(const UserState &u, const GridSpec &grid)
{
    if (u.signature.size() != grid.spread_len)
        throw std::invalid_argument("user " + std::to_string(u.id) + ": signature length does not match spread length");
    if (u.channel.subcarriers() != grid.subcarriers() || u.channel.symbols() != grid.symbols())
        throw std::invalid_argument("user " + std::to_string(u.id) + ": channel does not match the grid");
}

} // namespace

std::vector<cdouble> spread_and_map(std::span<const cdouble> symbols, const Eigen::VectorXcd &signature,
                                    const GridSpec &grid)
{
    if (static_cast<int>(symbols.size()) != grid.symbols_per_user())
        throw std::invalid_argument("spread_and_map: expected " + std::to_string(grid.symbols_per_user()) +
                                    " symbols, got " + std::to_string(symbols.size()));
    if (signature.size() != grid.spread_len)
        throw std::invalid_argument("spread_and_map: signature length does not match spread length");

    std::vector<cdouble> chips(static_cast<std::size_t>(grid.res_per_bundle()));
    const int len = grid.spread_len;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (int p = 0; p < len; ++p)
            chips[i * len + p] = symbols[i] * signature(p);
    return chips;
}

std::vector<cdouble> random_symbols(int count, std::uint64_t seed)
{
    Rng rng(seed);
    ComplexGaussian cn;
    std::vector<cdouble> x(static_cast<std::size_t>(count));
    for (auto &v : x)
        v = cn(rng);
    return x;
}

RxGrid synthesize_rx(std::span<const UserState> users, const GridSpec &grid, int antennas, double noise_variance,
                     std::uint64_t seed)
{
    RxGrid rx;
    rx.antennas = antennas;
    rx.res = grid.res_per_bundle();
    rx.noise_variance = noise_variance;
    rx.y.assign(static_cast<std::size_t>(rx.res) * antennas, cdouble{});

    for (const auto &u : users)
    {
        check_user(u, grid);
        if (u.channel.antennas() != antennas)
            throw std::invalid_argument("synthesize_rx: user antenna count mismatch");
        const auto chips = spread_and_map(u.symbols, u.signature, grid);
        const double amp = u.amplitude();
        for (int re = 0; re < rx.res; ++re)
        {
            const auto pos = grid.position(re);
            const auto h = u.channel.antenna_vector(pos.subcarrier, pos.symbol);
            const cdouble c = amp * chips[static_cast<std::size_t>(re)];
            for (int a = 0; a < antennas; ++a)
                rx.at(a, re) += h[a] * c;
        }
    }

    if (noise_variance > 0.0)
    {
        Rng rng(seed);
        ComplexGaussian cn(noise_variance);
        for (auto &v : rx.y)
            v += cn(rng);
    }
    return rx;
}

std::vector<cdouble> mrc_despread(const RxGrid &rx, const UserState &user, const GridSpec &grid)
{
    check_user(user, grid);
    const int len = grid.spread_len;
    std::vector<cdouble> d(static_cast<std::size_t>(grid.symbols_per_user()));
    for (int i = 0; i < grid.symbols_per_user(); ++i)
    {
        cdouble acc = 0.0;
        for (int p = 0; p < len; ++p)
        {
            const int re = i * len + p;
            const auto pos = grid.position(re);
            const auto h = user.channel.antenna_vector(pos.subcarrier, pos.symbol);
            cdouble z = 0.0;
            for (int a = 0; a < rx.antennas; ++a)
                z += std::conj(h[a]) * rx.at(a, re);
            acc += std::conj(user.signature(p)) * z;
        }
        d[static_cast<std::size_t>(i)] = acc;
    }
    return d;
}

void cancel_user(RxGrid &rx, const UserState &user, const GridSpec &grid)
{
    check_user(user, grid);
    const auto chips = spread_and_map(user.symbols, user.signature, grid);
    const double amp = user.amplitude();
    for (int re = 0; re < rx.res; ++re)
    {
        const auto pos = grid.position(re);
        const auto h = user.channel.antenna_vector(pos.subcarrier, pos.symbol);
        const cdouble c = amp * chips[static_cast<std::size_t>(re)];
        for (int a = 0; a < rx.antennas; ++a)
            rx.at(a, re) -= h[a] * c;
    }
}

std::vector<double> solo_symbol_snr(const UserState &user, const GridSpec &grid, double noise_variance)
{
    check_user(user, grid);
    const double e = user.amplitude() * user.amplitude();
    std::vector<double> snr(static_cast<std::size_t>(grid.symbols_per_user()));
    for (int i = 0; i < grid.symbols_per_user(); ++i)
    {
        // Statistic amplitude amp*a, noise power s2*a, with a = sum_p |s_p|^2 ||h_p||^2.
        double a = 0.0;
        for (int p = 0; p < grid.spread_len; ++p)
        {
            const auto pos = grid.position(i * grid.spread_len + p);
            double hh = 0.0;
            for (const auto &x : user.channel.antenna_vector(pos.subcarrier, pos.symbol))
                hh += std::norm(x);
            a += std::norm(user.signature(p)) * hh;
        }
        snr[static_cast<std::size_t>(i)] = noise_variance * a <= e * a / kSinrCap ? kSinrCap : e * a / noise_variance;
    }
    return snr;
}

DecisionGains compute_gains(std::span<const UserState> users, const GridSpec &grid, double noise_variance)
{
    const auto k_users = static_cast<Eigen::Index>(users.size());
    DecisionGains out;
    out.power = Eigen::MatrixXd::Zero(k_users, k_users);
    out.noise = Eigen::VectorXd::Zero(k_users);
    out.block0 = Eigen::MatrixXcd::Zero(k_users, k_users);
    if (k_users == 0)
        return out;

    const int m = users.front().channel.antennas();
    for (const auto &u : users)
    {
        check_user(u, grid);
        if (u.channel.antennas() != m)
            throw std::invalid_argument("compute_gains: users disagree on antenna count");
    }

    const int len = grid.spread_len;
    const auto &ch0 = users.front().channel;

    // Channel footprint of a block: (time sample, subcarrier) of each chip.
    // Blocks sharing a footprint share G_i; count them instead.
    std::map<std::vector<int>, std::pair<int, int>> footprints; // footprint -> (first block, multiplicity)
    for (int i = 0; i < grid.symbols_per_user(); ++i)
    {
        std::vector<int> key(static_cast<std::size_t>(2 * len));
        for (int p = 0; p < len; ++p)
        {
            const auto pos = grid.position(i * len + p);
            key[2 * p] = ch0.sample_of_symbol(pos.symbol);
            key[2 * p + 1] = pos.subcarrier;
        }
        auto [it, inserted] = footprints.try_emplace(std::move(key), i, 0);
        ++it->second.second;
    }

    Eigen::VectorXd amp(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
        amp(k) = users[static_cast<std::size_t>(k)].amplitude();

    // Per footprint, stack chip p as rows p*M .. p*M+M-1 of X, with column k
    // holding s_k[p] h_k(re_p). Then G_i = X^H X diag(amp), and the noise in
    // statistic k is s2 * (X^H X)[k,k].
    Eigen::MatrixXcd x(static_cast<Eigen::Index>(len) * m, k_users);
    Eigen::MatrixXcd xg(k_users, k_users);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k_users, k_users);

    for (const auto &[key, info] : footprints)
    {
        const auto [first_block, multiplicity] = info;
        for (int p = 0; p < len; ++p)
        {
            const auto pos = grid.position(first_block * len + p);
            for (Eigen::Index k = 0; k < k_users; ++k)
            {
                const auto &u = users[static_cast<std::size_t>(k)];
                const auto h = u.channel.antenna_vector(pos.subcarrier, pos.symbol);
                x.block(static_cast<Eigen::Index>(p) * m, k, m, 1) =
                    u.signature(p) * Eigen::Map<const Eigen::VectorXcd>(h.data(), m);
            }
        }
        xg.setZero();
        xg.selfadjointView<Eigen::Lower>().rankUpdate(x.adjoint());
        for (Eigen::Index j = 0; j < k_users; ++j)
        {
            acc(j, j) += multiplicity * std::norm(xg(j, j));
            out.noise(j) += multiplicity * noise_variance * xg(j, j).real();
            for (Eigen::Index k = j + 1; k < k_users; ++k)
                acc(k, j) += multiplicity * std::norm(xg(k, j));
        }
        if (first_block == 0)
        {
            xg.triangularView<Eigen::StrictlyUpper>() = xg.adjoint();
            out.block0 = xg * amp.cast<cdouble>().asDiagonal();
        }
    }
    acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
    out.power = acc * amp.cwiseAbs2().asDiagonal();
    return out;
}

Eigen::MatrixXcd gain_row_by_chain(std::span<const UserState> users, int k, const GridSpec &grid)
{
    const auto &me = users[static_cast<std::size_t>(k)];
    const int m = me.channel.antennas();
    Eigen::MatrixXcd row(grid.symbols_per_user(), static_cast<Eigen::Index>(users.size()));
    for (std::size_t j = 0; j < users.size(); ++j)
    {
        UserState solo = users[j];
        solo.symbols.assign(static_cast<std::size_t>(grid.symbols_per_user()), cdouble{1.0, 0.0});
        const auto rx = synthesize_rx(std::span<const UserState>(&solo, 1), grid, m, 0.0, 0);
        const auto d = mrc_despread(rx, me, grid);
        for (std::size_t i = 0; i < d.size(); ++i)
            row(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d[i];
    }
    return row;
}

double sinr(const DecisionGains &gains, int k, std::span<const char> cancelled)
{
    double interference = gains.noise(k);
    for (Eigen::Index j = 0; j < gains.power.cols(); ++j)
        if (j != k && (cancelled.empty() || !cancelled[static_cast<std::size_t>(j)]))
            interference += gains.power(k, j);
    const double signal = gains.power(k, k);
    if (interference <= signal / kSinrCap)
        return kSinrCap;
    return signal / interference;
}

std::vector<double> sinr(const DecisionGains &gains, std::span<const char> cancelled)
{
    std::vector<double> out(static_cast<std::size_t>(gains.power.rows()));
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = sinr(gains, static_cast<int>(k), cancelled);
    return out;
}

double rate_kbps(double sinr, const GridSpec &grid)
{
    const double bits = std::min(std::log2(1.0 + std::max(sinr, 0.0)), kMaxBitsPerSymbol);
    return grid.symbols_per_ms() * bits; // bits per ms == kbps
}

int DetectionReport::served(UserClass cls) const
{
    return static_cast<int>(
        std::count_if(users.begin(), users.end(), [cls](const auto &u) { return u.user_class == cls && u.served; }));
}

namespace {

void fill_residuals(UserReport &r, std::span<const UserState> users, const DecisionGains &gains, int k,
                    std::span<const char> cancelled)
{
    r.intra = r.inter = 0.0;
    for (std::size_t j = 0; j < users.size(); ++j)
    {
        if (static_cast<int>(j) == k || cancelled[j])
            continue;
        (users[j].user_class == users[static_cast<std::size_t>(k)].user_class ? r.intra : r.inter) +=
            gains.power(k, static_cast<Eigen::Index>(j));
    }
    r.noise = gains.noise(k);
}

} // namespace

DetectionReport detect_tti(std::span<const UserState> users, const DecisionGains &gains, const ClassPlan &plan,
                           const GridSpec &grid, const DetectionOptions &options)
{
    const std::size_t n = users.size();
    if (static_cast<std::size_t>(gains.power.rows()) != n)
        throw std::invalid_argument("detect_tti: gains do not match the user set");

    DetectionReport rep;
    rep.users.resize(n);
    std::vector<char> cancelled(n, 0);

    for (std::size_t k = 0; k < n; ++k)
    {
        auto &r = rep.users[k];
        r.id = users[k].id;
        r.user_class = users[k].user_class;
        r.pre_sinr = sinr(gains, static_cast<int>(k));
        if (users[k].sequence_index >= 0)
            for (std::size_t j = 0; j < n; ++j)
                if (j != k && users[j].user_class == users[k].user_class &&
                    users[j].sequence_index == users[k].sequence_index)
                    r.collided = true;
    }

    // MD pass.
    std::vector<int> pending;
    for (std::size_t k = 0; k < n; ++k)
        if (users[k].user_class == UserClass::MD)
            pending.push_back(static_cast<int>(k));
    // Residual interference plus noise of every pending MD user, updated
    // as users are cancelled.
    std::vector<double> residual(n, 0.0);
    for (int k : pending)
    {
        double acc = gains.noise(k);
        for (std::size_t j = 0; j < n; ++j)
            if (static_cast<int>(j) != k)
                acc += gains.power(k, static_cast<Eigen::Index>(j));
        residual[static_cast<std::size_t>(k)] = acc;
    }
    auto capped = [&](int k) {
        const double signal = gains.power(k, k);
        const double i = std::max(residual[static_cast<std::size_t>(k)], 0.0);
        return i <= signal / kSinrCap ? kSinrCap : signal / i;
    };
    while (!pending.empty())
    {
        auto best = pending.begin();
        double best_sinr = -1.0;
        for (auto it = pending.begin(); it != pending.end(); ++it)
        {
            const double s = capped(*it);
            if (s > best_sinr)
            {
                best_sinr = s;
                best = it;
            }
        }
        const int k = *best;
        pending.erase(best);

        auto &r = rep.users[static_cast<std::size_t>(k)];
        r.sinr = sinr(gains, k, cancelled);
        r.rate_kbps = rate_kbps(r.sinr, grid);
        r.sic_order = static_cast<int>(rep.sic_order.size());
        fill_residuals(r, users, gains, k, cancelled);
        rep.sic_order.push_back(k);
        r.served = !r.collided && r.rate_kbps >= plan.r_md_kbps;
        if (r.served)
        {
            cancelled[static_cast<std::size_t>(k)] = 1;
            for (int j : pending)
                residual[static_cast<std::size_t>(j)] -= gains.power(j, k);
        }
    }

    // LD pass.
    if (!options.cancel_md_before_ld)
        std::fill(cancelled.begin(), cancelled.end(), 0);
    for (std::size_t k = 0; k < n; ++k)
    {
        if (users[k].user_class != UserClass::LD)
            continue;
        auto &r = rep.users[k];
        r.sinr = sinr(gains, static_cast<int>(k), cancelled);
        r.rate_kbps = rate_kbps(r.sinr, grid);
        fill_residuals(r, users, gains, static_cast<int>(k), cancelled);
        r.served = !r.collided && r.rate_kbps >= plan.r_ld_kbps;
    }
    return rep;
}

DetectionReport detect_tti(std::span<const UserState> users, const RxGrid &rx, const ClassPlan &plan,
                           const GridSpec &grid, const DetectionOptions &options)
{
    for (const auto &u : users)
        if (u.channel.antennas() != rx.antennas)
            throw std::invalid_argument("detect_tti: user channel does not match the received grid");
    return detect_tti(users, compute_gains(users, grid, rx.noise_variance), plan, grid, options);
}

} // namespace moma
