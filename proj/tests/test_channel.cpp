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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace moma;

namespace {

GridSpec grid(bool bundling = false)
{
    ClassPlan plan;
    plan.tti_bundling = bundling;
    return derive_grid(SystemConfig{}, plan);
}

} // namespace

TEST_CASE("shipped tap profiles are normalized")
{
    struct Expect
    {
        ProfileName name;
        std::size_t taps;
        double last_delay_ns;
    };
    for (const auto &e : {Expect{ProfileName::Epa, 7, 410.0}, Expect{ProfileName::Eva, 9, 2510.0},
                          Expect{ProfileName::Etu, 9, 5000.0}, Expect{ProfileName::Flat, 1, 0.0}})
    {
        const auto &p = tap_profile(e.name);
        CAPTURE(to_string(e.name));
        CHECK(p.delays_ns.size() == e.taps);
        CHECK(p.powers_db.size() == e.taps);
        CHECK(p.delays_ns.front() == 0.0);
        CHECK(p.delays_ns.back() == e.last_delay_ns);
        for (std::size_t i = 1; i < p.delays_ns.size(); ++i)
            CHECK(p.delays_ns[i] > p.delays_ns[i - 1]);
        const auto lin = p.linear_powers();
        CHECK(std::abs(std::accumulate(lin.begin(), lin.end(), 0.0) - 1.0) < 1e-9);
    }
    CHECK(tap_profile(ProfileName::Flat).powers_db.front() == doctest::Approx(0.0));
}

TEST_CASE("tap profile parser")
{
    const auto m = parse_tap_profiles("# comment\nA, 0, 0\nA, 100, 0\n\nB,0,-3\n");
    REQUIRE(m.size() == 2);
    CHECK(m.at("A").powers_db[0] == doctest::Approx(-3.0103).epsilon(1e-4));
    CHECK(m.at("B").powers_db[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS(parse_tap_profiles("A,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tap_profiles("A,0,x\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tap_profiles("A,10,0\nA,5,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tap_profiles("A,-1,0\n"), std::invalid_argument);
}

TEST_CASE("profile names parse case-insensitively")
{
    CHECK(parse_profile_name("etu") == ProfileName::Etu);
    CHECK(parse_profile_name("EVA") == ProfileName::Eva);
    CHECK_THROWS_AS(parse_profile_name("tdl-c"), std::invalid_argument);
    CHECK(parse_evolution(to_string(Evolution::JakesSos)) == Evolution::JakesSos);
    CHECK(parse_pathloss_kind(to_string(PathlossKind::FreeSpace)) == PathlossKind::FreeSpace);
}

TEST_CASE("flat channel is constant across frequency")
{
    const auto g = grid();
    const auto h = sample_channel(tap_profile(ProfileName::Flat), FadingProcess{}, 8, g, 11);
    for (int a = 0; a < 8; ++a)
        for (int t = 0; t < g.symbols(); ++t)
            for (int f = 1; f < g.subcarriers(); ++f)
                CHECK(std::abs(h.at(a, f, t) - h.at(a, 0, t)) < 1e-15);
    const auto r = mrc_effective_response(h);
    CHECK(coefficient_of_variation(r.g) < 1e-12);
}

TEST_CASE("mean per-antenna RE power is one")
{
    const auto g = grid();
    double acc = 0.0;
    long long n = 0;
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        const auto h = sample_channel(tap_profile(ProfileName::Etu), FadingProcess{}, 1, g, s);
        for (int f = 0; f < g.subcarriers(); f += 5)
        {
            acc += std::norm(h.at(0, f, 0));
            ++n;
        }
    }
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sum-of-sinusoids process keeps unit power and varies in time")
{
    const auto g = grid();
    FadingProcess fp;
    fp.evolution = Evolution::JakesSos;
    fp.doppler_hz = 300.0;
    double acc = 0.0;
    long long n = 0;
    bool varies = false;
    for (std::uint64_t s = 0; s < 400; ++s)
    {
        const auto h = sample_channel(tap_profile(ProfileName::Eva), fp, 2, g, s);
        CHECK(h.time_samples() == g.symbols());
        for (int t = 0; t < g.symbols(); ++t)
        {
            acc += std::norm(h.at(1, 7, t));
            ++n;
        }
        varies = varies || h.at(0, 0, 0) != h.at(0, 0, 13);
    }
    CHECK(varies);
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("block fading is constant within a TTI and redrawn across TTIs")
{
    const auto g = grid(true);
    const auto h = sample_channel(tap_profile(ProfileName::Eva), FadingProcess{}, 4, g, 5);
    CHECK(h.time_samples() == 4);
    for (int t = 1; t < 14; ++t)
        CHECK(h.at(2, 30, t) == h.at(2, 30, 0));
    CHECK(h.at(2, 30, 14) != h.at(2, 30, 0));
}

TEST_CASE("channel sampling is seeded")
{
    const auto g = grid();
    const auto a = sample_channel(tap_profile(ProfileName::Etu), FadingProcess{}, 16, g, 99);
    const auto b = sample_channel(tap_profile(ProfileName::Etu), FadingProcess{}, 16, g, 99);
    const auto c = sample_channel(tap_profile(ProfileName::Etu), FadingProcess{}, 16, g, 100);
    CHECK(a.data() == b.data());
    CHECK(a.data() != c.data());
}

TEST_CASE("frequency response is linear in the taps")
{
    const auto &p = tap_profile(ProfileName::Etu);
    Rng rng(3);
    ComplexGaussian cn;
    std::vector<cdouble> x(p.delays_ns.size()), y(x.size()), sum(x.size());
    for (std::size_t l = 0; l < x.size(); ++l)
    {
        x[l] = cn(rng);
        y[l] = cn(rng);
        sum[l] = x[l] + y[l];
    }
    for (int f = 0; f < 72; ++f)
    {
        const auto lhs = frequency_response(sum, p.delays_ns, f);
        const auto rhs = frequency_response(x, p.delays_ns, f) + frequency_response(y, p.delays_ns, f);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("pathloss models")
{
    const PathlossModel ld;
    CHECK(linear_to_db(pathloss(1.0, ld)) == doctest::Approx(-30.0));
    CHECK(linear_to_db(pathloss(25.0, ld) / pathloss(100.0, ld)) == doctest::Approx(37.6 * std::log10(4.0)).epsilon(1e-12));
    CHECK(pathloss(100.0, ld) / pathloss(25.0, ld) == doctest::Approx(std::pow(0.25, 3.76)));

    PathlossModel fs;
    fs.kind = PathlossKind::FreeSpace;
    CHECK(fs.loss_db(200.0) - fs.loss_db(100.0) == doctest::Approx(6.0206).epsilon(1e-5));

    CHECK_THROWS_AS(pathloss(0.0, ld), std::invalid_argument);
    CHECK_THROWS_AS(pathloss(-3.0, fs), std::invalid_argument);
}

TEST_CASE("single-antenna effective response is |h|^2")
{
    const auto g = grid();
    const auto h = sample_channel(tap_profile(ProfileName::Epa), FadingProcess{}, 1, g, 4);
    const auto r = mrc_effective_response(h);
    for (int f = 0; f < g.subcarriers(); ++f)
        CHECK(r.at(f, 3) == std::norm(h.at(0, f, 3)));
}

TEST_CASE("statistics helpers")
{
    const std::vector<double> v{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    CHECK(coefficient_of_variation(v) == doctest::Approx(2.0 / 5.0));
    CHECK(median(v) == doctest::Approx(4.5));
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(coefficient_of_variation(std::vector<double>{}) == 0.0);
}

TEST_CASE("hardening on a flat single antenna has zero spread")
{
    const std::vector<int> m{1};
    const auto st = hardening_stats(tap_profile(ProfileName::Flat), FadingProcess{}, m, 20, grid(), 1);
    CHECK(st.median_cv[0] < 1e-12);
    CHECK_THROWS_AS(hardening_stats(tap_profile(ProfileName::Flat), FadingProcess{}, m, 0, grid(), 1),
                    std::invalid_argument);
}

TEST_CASE("massive arrays harden the ETU channel")
{
    const std::vector<int> m{4, 100};
    const auto st = hardening_stats(tap_profile(ProfileName::Etu), FadingProcess{}, m, 500, grid(), 2016);
    int better = 0;
    for (std::size_t r = 0; r < st.cv[0].size(); ++r)
        better += st.cv[1][r] < st.cv[0][r];
    CHECK(better >= 475);
    CHECK(st.median_cv[1] < st.median_cv[0]);
    const double ratio = st.median_cv[1] / st.median_cv[0];
    CHECK(ratio >= 0.1);
    CHECK(ratio <= 0.35);
    for (const auto &cvs : st.cv)
        for (double cv : cvs)
            CHECK(cv >= 0.0);
}
