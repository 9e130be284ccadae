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

#include "moma/cli.hpp"

#include "moma/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace moma::cli {

std::string_view to_string(Subcommand sub)
{
    switch (sub)
    {
    case Subcommand::Codes:
        return "codes";
    case Subcommand::Channel:
        return "channel";
    case Subcommand::Hardening:
        return "hardening";
    case Subcommand::Tti:
        return "tti";
    case Subcommand::Capacity:
        return "capacity";
    case Subcommand::Coverage:
        return "coverage";
    case Subcommand::Ra:
        return "ra";
    case Subcommand::PrintConfig:
        return "print-config";
    }
    return "?";
}

const std::vector<Subcommand> &all_subcommands()
{
    static const std::vector<Subcommand> subs = {Subcommand::Codes,    Subcommand::Channel,  Subcommand::Hardening,
                                                 Subcommand::Tti,      Subcommand::Capacity, Subcommand::Coverage,
                                                 Subcommand::Ra,       Subcommand::PrintConfig};
    return subs;
}

Subcommand parse_subcommand(std::string_view text)
{
    for (auto s : all_subcommands())
        if (text == to_string(s))
            return s;
    throw std::invalid_argument("unknown subcommand '" + std::string(text) + "'");
}

ExperimentConfig resolve(const ExperimentSpec &spec)
{
    ExperimentConfig cfg = spec.config_path.empty() ? ExperimentConfig{} : load_config(spec.config_path);
    if (spec.master_seed)
        cfg.master_seed = *spec.master_seed;
    if (spec.mc_runs)
    {
        if (*spec.mc_runs < 1)
            throw std::invalid_argument("--runs must be at least 1");
        cfg.mc_runs = *spec.mc_runs;
    }
    return cfg;
}

namespace {

// CSV file whose first line records the subcommand, config hash and seed.
class Csv
{
  public:
    Csv(const std::filesystem::path &path, Subcommand sub, const ExperimentConfig &cfg, std::string_view columns)
        : out_(path, std::ios::binary)
    {
        if (!out_)
            throw std::runtime_error("cannot write " + path.string());
        out_ << fmt::format("# moma {} config_hash={:016x} seed={}\n", to_string(sub), config_hash(cfg),
                            cfg.master_seed);
        out_ << columns << '\n';
    }

    template <class... Args> void row(fmt::format_string<Args...> f, Args &&...args)
    {
        out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
    }

  private:
    std::ofstream out_;
};

std::uint64_t sub_seed(const ExperimentConfig &cfg, Subcommand sub)
{
    return derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(sub) + 100});
}

void write_matrix(Csv &csv, const Eigen::MatrixXcd &m)
{
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            csv.row("{},{},{},{}", r, c, m(r, c).real(), m(r, c).imag());
}

void run_codes(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const auto grid = derive_grid(cfg.system, cfg.plan);
    const int stretch = grid.bundle_ttis;
    const auto u = build_code_matrix(cfg.code_kind, grid.spread_len);
    const auto part = partition(u, cfg.plan.n_md * stretch);
    const std::uint64_t seed = sub_seed(cfg, Subcommand::Codes);
    const auto w_md = build_overloading(UserClass::MD, cfg.plan.n_md * stretch, cfg.plan.k_md, cfg.generation,
                                        derive_seed(seed, {stream::overloading, 0}));
    const auto w_ld = build_overloading(UserClass::LD, cfg.plan.n_ld * stretch, cfg.plan.k_ld, cfg.generation,
                                        derive_seed(seed, {stream::overloading, 1}));
    const auto sig = make_signatures(part, w_md, w_ld);

    {
        Csv csv(dir / "codes_u.csv", Subcommand::Codes, cfg, "row,col,re,im");
        write_matrix(csv, u.entries);
    }
    {
        Csv csv(dir / "codes_w_md.csv", Subcommand::Codes, cfg, "row,col,re,im");
        write_matrix(csv, w_md.w);
    }
    {
        Csv csv(dir / "codes_w_ld.csv", Subcommand::Codes, cfg, "row,col,re,im");
        write_matrix(csv, w_ld.w);
    }
    {
        Csv csv(dir / "codes_signatures.csv", Subcommand::Codes, cfg, "user,class,sequence,chip,re,im");
        for (std::size_t k = 0; k < sig.size(); ++k)
            for (int p = 0; p < sig.signatures[k].size(); ++p)
                csv.row("{},{},{},{},{},{}", k, to_string(sig.classes[k]), sig.sequence_index[k], p,
                        sig.signatures[k](p).real(), sig.signatures[k](p).imag());
    }
    {
        Csv csv(dir / "codes_gram.csv", Subcommand::Codes, cfg, "row,col,re,im");
        write_matrix(csv, gram(sig));
    }
}

void run_channel(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const auto grid = derive_grid(cfg.system, cfg.plan);
    const auto &profile = tap_profile(cfg.profile);
    const int m_max = std::max(cfg.system.num_bs_antennas,
                               *std::max_element(cfg.hardening_antennas.begin(), cfg.hardening_antennas.end()));
    const auto h = sample_channel(profile, cfg.fading, m_max, grid,
                                  derive_seed(sub_seed(cfg, Subcommand::Channel), {stream::channel}));

    Csv field(dir / "channel_response.csv", Subcommand::Channel, cfg, "antennas,subcarrier,symbol,g");
    Csv cv(dir / "channel_cv.csv", Subcommand::Channel, cfg, "antennas,cv");
    std::vector<double> g(static_cast<std::size_t>(grid.subcarriers()) * grid.symbols());
    for (int m : cfg.hardening_antennas)
    {
        for (int t = 0; t < grid.symbols(); ++t)
            for (int f = 0; f < grid.subcarriers(); ++f)
            {
                double acc = 0.0;
                const auto v = h.antenna_vector(f, t);
                for (int a = 0; a < m; ++a)
                    acc += std::norm(v[static_cast<std::size_t>(a)]);
                g[static_cast<std::size_t>(t) * grid.subcarriers() + f] = acc;
                field.row("{},{},{},{}", m, f, t, acc);
            }
        cv.row("{},{}", m, coefficient_of_variation(g));
    }
}

void run_hardening(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const auto grid = derive_grid(cfg.system, cfg.plan);
    const auto st = hardening_stats(tap_profile(cfg.hardening_profile), cfg.fading, cfg.hardening_antennas,
                                    cfg.hardening_realizations, grid, sub_seed(cfg, Subcommand::Hardening));
    Csv csv(dir / "hardening.csv", Subcommand::Hardening, cfg, "antennas,realizations,median_cv,mean_cv");
    for (std::size_t i = 0; i < st.antennas.size(); ++i)
    {
        double mean = 0.0;
        for (double v : st.cv[i])
            mean += v;
        mean /= static_cast<double>(st.cv[i].size());
        csv.row("{},{},{},{}", st.antennas[i], st.cv[i].size(), st.median_cv[i], mean);
    }
}

void run_tti(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const auto sc = cfg.scenario();
    const auto grid = derive_grid(sc.system, sc.plan);
    const std::uint64_t seed = sub_seed(cfg, Subcommand::Tti);
    const auto users = drop_users(sc, grid, cfg.plan.k_md, cfg.plan.k_ld, seed);
    const double noise = sc.noiseless ? 0.0 : sc.system.noise_variance_per_re();
    const auto gains = compute_gains(users, grid, noise);
    const auto rep = detect_tti(users, gains, sc.plan, grid, sc.detection);

    {
        Csv csv(dir / "tti_users.csv", Subcommand::Tti, cfg,
                "user,class,sequence,distance_m,pre_sinr_db,sinr_db,rate_kbps,target_kbps,sic_order,served,collided,"
                "intra,inter,noise");
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const auto &u = users[k];
            const auto &r = rep.users[k];
            csv.row("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", u.id, to_string(u.user_class), u.sequence_index,
                    u.distance_m, linear_to_db(r.pre_sinr), linear_to_db(r.sinr), r.rate_kbps,
                    sc.plan.target_kbps(u.user_class), r.sic_order, r.served ? 1 : 0, r.collided ? 1 : 0, r.intra,
                    r.inter, r.noise);
        }
    }
    {
        Csv csv(dir / "tti_gains.csv", Subcommand::Tti, cfg, "k,j,g0_re,g0_im,power");
        for (int k = 0; k < gains.power.rows(); ++k)
            for (int j = 0; j < gains.power.cols(); ++j)
                csv.row("{},{},{},{},{}", k, j, gains.block0(k, j).real(), gains.block0(k, j).imag(),
                        gains.power(k, j));
    }
    {
        Csv csv(dir / "tti_summary.csv", Subcommand::Tti, cfg, "class,active,served");
        csv.row("MD,{},{}", cfg.plan.k_md, rep.served(UserClass::MD));
        csv.row("LD,{},{}", cfg.plan.k_ld, rep.served(UserClass::LD));
    }
}

void run_capacity(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const auto sc = cfg.scenario();
    const std::uint64_t seed = sub_seed(cfg, Subcommand::Capacity);
    for (auto cls : {UserClass::MD, UserClass::LD})
    {
        const bool md = cls == UserClass::MD;
        const auto curve =
            capacity_curve(cls, md ? cfg.md_rate_min_kbps : cfg.ld_rate_min_kbps,
                           md ? cfg.md_rate_max_kbps : cfg.ld_rate_max_kbps, cfg.rate_steps, sc, cfg.mc_runs,
                           cfg.outage_eps, derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
        Csv csv(dir / (md ? "capacity_md.csv" : "capacity_ld.csv"), Subcommand::Capacity, cfg,
                "rate_kbps,served_moma,served_orthogonal,mc_runs,outage_eps");
        for (std::size_t i = 0; i < curve.target_rates.size(); ++i)
            csv.row("{},{},{},{},{}", curve.target_rates[i], curve.served_counts[i], curve.baseline_counts[i],
                    curve.mc_runs, curve.outage_eps);
    }
}

void run_coverage(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    Csv csv(dir / "coverage.csv", Subcommand::Coverage, cfg,
            "scheme,class,rate_kbps,processing_gain_db,required_snr_db,sensitivity_dbm,mcl_db,mcl_gain_db");
    const int n = cfg.plan.spreading_factor;
    for (auto cls : {UserClass::MD, UserClass::LD})
    {
        const double rate = cfg.plan.target_kbps(cls);
        LinkBudgetInputs in;
        in.tx_power_dbm = cfg.system.tx_power_dbm;
        in.bandwidth_hz = kPrbBandwidthHz;
        in.noise_figure_db = cfg.system.noise_figure_db;
        in.required_snr_db = required_snr_db(rate);
        const auto base = mcl(in);
        struct Scheme
        {
            const char *name;
            double gain_db;
        };
        for (const auto &s : {Scheme{"orthogonal", 0.0}, Scheme{"moma", coverage_gain_db(n, false)},
                              Scheme{"moma_bundled", coverage_gain_db(n, true)}})
        {
            in.processing_gain_db = s.gain_db;
            const auto b = mcl(in);
            csv.row("{},{},{},{},{},{},{},{}", s.name, to_string(cls), rate, b.processing_gain_db, b.required_snr_db,
                    b.sensitivity_dbm, b.mcl_db, b.mcl_db - base.mcl_db);
        }
    }
}

void run_ra(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    const std::uint64_t seed = sub_seed(cfg, Subcommand::Ra);
    Csv csv(dir / "ra.csv", Subcommand::Ra, cfg,
            "scheme,class,arrivals,pool,rounds,analytic_collision_prob,empirical_collision_prob,mean_collided_users,"
            "grants_per_round,broadcasts_per_round");
    for (auto scheme : {RaScheme::ContentionFree, RaScheme::ContentionBased, RaScheme::Hybrid})
    {
        RaConfig rc = cfg.ra;
        rc.scheme = scheme;
        try
        {
            validate(rc);
        }
        catch (const std::invalid_argument &)
        {
            continue; // contention-free access cannot admit this many arrivals
        }
        long long rounds_with_collision[2] = {0, 0};
        long long collided[2] = {0, 0};
        OverheadReport oh = overhead_report(rc);
        for (int r = 0; r < cfg.ra_rounds; ++r)
        {
            rc.seed = derive_seed(seed, {static_cast<std::uint64_t>(scheme), static_cast<std::uint64_t>(r)});
            const auto out = simulate_round(rc);
            for (int c = 0; c < 2; ++c)
            {
                const auto &o = out.of(c == 0 ? UserClass::MD : UserClass::LD);
                rounds_with_collision[c] += o.collision_events > 0;
                collided[c] += o.collided_users;
            }
        }
        for (int c = 0; c < 2; ++c)
        {
            const auto cls = c == 0 ? UserClass::MD : UserClass::LD;
            const int k = c == 0 ? rc.arrivals_md : rc.arrivals_ld;
            const int s = c == 0 ? rc.pool_md : rc.pool_ld;
            const bool free = scheme == RaScheme::ContentionFree || (scheme == RaScheme::Hybrid && c == 0);
            csv.row("{},{},{},{},{},{},{},{},{},{}", to_string(scheme), to_string(cls), k, s, cfg.ra_rounds,
                    free ? 0.0 : collision_prob(k, s),
                    static_cast<double>(rounds_with_collision[c]) / cfg.ra_rounds,
                    static_cast<double>(collided[c]) / cfg.ra_rounds, oh.grants_sent, oh.broadcasts_sent);
        }
    }
}

} // namespace

int run(const ExperimentSpec &spec, std::ostream &log)
{
    ExperimentConfig cfg;
    try
    {
        cfg = resolve(spec);
        const auto v = validate_plan(cfg.system, cfg.plan);
        if (!v.ok())
        {
            log << "invalid configuration:\n" << v.to_string() << '\n';
            return kExitInvalidConfig;
        }
        if (spec.subcommand == Subcommand::Ra)
            validate(RaConfig{cfg.ra.scheme, cfg.ra.pool_md, cfg.ra.pool_ld, cfg.ra.arrivals_md, cfg.ra.arrivals_ld,
                              cfg.master_seed});
        derive_grid(cfg.system, cfg.plan);
    }
    catch (const std::invalid_argument &e)
    {
        log << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    try
    {
        if (spec.subcommand == Subcommand::PrintConfig && spec.output_dir.empty())
        {
            log << cfg.to_ini();
            return kExitOk;
        }
        if (spec.output_dir.empty())
            throw std::runtime_error("an output directory is required");
        std::filesystem::create_directories(spec.output_dir);
        {
            std::ofstream ini(spec.output_dir / "resolved_config.ini", std::ios::binary);
            ini << fmt::format("# moma {} config_hash={:016x} seed={}\n", to_string(spec.subcommand),
                               config_hash(cfg), cfg.master_seed)
                << cfg.to_ini();
        }

        switch (spec.subcommand)
        {
        case Subcommand::Codes:
            run_codes(cfg, spec.output_dir);
            break;
        case Subcommand::Channel:
            run_channel(cfg, spec.output_dir);
            break;
        case Subcommand::Hardening:
            run_hardening(cfg, spec.output_dir);
            break;
        case Subcommand::Tti:
            run_tti(cfg, spec.output_dir);
            break;
        case Subcommand::Capacity:
            run_capacity(cfg, spec.output_dir);
            break;
        case Subcommand::Coverage:
            run_coverage(cfg, spec.output_dir);
            break;
        case Subcommand::Ra:
            run_ra(cfg, spec.output_dir);
            break;
        case Subcommand::PrintConfig:
            log << cfg.to_ini();
            break;
        }
    }
    catch (const std::invalid_argument &e)
    {
        log << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    catch (const std::exception &e)
    {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    log << "moma " << to_string(spec.subcommand) << ": wrote " << spec.output_dir.string() << '\n';
    return kExitOk;
}

} // namespace moma::cli
