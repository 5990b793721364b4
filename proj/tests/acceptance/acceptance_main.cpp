// pinch: multi-carrier pinching-antenna RSMA simulation library
// Copyright (C) 2026 The pinch authors
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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.
// Pass criterion numbers as arguments to run a subset.

#include "pinch/beamforming.hpp"
#include "pinch/placement.hpp"
#include "pinch/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace pinch;

namespace
{
    using Clock = std::chrono::steady_clock;

    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    constexpr std::size_t kDrops = 20;
    constexpr std::uint64_t kSeedBase = 1;

    // Random beamformers with total power p.
    BeamformingState random_bf(std::mt19937_64 &rng, std::size_t L, std::size_t K, std::size_t M, double p)
    {
        std::normal_distribution<double> nd;
        auto bf = BeamformingState::zeros(L, K, M);
        auto fill = [&](CVector &v)
        {
            for (auto &z : v)
                z = Complex(nd(rng), nd(rng));
        };
        for (std::size_t l = 0; l < L; ++l)
        {
            fill(bf.common[l]);
            for (auto &w : bf.priv[l])
                fill(w);
        }
        const double s = std::sqrt(p / bf.total_power());
        for (std::size_t l = 0; l < L; ++l)
        {
            bf.common[l] *= s;
            for (auto &w : bf.priv[l])
                w *= s;
        }
        return bf;
    }

    // Default drop with the antennas scattered away from the coarse layout.
    std::pair<Scenario, ChannelSet> random_state(std::uint64_t seed)
    {
        const Scenario s = generate_drop(ScenarioTemplate{}, seed);
        const PaState pa = perturb_positions(s, coarse_placement(s, PlacementConfig{}), 1.0, seed);
        return {s, build_channels(s, pa)};
    }

    Outcome tightness()
    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(2024);
        double worst_aux = 0.0, worst_qt = 0.0;
        std::size_t terms = 0;
        for (std::uint64_t i = 0; i < 1000; ++i)
        {
            const auto [s, ch] = random_state(10000 + i);
            const auto bf = random_bf(rng, s.num_carriers(), s.num_users(), s.num_waveguides(), s.p_max);
            for (std::size_t l = 0; l < s.num_carriers(); ++l)
                for (std::size_t k = 0; k < s.num_users(); ++k)
                    for (Stream st : {Stream::Private, Stream::Common})
                    {
                        const CVector &h = ch.at(l, k);
                        const double g = st == Stream::Private ? sinr_private(h, bf, l, k, s.noise_power)
                                                               : sinr_common(h, bf, l, k, s.noise_power);
                        const double a = optimal_alpha(g);
                        worst_aux = std::max(worst_aux, std::abs(auxiliary_surrogate(a, g) - std::log2(1.0 + g)));
                        const Complex xi = optimal_xi(st, h, bf, a, s.noise_power, l, k);
                        const double frac = fractional_form(st, h, bf, a, s.noise_power, l, k);
                        const double qt = quadratic_surrogate(st, h, bf, a, xi, s.noise_power, l, k);
                        worst_qt = std::max(worst_qt, std::abs(qt - frac) / std::max(std::abs(frac), 1e-300));
                        ++terms;
                    }
        }
        const double secs = seconds_since(t0);
        return {worst_aux <= 1e-9 && worst_qt <= 1e-9 && secs < 5.0,
                fmt("%zu terms, max |aux - log2(1+g)| = %.2e, max rel quadratic gap = %.2e, %.2f s", terms, worst_aux,
                    worst_qt, secs)};
    }

    Outcome stationarity()
    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        double worst = 0.0;
        std::size_t vectors = 0;
        for (std::uint64_t i = 0; i < 200; ++i)
        {
            const auto [s, ch] = random_state(20000 + i);
            const auto L = s.num_carriers(), K = s.num_users();
            const auto bf = random_bf(rng, L, K, s.num_waveguides(), s.p_max);
            const auto aux = update_auxiliaries(ch, bf, s.noise_power);
            auto lag = LagrangeState::initial(L, K);
            for (auto &row : lag.lambda_com)
                for (auto &v : row)
                    v = u(rng);
            for (auto &v : lag.eta_qos)
                v = u(rng);
            for (auto &v : lag.zeta_alloc)
                v = u(rng);
            const double mu = bisect_mu(ch, lag, aux, s.p_max, BeamformerConfig{}).mu;
            const CVector zero = CVector::Zero(static_cast<Eigen::Index>(s.num_waveguides()));
            for (std::size_t l = 0; l < L; ++l)
            {
                const auto &hl = ch.carrier(l);
                const CVector wc = common_beamformer(hl, lag, aux, mu, l);
                worst = std::max(worst, lagrangian_gradient_common(hl, lag, aux, mu, l, wc).norm() /
                                            lagrangian_gradient_common(hl, lag, aux, mu, l, zero).norm());
                ++vectors;
                for (std::size_t k = 0; k < K; ++k)
                {
                    const CVector wp = private_beamformer(hl, lag, aux, mu, l, k);
                    worst = std::max(worst, lagrangian_gradient_private(hl, lag, aux, mu, l, k, wp).norm() /
                                                lagrangian_gradient_private(hl, lag, aux, mu, l, k, zero).norm());
                    ++vectors;
                }
            }
        }
        const double secs = seconds_since(t0);
        return {worst <= 1e-8 && secs < 5.0,
                fmt("%zu closed-form vectors, max relative gradient %.2e, %.2f s", vectors, worst, secs)};
    }

    // Solves shared by the power and constraint checks.
    struct Batch
    {
        std::vector<std::pair<Scenario, SolveResult>> solves;
    };

    const Batch &batch()
    {
        static const Batch b = []
        {
            Batch out;
            std::vector<ScenarioTemplate> templates;
            for (double p : {10.0, 15.0, 20.0, 25.0})
            {
                ScenarioTemplate t;
                t.p_max_dbm = p;
                templates.push_back(t);
            }
            ScenarioTemplate dense;
            dense.num_users = 6;
            dense.pas_per_guide = 4;
            dense.r_min = 0.5;
            templates.push_back(dense);
            ScenarioTemplate wide;
            wide.num_waveguides = 3;
            wide.feed_y.clear();
            wide.region_size = 9.0;
            templates.push_back(wide);
            for (const auto &t : templates)
                for (std::uint64_t d = 0; d < kDrops; ++d)
                {
                    const Scenario s = generate_drop(t, kSeedBase + d);
                    for (Mode m : all_modes())
                        out.solves.emplace_back(s, solve(s, SolverConfig{}, m));
                }
            return out;
        }();
        return b;
    }

    Outcome power_feasibility()
    {
        std::size_t over = 0, loose = 0, active = 0;
        double worst_ratio = 0.0, lowest_active = 1e300;
        for (const auto &[s, r] : batch().solves)
        {
            const double p = r.bf.total_power();
            worst_ratio = std::max(worst_ratio, p / s.p_max);
            if (p > s.p_max)
                ++over;
            if (r.unconstrained_power > s.p_max)
            {
                ++active;
                lowest_active = std::min(lowest_active, p / s.p_max);
                if (p < 0.999 * s.p_max)
                    ++loose;
            }
        }
        return {over == 0 && loose == 0,
                fmt("%zu solves, max P/P_max = %.6f, %zu power-limited with min P/P_max = %.6f, %zu over budget, "
                    "%zu below 0.999 P_max",
                    batch().solves.size(), worst_ratio, active, lowest_active, over, loose)};
    }

    Outcome placement_oracle()
    {
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed)
        {
            ScenarioTemplate t;
            t.num_users = t.num_waveguides = t.pas_per_guide = t.num_carriers = 1;
            t.feed_y = {0.0};
            const Scenario s = generate_drop(t, seed);
            const SolverConfig cfg;
            const auto r = solve(s, cfg, Mode::Proposed);
            // With one antenna and one user the best beamformer spends the whole budget on the
            // only stream, so the optimal rate for a position is log2(1 + P |h|^2 / noise).
            const double step = cfg.placement.search_step / 10.0;
            double oracle = 0.0;
            const auto points = static_cast<std::size_t>(std::llround(s.region_size / step));
            for (std::size_t i = 0; i <= points; ++i)
            {
                const double x = std::min(s.region_size, i * step);
                oracle = std::max(oracle, std::log2(1.0 + s.p_max * std::norm(pa_term(s, 0, x, 0, 0)) / s.noise_power));
            }
            worst = std::max(worst, (oracle - r.report.sum_rate) / oracle);
        }
        return {worst <= 0.01, fmt("50 seeds, worst shortfall vs exhaustive grid %.4f%%", 100.0 * worst)};
    }

    SweepResult sweep(const std::string &param, std::vector<double> values, std::vector<Mode> modes,
                      const ExperimentConfig &base = default_config())
    {
        SweepSpec spec;
        spec.base = base;
        spec.param = param;
        spec.values = std::move(values);
        spec.modes = std::move(modes);
        spec.drops = kDrops;
        spec.seed_base = kSeedBase;
        return run_sweep(spec);
    }

    double mean_of(const SweepResult &r, double value, Mode mode)
    {
        for (const auto &row : r.rows)
            if (row.value == value && row.mode == mode)
                return row.mean_sum_rate;
        return std::nan("");
    }

    bool all_ok(const SweepResult &r)
    {
        return std::all_of(r.rows.begin(), r.rows.end(), [](const SweepRow &row) { return row.status == "ok"; });
    }

    Outcome power_ordering()
    {
        const auto t0 = Clock::now();
        const std::vector<double> powers{10.0, 15.0, 20.0, 25.0};
        const auto r = sweep("P_max", powers, all_modes());
        const double secs = seconds_since(t0);
        bool pass = all_ok(r) && secs < 600.0;
        std::ostringstream d;
        for (double p : powers)
        {
            const double pr = mean_of(r, p, Mode::Proposed), se = mean_of(r, p, Mode::Search),
                         co = mean_of(r, p, Mode::CoarseOnly), sd = mean_of(r, p, Mode::Sdma),
                         hy = mean_of(r, p, Mode::HybridFrozen);
            const bool ok = pr >= se && se >= co && pr >= sd && pr >= hy && (p != 25.0 || pr > co);
            pass = pass && ok;
            d << fmt("%g dBm: prop %.3f search %.3f coarse %.3f sdma %.3f hybrid %.3f%s; ", p, pr, se, co, sd, hy,
                     ok ? "" : " [order broken]");
        }
        d << fmt("%.1f s", secs);
        return {pass, d.str()};
    }

    Outcome convergence()
    {
        ExperimentConfig cfg = default_config();
        std::size_t monotone = 0, stable = 0;
        std::size_t min_len = 1000;
        for (std::uint64_t d = 0; d < kDrops; ++d)
        {
            const auto trace = run_convergence(cfg, kSeedBase + d, Mode::Proposed);
            min_len = std::min(min_len, trace.size());
            bool mono = true;
            for (std::size_t i = 1; i < trace.size(); ++i)
                mono = mono && trace[i].best_so_far >= trace[i - 1].best_so_far;
            monotone += mono;
            // Band check on the last 20 outer iterations.
            const std::size_t w = std::min<std::size_t>(20, trace.size());
            double centre = 0.0;
            for (std::size_t i = trace.size() - w; i < trace.size(); ++i)
                centre += trace[i].sum_rate;
            centre /= static_cast<double>(w);
            bool in_band = true;
            for (std::size_t i = trace.size() - w; i < trace.size(); ++i)
                in_band = in_band && std::abs(trace[i].sum_rate - centre) <= 0.02 * centre;
            stable += in_band;
        }
        return {monotone == kDrops && stable * 10 >= 9 * kDrops && min_len == 100,
                fmt("best-so-far monotone on %zu/%zu seeds, raw trace within +-2%% over iterations 81-100 on %zu/%zu",
                    monotone, kDrops, stable, kDrops)};
    }

    Outcome robustness()
    {
        ExperimentConfig cfg = default_config();
        cfg.sigma_pos = cfg.resolved_sigma_pos();
        double deg_rsma = 0.0, deg_sdma = 0.0;
        std::size_t used = 0;
        for (std::uint64_t d = 0; d < kDrops; ++d)
        {
            const auto a = evaluate_drop(cfg, kSeedBase + d, Mode::Proposed);
            const auto b = evaluate_drop(cfg, kSeedBase + d, Mode::Sdma);
            if (!a.ok || !b.ok)
                continue;
            deg_rsma += (a.nominal_sum_rate - a.sum_rate) / a.nominal_sum_rate;
            deg_sdma += (b.nominal_sum_rate - b.sum_rate) / b.nominal_sum_rate;
            ++used;
        }
        deg_rsma /= static_cast<double>(used);
        deg_sdma /= static_cast<double>(used);
        return {used == kDrops && deg_rsma <= deg_sdma,
                fmt("sigma_pos = %.3g m, mean relative degradation RSMA %.2f%%, SDMA %.2f%% over %zu drops",
                    *cfg.sigma_pos, 100.0 * deg_rsma, 100.0 * deg_sdma, used)};
    }

    Outcome antenna_count()
    {
        const std::vector<double> ns{2.0, 3.0, 4.0, 5.0};
        const auto r = sweep("N", ns, {Mode::Proposed, Mode::CoarseOnly});
        std::size_t breaks = 0;
        std::ostringstream d;
        for (std::size_t i = 0; i < ns.size(); ++i)
        {
            d << fmt("N=%g prop %.3f coarse %.3f; ", ns[i], mean_of(r, ns[i], Mode::Proposed),
                     mean_of(r, ns[i], Mode::CoarseOnly));
            if (i > 0 && mean_of(r, ns[i], Mode::Proposed) < mean_of(r, ns[i - 1], Mode::Proposed))
                ++breaks;
        }
        const double gain_p = mean_of(r, 5.0, Mode::Proposed) - mean_of(r, 2.0, Mode::Proposed);
        const double gain_c = mean_of(r, 5.0, Mode::CoarseOnly) - mean_of(r, 2.0, Mode::CoarseOnly);
        d << fmt("non-monotone pairs %zu, gain 2->5 prop %.3f coarse %.3f", breaks, gain_p, gain_c);
        return {all_ok(r) && breaks <= 1 && gain_c < gain_p, d.str()};
    }

    Outcome region_size()
    {
        const std::vector<double> ds{6.0, 9.0, 12.0};
        const auto r = sweep("D", ds, all_modes());
        bool pass = all_ok(r);
        std::ostringstream d;
        for (Mode m : all_modes())
        {
            bool dec = true;
            for (std::size_t i = 1; i < ds.size(); ++i)
                dec = dec && mean_of(r, ds[i], m) < mean_of(r, ds[i - 1], m);
            pass = pass && dec;
            d << fmt("%s %.3f/%.3f/%.3f%s; ", std::string(to_string(m)).c_str(), mean_of(r, 6.0, m), mean_of(r, 9.0, m),
                     mean_of(r, 12.0, m), dec ? "" : " [not decreasing]");
        }
        std::vector<double> gap;
        for (double v : ds)
            gap.push_back(mean_of(r, v, Mode::Proposed) - mean_of(r, v, Mode::HybridFrozen));
        const bool widens = gap[1] > gap[0] && gap[2] > gap[1];
        d << fmt("gap prop-hybrid %.3f/%.3f/%.3f", gap[0], gap[1], gap[2]);
        return {pass && widens, d.str()};
    }

    Outcome step_sensitivity()
    {
        std::map<double, double> sens;
        std::ostringstream d;
        for (double fc : {28.0e9, 10.0e9})
        {
            ExperimentConfig cfg = default_config();
            cfg.scenario.center_frequency_hz = fc;
            const auto r = sweep("delta", {0.001, 0.005}, {Mode::Proposed}, cfg);
            const double fine = mean_of(r, 0.001, Mode::Proposed), coarse = mean_of(r, 0.005, Mode::Proposed);
            sens[fc] = std::abs(coarse - fine);
            d << fmt("%g GHz: step 1 mm %.3f, 5 mm %.3f, |diff| %.3f; ", fc / 1e9, fine, coarse, sens[fc]);
        }
        return {sens[28.0e9] > sens[10.0e9], d.str()};
    }

    Outcome constraints()
    {
        std::size_t layout = 0, alloc = 0, qos = 0, silent = 0, feasible = 0, infeasible = 0;
        for (const auto &[s, r] : batch().solves)
        {
            if (!layout_violations(s, r.pa).empty())
                ++layout;
            for (std::size_t l = 0; l < s.num_carriers(); ++l)
            {
                double sum = 0.0;
                for (double v : r.report.r_alloc[l])
                    sum += v;
                if (sum > r.report.rc_cap[l] + 1e-9)
                    ++alloc;
            }
            const bool short_rate = r.report.min_user_rate() < s.r_min - 1e-3;
            if (r.qos_satisfied)
            {
                ++feasible;
                qos += short_rate;
            }
            else
            {
                ++infeasible;
                if (r.converged || r.diagnostic.empty())
                    ++silent;
            }
            if (short_rate && r.qos_satisfied)
                ++silent;
        }
        return {layout == 0 && alloc == 0 && qos == 0 && silent == 0,
                fmt("%zu solves (%zu QoS-feasible, %zu reported infeasible): layout %zu, allocation %zu, "
                    "QoS %zu, silent %zu violations",
                    batch().solves.size(), feasible, infeasible, layout, alloc, qos, silent)};
    }

    // A fixed state whose refinement pass (projections plus refine_pa on every PA) is timed.
    struct RefineFixture
    {
        Scenario s;
        PlacementConfig cfg;
        PaState pa;
        ChannelSet ch;
        BeamformingState bf;
        AuxiliaryState aux;

        RefineFixture(const ScenarioTemplate &t, double span)
            : s(generate_drop(t, 5))
        {
            cfg.search_span = span;
            // Wide enough that neighbours never clip a PA's candidate grid.
            cfg.inter_pa_spacing = span + s.min_spacing + cfg.search_step;
            pa = coarse_placement(s, cfg);
            ch = build_channels(s, pa);
            std::mt19937_64 rng(3);
            bf = random_bf(rng, s.num_carriers(), s.num_users(), s.num_waveguides(), s.p_max);
            aux = update_auxiliaries(ch, bf, s.noise_power);
        }

        double pass() const
        {
            double sink = 0.0;
            const StreamProjections proj(ch, bf);
            for (std::size_t m = 0; m < s.num_waveguides(); ++m)
                for (std::size_t n = 0; n < s.pas_per_guide; ++n)
                    sink += refine_pa(s, pa, ch, bf, aux, proj, m, n, cfg).x;
            return sink;
        }
    };

    Outcome complexity()
    {
        const std::vector<double> sizes{1, 2, 4, 6, 8};
        const std::vector<double> counts{11, 21, 41, 61, 81};
        const double step = PlacementConfig{}.search_step;
        const double span = 20 * step;
        const auto base = []
        {
            ScenarioTemplate t;
            t.feed_y.clear();
            return t;
        };
        struct Axis
        {
            const char *name;
            std::vector<double> values;
            std::vector<RefineFixture> fixtures;
            std::vector<double> best;
        };
        std::vector<Axis> axes{{"M", sizes, {}, {}}, {"N", sizes, {}, {}}, {"K", sizes, {}, {}},
                               {"L", sizes, {}, {}}, {"candidates", counts, {}, {}}};
        for (double v : sizes)
        {
            const auto n = static_cast<std::size_t>(v);
            auto t = base();
            t.num_waveguides = n;
            axes[0].fixtures.emplace_back(t, span);
            t = base();
            t.pas_per_guide = n;
            axes[1].fixtures.emplace_back(t, span);
            t = base();
            t.num_users = n;
            axes[2].fixtures.emplace_back(t, span);
            t = base();
            t.num_carriers = n;
            axes[3].fixtures.emplace_back(t, span);
        }
        for (double v : counts)
            axes[4].fixtures.emplace_back(base(), (v - 1) * step);

        // Interleaved rounds, best per point, so a slow spell cannot bend one curve.
        volatile double sink = 0.0;
        for (auto &axis : axes)
            axis.best.assign(axis.values.size(), 1e300);
        for (int round = 0; round < 15; ++round)
            for (auto &axis : axes)
                for (std::size_t i = 0; i < axis.fixtures.size(); ++i)
                {
                    const auto &f = axis.fixtures[i];
                    constexpr int reps = 20;
                    const auto t0 = Clock::now();
                    for (int r = 0; r < reps; ++r)
                        sink = sink + f.pass();
                    axis.best[i] = std::min(axis.best[i], seconds_since(t0) / reps);
                }

        bool pass = true;
        std::ostringstream d;
        for (const auto &axis : axes)
        {
            const std::vector<double> &t = axis.best;
            // Least-squares line and its worst relative residual.
            const double n = static_cast<double>(t.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                sx += axis.values[i];
                sy += t[i];
                sxx += axis.values[i] * axis.values[i];
                sxy += axis.values[i] * t[i];
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double icept = (sy - slope * sx) / n;
            double worst = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                const double fit = icept + slope * axis.values[i];
                worst = std::max(worst, std::abs(t[i] - fit) / t[i]);
            }
            const bool ok = slope > 0.0 && worst <= 0.25;
            pass = pass && ok;
            d << fmt("%s: %.1f..%.1f us, residual %.0f%%%s; ", axis.name, 1e6 * t.front(), 1e6 * t.back(), 100.0 * worst,
                     ok ? "" : " [not linear]");
        }
        return {pass, d.str()};
    }
}

int main(int argc, char **argv)
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"algebraic tightness", tightness},
        {"closed-form stationarity", stationarity},
        {"power feasibility", power_feasibility},
        {"placement oracle equivalence", placement_oracle},
        {"sum rate vs transmit power ordering", power_ordering},
        {"convergence behaviour", convergence},
        {"robustness to antenna position error", robustness},
        {"sum rate vs antennas per guide", antenna_count},
        {"sum rate vs region size", region_size},
        {"step-length sensitivity vs frequency", step_sensitivity},
        {"constraint suite", constraints},
        {"refinement complexity scaling", complexity},
    };
    std::set<std::size_t> only;
    for (int i = 1; i < argc; ++i)
        only.insert(static_cast<std::size_t>(std::stoul(argv[i])));

    std::size_t failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const std::size_t id = i + 1;
        if (!only.empty() && !only.count(id))
            continue;
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
