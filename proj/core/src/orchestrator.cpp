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

#include "pinch/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pinch
{
    std::string_view to_string(Mode mode)
    {
        switch (mode)
        {
        case Mode::Proposed: return "proposed";
        case Mode::Search: return "search";
        case Mode::CoarseOnly: return "coarse_only";
        case Mode::Sdma: return "sdma";
        case Mode::HybridFrozen: return "hybrid_frozen";
        }
        return "unknown";
    }

    Mode parse_mode(std::string_view name)
    {
        for (Mode m : all_modes())
            if (to_string(m) == name)
                return m;
        throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
    }

    const std::vector<Mode> &all_modes()
    {
        static const std::vector<Mode> modes = {Mode::Proposed, Mode::Search, Mode::CoarseOnly, Mode::Sdma,
                                                Mode::HybridFrozen};
        return modes;
    }

    namespace
    {
        struct Iterate
        {
            PaState pa;
            BeamformingResult bf;
        };

        void store(SolveResult &out, const Iterate &it)
        {
            out.pa = it.pa;
            out.bf = it.bf.bf;
            out.lag = it.bf.lag;
            out.report = it.bf.report;
            out.qos_satisfied = it.bf.qos_satisfied;
            out.unconstrained_power = it.bf.unconstrained_power;
        }

        // Better iterate: QoS-satisfying first, then higher sum rate.
        bool improves(const BeamformingResult &cand, const SolveResult &best, double tol)
        {
            if (cand.qos_satisfied != best.qos_satisfied)
                return cand.qos_satisfied;
            return cand.report.sum_rate > best.report.sum_rate + tol;
        }
    }

    SolveResult solve(const Scenario &scenario, const SolverConfig &cfg, Mode mode)
    {
        const auto started = std::chrono::steady_clock::now();
        scenario.validate();
        cfg.placement.validate(scenario);
        cfg.beamformer.validate();

        BeamformingOptions opts;
        opts.common_stream = mode != Mode::Sdma;

        SolveResult out;
        out.mode = mode;

        Iterate current;
        current.pa = mode == Mode::HybridFrozen ? centered_placement(scenario) : coarse_placement(scenario, cfg.placement);
        ChannelSet channels = build_channels(scenario, current.pa);
        current.bf = design_beamforming(channels, scenario, cfg.beamformer, opts);
        store(out, current);
        out.trace.push_back(current.bf.report.sum_rate);
        out.best_trace.push_back(current.bf.report.sum_rate);

        const bool iterate = mode == Mode::Proposed || mode == Mode::Search || mode == Mode::Sdma;
        std::size_t stale = 0;
        bool stopped_by_patience = !iterate;
        // The starting iterate counts as the first outer iteration.
        for (std::size_t it = 1; iterate && it < cfg.placement.max_outer_iters; ++it)
        {
            if (mode == Mode::Search)
                current.pa = search_placement_pass(scenario, current.pa, current.bf.bf, cfg.placement, channels);
            else
                current.pa = fine_placement_pass(scenario, current.pa, current.bf.bf, cfg.placement, channels);

            current.bf = design_beamforming(channels, scenario, cfg.beamformer, opts,
                                            WarmStart{current.bf.bf, current.bf.lag, current.bf.unconstrained_power});
            // Multipliers inherited from the old layout can leave users starved after a move.
            if (!current.bf.qos_satisfied)
            {
                BeamformingResult cold = design_beamforming(channels, scenario, cfg.beamformer, opts);
                if (cold.qos_satisfied || cold.report.sum_rate > current.bf.report.sum_rate)
                    current.bf = std::move(cold);
            }
            const double rate = current.bf.report.sum_rate;
            out.trace.push_back(rate);

            if (improves(current.bf, out, cfg.placement.outer_tol))
            {
                stale = 0;
                store(out, current);
                out.best_iteration = it;
            }
            else
            {
                if (improves(current.bf, out, 0.0))
                {
                    store(out, current);
                    out.best_iteration = it;
                }
                ++stale;
            }
            out.best_trace.push_back(std::max(out.best_trace.back(), out.report.sum_rate));
            if (stale >= cfg.placement.patience)
            {
                stopped_by_patience = true;
                break;
            }
        }

        const auto violations = layout_violations(scenario, out.pa);
        if (!violations.empty())
            out.diagnostic = "layout violation: " + violations.front();
        else if (!out.qos_satisfied)
            out.diagnostic = "QoS infeasible: minimum user rate " + std::to_string(out.report.min_user_rate()) +
                             " below R_min " + std::to_string(scenario.r_min);
        else if (!stopped_by_patience)
            out.diagnostic = "outer iteration cap reached";
        out.converged = stopped_by_patience && out.qos_satisfied && violations.empty();
        out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return out;
    }

    std::vector<double> repair_spacing(std::vector<double> x, double d_min, double region_size)
    {
        const std::size_t n = x.size();
        if (n == 0)
            return x;
        const double top = region_size - static_cast<double>(n - 1) * d_min;
        if (top < 0.0)
            throw std::invalid_argument("PAs cannot fit the waveguide at the minimum spacing");

        // y_i = x_i - i d_min must be non-decreasing within [0, top]: isotonic regression (pool
        // adjacent violators) followed by clipping gives the Euclidean projection.
        std::vector<double> value;
        std::vector<std::size_t> count;
        for (std::size_t i = 0; i < n; ++i)
        {
            value.push_back(x[i] - static_cast<double>(i) * d_min);
            count.push_back(1);
            while (value.size() > 1 && value[value.size() - 2] > value.back())
            {
                const std::size_t c = count.back() + count[count.size() - 2];
                const double v = (value.back() * count.back() + value[value.size() - 2] * count[count.size() - 2]) / c;
                value.pop_back();
                count.pop_back();
                value.back() = v;
                count.back() = c;
            }
        }
        std::size_t i = 0;
        for (std::size_t b = 0; b < value.size(); ++b)
            for (std::size_t c = 0; c < count[b]; ++c, ++i)
                x[i] = std::clamp(value[b], 0.0, top) + static_cast<double>(i) * d_min;
        return x;
    }

    PaState perturb_positions(const Scenario &scenario, const PaState &pa, double sigma, std::uint64_t seed)
    {
        if (!(sigma >= 0.0))
            throw std::invalid_argument("position noise must be non-negative");
        if (sigma == 0.0)
            return pa;
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, sigma);
        PaState out = pa;
        for (std::size_t m = 0; m < out.num_guides(); ++m)
        {
            auto g = out.guide(m);
            for (auto &x : g)
                x = std::clamp(x + noise(rng), 0.0, scenario.region_size);
            out.guide(m) = repair_spacing(std::move(g), scenario.min_spacing, scenario.region_size);
        }
        return out;
    }

    RateReport evaluate_with_mismatch(const SolveResult &result, const ChannelSet &perturbed, double noise)
    {
        RateReport rep = rate_report(perturbed, result.bf, std::nullopt, noise);
        rep.r_alloc = result.report.r_alloc;
        for (std::size_t l = 0; l < rep.rc_cap.size(); ++l)
        {
            const double total = std::accumulate(rep.r_alloc[l].begin(), rep.r_alloc[l].end(), 0.0);
            if (total > rep.rc_cap[l] && total > 0.0)
                for (auto &r : rep.r_alloc[l])
                    r *= rep.rc_cap[l] / total;
        }
        rep.allocation_feasible = true;
        return rep;
    }
}
