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

#include "pinch/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pinch
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;
        constexpr double kSpacingSlack = 1e-12;
    }

    double wrap_angle(double radians)
    {
        double r = std::remainder(radians, 2.0 * kPi);
        if (r <= -kPi)
            r += 2.0 * kPi;
        return r;
    }

    double coarse_center(const Scenario &scenario, std::size_t m)
    {
        if (m >= scenario.num_waveguides())
            throw std::out_of_range("waveguide index out of range");
        if (scenario.users.empty())
            throw std::invalid_argument("coarse placement needs at least one user");
        // y and z offsets are constant in x, so each guide has the same minimiser.
        double mean = 0.0;
        for (const auto &u : scenario.users)
            mean += u.x;
        mean /= static_cast<double>(scenario.users.size());
        return std::clamp(mean, 0.0, scenario.region_size);
    }

    std::vector<double> layout_pas(double center_x, std::size_t n, double spacing, double d_min, double region_size)
    {
        if (n == 0)
            throw std::invalid_argument("layout needs at least one PA");
        if (spacing < d_min * (1.0 - 1e-12))
            throw std::invalid_argument("inter-PA spacing below the minimum spacing");
        if (static_cast<double>(n) * spacing > region_size)
            throw std::invalid_argument("N PAs at the requested spacing do not fit on the waveguide");

        std::vector<double> x(n);
        const double mid = 0.5 * static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = center_x + (static_cast<double>(i) - mid) * spacing;
        double shift = 0.0;
        if (x.front() < 0.0)
            shift = -x.front();
        else if (x.back() > region_size)
            shift = region_size - x.back();
        for (auto &v : x)
            v = std::clamp(v + shift, 0.0, region_size);
        return x;
    }

    PaState coarse_placement(const Scenario &scenario, const PlacementConfig &cfg)
    {
        cfg.validate(scenario);
        PaState pa(scenario.num_waveguides(), scenario.pas_per_guide);
        const double spacing = cfg.resolved_inter_pa_spacing(scenario);
        for (std::size_t m = 0; m < scenario.num_waveguides(); ++m)
            pa.guide(m) = layout_pas(coarse_center(scenario, m), scenario.pas_per_guide, spacing,
                                     scenario.min_spacing, scenario.region_size);
        return pa;
    }

    PaState centered_placement(const Scenario &scenario)
    {
        PaState pa(scenario.num_waveguides(), scenario.pas_per_guide);
        for (std::size_t m = 0; m < scenario.num_waveguides(); ++m)
            pa.guide(m) = layout_pas(0.5 * scenario.region_size, scenario.pas_per_guide, scenario.min_spacing,
                                     scenario.min_spacing, scenario.region_size);
        return pa;
    }

    StreamProjections::StreamProjections(const ChannelSet &channels, const BeamformingState &bf)
        : users_(channels.num_users())
    {
        proj_.reserve(channels.num_carriers() * users_);
        for (std::size_t l = 0; l < channels.num_carriers(); ++l)
            for (std::size_t k = 0; k < users_; ++k)
            {
                const CVector &h = channels.at(l, k);
                CVector g(static_cast<Eigen::Index>(users_ + 1));
                for (std::size_t i = 0; i < users_; ++i)
                    g(static_cast<Eigen::Index>(i)) = bf.priv[l][i].dot(h);
                g(static_cast<Eigen::Index>(users_)) = bf.common[l].dot(h);
                proj_.push_back(std::move(g));
            }
    }

    void StreamProjections::shift(const BeamformingState &bf, std::size_t l, std::size_t k, std::size_t m, Complex delta)
    {
        CVector &g = proj_.at(l * users_ + k);
        const auto slot = static_cast<Eigen::Index>(m);
        for (std::size_t i = 0; i < users_; ++i)
            g(static_cast<Eigen::Index>(i)) += std::conj(bf.priv[l][i](slot)) * delta;
        g(static_cast<Eigen::Index>(users_)) += std::conj(bf.common[l](slot)) * delta;
    }

    QTerms q_terms(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                   const BeamformingState &bf, const AuxiliaryState &aux,
                   std::size_t l, std::size_t k, std::size_t m, std::size_t n)
    {
        return q_terms(scenario, pa, channels, bf, aux, StreamProjections(channels, bf), l, k, m, n);
    }

    QTerms q_terms(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                   const BeamformingState &bf, const AuxiliaryState &aux, const StreamProjections &proj,
                   std::size_t l, std::size_t k, std::size_t m, std::size_t n)
    {
        const auto K = scenario.num_users();
        const auto slot = static_cast<Eigen::Index>(m);
        const Complex term = pa_term(scenario, m, pa.at(m, n), l, k);
        const double d = std::abs(term);
        // Part of entry m carried by this PA; with one PA per guide that is the whole entry.
        const Complex own = scenario.pas_per_guide == 1 ? channels.at(l, k)(slot)
                                                        : term / std::sqrt(static_cast<double>(scenario.pas_per_guide));

        // Row m of W_p = sum_i w_i w_i^H applied to the residual channel, via w_i^H h.
        const CVector &g = proj.at(l, k);
        Complex wp_h{0.0, 0.0};
        double wp_mm = 0.0;
        for (std::size_t i = 0; i < K; ++i)
        {
            const Complex wi = bf.priv[l][i](slot);
            wp_h += wi * g(static_cast<Eigen::Index>(i));
            wp_mm += std::norm(wi);
        }
        const Complex wc = bf.common[l](slot);
        const Complex wc_h = wp_h + wc * g(static_cast<Eigen::Index>(K));
        const double wc_mm = wp_mm + std::norm(wc);
        const Complex wp_res = wp_h - wp_mm * own;
        const Complex wc_res = wc_h - wc_mm * own;

        const Complex xi_p = aux.xi_p[l][k];
        const Complex xi_c = aux.xi_c[l][k];
        QTerms q;
        q.q_p = d * (std::sqrt(1.0 + aux.alpha_p[l][k]) * bf.priv[l][k](slot) * std::conj(xi_p) + std::norm(xi_p) * wp_res);
        q.q_c = d * (std::sqrt(1.0 + aux.alpha_c[l][k]) * wc * std::conj(xi_c) + std::norm(xi_c) * wc_res);
        q.wp_mm = d * d * wp_mm;
        q.wc_mm = d * d * wc_mm;
        return q;
    }

    PhaseTarget optimal_phase(Complex q_p, Complex q_c, Complex xi_p, Complex xi_c,
                              double wp_mm, double wc_mm, std::size_t num_users)
    {
        const Complex combined = q_p * std::norm(xi_p) * wp_mm +
                                 q_c * std::norm(xi_c) * wc_mm / static_cast<double>(num_users);
        if (combined == Complex{0.0, 0.0} || !std::isfinite(std::abs(combined)))
            return {0.0, true};
        return {std::arg(combined), false};
    }

    double actual_phase(double x, const Waveguide &guide, const Position3D &user, double wavelength)
    {
        return wrap_angle(-2.0 * kPi * fractional_cycles(guide, x, user, kSpeedOfLight / wavelength));
    }

    PhaseTargets phase_targets(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                               const BeamformingState &bf, const AuxiliaryState &aux, std::size_t m, std::size_t n)
    {
        return phase_targets(scenario, pa, channels, bf, aux, StreamProjections(channels, bf), m, n);
    }

    PhaseTargets phase_targets(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                               const BeamformingState &bf, const AuxiliaryState &aux,
                               const StreamProjections &proj, std::size_t m, std::size_t n)
    {
        const auto L = scenario.num_carriers();
        const auto K = scenario.num_users();
        if (m >= scenario.num_waveguides() || n >= scenario.pas_per_guide)
            throw std::out_of_range("PA index out of range");
        PhaseTargets t{make_grid<double>(L, K), make_grid<char>(L, K)};
        for (std::size_t l = 0; l < L; ++l)
        {
            for (std::size_t k = 0; k < K; ++k)
            {
                const QTerms q = q_terms(scenario, pa, channels, bf, aux, proj, l, k, m, n);
                const PhaseTarget target = optimal_phase(q.q_p, q.q_c, aux.xi_p[l][k], aux.xi_c[l][k], q.wp_mm, q.wc_mm, K);
                t.angle[l][k] = target.angle;
                t.active[l][k] = target.degenerate ? 0 : 1;
            }
        }
        return t;
    }

    double phase_error_objective(double x, const PhaseTargets &targets, const Scenario &scenario, std::size_t m)
    {
        const Waveguide &guide = scenario.waveguides.at(m);
        double total = 0.0;
        for (std::size_t l = 0; l < targets.angle.size(); ++l)
        {
            const double f = scenario.carriers.frequency(l);
            for (std::size_t k = 0; k < targets.angle[l].size(); ++k)
                if (targets.active[l][k])
                {
                    const double actual = -2.0 * kPi * fractional_cycles(guide, x, scenario.users[k], f);
                    total += std::abs(wrap_angle(actual - targets.angle[l][k]));
                }
        }
        return total;
    }

    std::vector<double> candidate_grid(const Scenario &scenario, const PaState &pa, std::size_t m, std::size_t n,
                                       const PlacementConfig &cfg)
    {
        const auto &g = pa.guide(m);
        const double x0 = g.at(n);
        const double step = cfg.search_step;
        const auto half = static_cast<long>(std::floor(0.5 * cfg.resolved_span() / step + 1e-9));
        const double lo = n > 0 ? g[n - 1] + scenario.min_spacing - kSpacingSlack : -kSpacingSlack;
        const double hi = n + 1 < g.size() ? g[n + 1] - scenario.min_spacing + kSpacingSlack : scenario.region_size + kSpacingSlack;

        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(2 * half + 1));
        const auto admit = [&](long i)
        {
            const double x = x0 + static_cast<double>(i) * step;
            if (x >= std::max(lo, -kSpacingSlack) && x <= std::min(hi, scenario.region_size + kSpacingSlack))
                out.push_back(std::clamp(x, 0.0, scenario.region_size));
        };
        admit(0);
        for (long i = 1; i <= half; ++i)
        {
            admit(-i);
            admit(i);
        }
        return out;
    }

    LineSearchOutcome line_search(const std::vector<double> &candidates, double x0,
                                  const std::function<double(double)> &objective)
    {
        LineSearchOutcome best;
        best.x = x0;
        if (candidates.empty())
        {
            best.feasible = false;
            best.objective = objective(x0);
            best.evaluated = 1;
            return best;
        }
        bool first = true;
        for (double x : candidates)
        {
            const double value = objective(x);
            ++best.evaluated;
            // Candidates arrive sorted by displacement, so only strict improvements move.
            if (first || value < best.objective - 1e-12 * std::max(1.0, std::abs(best.objective)))
            {
                best.x = x;
                best.objective = value;
                first = false;
            }
        }
        return best;
    }

    LineSearchOutcome refine_pa(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                                const BeamformingState &bf, const AuxiliaryState &aux,
                                std::size_t m, std::size_t n, const PlacementConfig &cfg)
    {
        return refine_pa(scenario, pa, channels, bf, aux, StreamProjections(channels, bf), m, n, cfg);
    }

    LineSearchOutcome refine_pa(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                                const BeamformingState &bf, const AuxiliaryState &aux,
                                const StreamProjections &proj, std::size_t m, std::size_t n,
                                const PlacementConfig &cfg)
    {
        const PhaseTargets targets = phase_targets(scenario, pa, channels, bf, aux, proj, m, n);
        return line_search(candidate_grid(scenario, pa, m, n, cfg), pa.at(m, n),
                           [&](double x) { return phase_error_objective(x, targets, scenario, m); });
    }

    void move_pa(const Scenario &scenario, PaState &pa, ChannelSet &channels, std::size_t m, std::size_t n, double x)
    {
        const double old_x = pa.at(m, n);
        if (old_x == x)
            return;
        const double norm = 1.0 / std::sqrt(static_cast<double>(scenario.pas_per_guide));
        const auto slot = static_cast<Eigen::Index>(m);
        for (std::size_t l = 0; l < scenario.num_carriers(); ++l)
            for (std::size_t k = 0; k < scenario.num_users(); ++k)
                channels.at(l, k)(slot) += norm * (pa_term(scenario, m, x, l, k) - pa_term(scenario, m, old_x, l, k));
        pa.at(m, n) = x;
    }

    PaState fine_placement_pass(const Scenario &scenario, const PaState &pa, const BeamformingState &bf,
                                const PlacementConfig &cfg, ChannelSet &channels)
    {
        PaState out = pa;
        const AuxiliaryState aux = update_auxiliaries(channels, bf, scenario.noise_power);
        StreamProjections proj(channels, bf);
        const auto slot_before = [&](std::size_t m)
        {
            std::vector<Complex> v;
            for (std::size_t l = 0; l < scenario.num_carriers(); ++l)
                for (std::size_t k = 0; k < scenario.num_users(); ++k)
                    v.push_back(channels.at(l, k)(static_cast<Eigen::Index>(m)));
            return v;
        };
        const auto sync = [&](std::size_t m, const std::vector<Complex> &before)
        {
            std::size_t i = 0;
            for (std::size_t l = 0; l < scenario.num_carriers(); ++l)
                for (std::size_t k = 0; k < scenario.num_users(); ++k, ++i)
                    proj.shift(bf, l, k, m, channels.at(l, k)(static_cast<Eigen::Index>(m)) - before[i]);
        };
        for (std::size_t m = 0; m < scenario.num_waveguides(); ++m)
        {
            for (std::size_t n = 0; n < scenario.pas_per_guide; ++n)
            {
                const auto outcome = refine_pa(scenario, out, channels, bf, aux, proj, m, n, cfg);
                const auto before = slot_before(m);
                move_pa(scenario, out, channels, m, n, outcome.x);
                sync(m, before);
            }
            const auto before = slot_before(m);
            refresh_guide(scenario, out, m, channels);
            sync(m, before);
        }
        return out;
    }

    PaState search_placement_pass(const Scenario &scenario, const PaState &pa, const BeamformingState &bf,
                                  const PlacementConfig &cfg, ChannelSet &channels)
    {
        PaState out = pa;
        for (std::size_t m = 0; m < scenario.num_waveguides(); ++m)
        {
            for (std::size_t n = 0; n < scenario.pas_per_guide; ++n)
            {
                const double x0 = out.at(m, n);
                const auto objective = [&](double x)
                {
                    PaState trial_pa = out;
                    ChannelSet trial = channels;
                    move_pa(scenario, trial_pa, trial, m, n, x);
                    return -rate_report(trial, bf, std::nullopt, scenario.noise_power).sum_rate;
                };
                const auto outcome = line_search(candidate_grid(scenario, out, m, n, cfg), x0, objective);
                move_pa(scenario, out, channels, m, n, outcome.x);
            }
            refresh_guide(scenario, out, m, channels);
        }
        return out;
    }
}
