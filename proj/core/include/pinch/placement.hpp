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

#ifndef PINCH_PLACEMENT_HPP
#define PINCH_PLACEMENT_HPP

#include "pinch/rates.hpp"

#include <functional>

namespace pinch
{
    // Wraps an angle into (-pi, pi].
    double wrap_angle(double radians);

    // Minimiser of sum_k |chi_pa - chi_k|^2 over x in [0, D]: the clamped mean user x.
    double coarse_center(const Scenario &scenario, std::size_t m);

    // N positions spaced `spacing` apart, centred on center_x and shifted the least amount needed
    // to fit in [0, D]. Throws std::invalid_argument when spacing < d_min or N * spacing > D.
    std::vector<double> layout_pas(double center_x, std::size_t n, double spacing, double d_min, double region_size);

    PaState coarse_placement(const Scenario &scenario, const PlacementConfig &cfg);

    // Uniform comb at the middle of every guide, used by the fixed-antenna baseline.
    PaState centered_placement(const Scenario &scenario);

    // Slot-m entries of the q-vectors of PA (m, n) plus the diagonal weights they are paired with.
    struct QTerms
    {
        Complex q_p{0.0, 0.0};
        Complex q_c{0.0, 0.0};
        double wp_mm = 0.0; // (diag(d)^H W_p diag(d))_mm
        double wc_mm = 0.0; // (diag(d)^H W_c diag(d))_mm
    };

    QTerms q_terms(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                   const BeamformingState &bf, const AuxiliaryState &aux,
                   std::size_t l, std::size_t k, std::size_t m, std::size_t n);

    // w^H h for every stream and channel. Kept in step with the channels while PAs move, so a
    // q-term costs O(K) rather than O(KM).
    class StreamProjections
    {
    public:
        StreamProjections(const ChannelSet &channels, const BeamformingState &bf);

        // Entry i < K is private stream i, entry K the common stream.
        const CVector &at(std::size_t l, std::size_t k) const { return proj_.at(l * users_ + k); }

        // Entry m of channel (l, k) changed by delta.
        void shift(const BeamformingState &bf, std::size_t l, std::size_t k, std::size_t m, Complex delta);

    private:
        std::size_t users_ = 0;
        std::vector<CVector> proj_;
    };

    QTerms q_terms(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                   const BeamformingState &bf, const AuxiliaryState &aux, const StreamProjections &proj,
                   std::size_t l, std::size_t k, std::size_t m, std::size_t n);

    struct PhaseTarget
    {
        double angle = 0.0;
        bool degenerate = false; // combined term vanished; the angle is a placeholder 0
    };

    // Angle of q_p |xi_p|^2 wp_mm + (1/K) q_c |xi_c|^2 wc_mm.
    PhaseTarget optimal_phase(Complex q_p, Complex q_c, Complex xi_p, Complex xi_c,
                              double wp_mm, double wc_mm, std::size_t num_users);

    // Phase of the single-PA channel term for a PA at x: wrap(-(2 pi / lambda)(s_user + eta_eff s_feed)).
    double actual_phase(double x, const Waveguide &guide, const Position3D &user, double wavelength);

    struct PhaseTargets
    {
        Grid<double> angle; // [l][k]
        Grid<char> active;  // [l][k]; degenerate terms are dropped from the objective
    };

    PhaseTargets phase_targets(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                               const BeamformingState &bf, const AuxiliaryState &aux, std::size_t m, std::size_t n);
    PhaseTargets phase_targets(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                               const BeamformingState &bf, const AuxiliaryState &aux,
                               const StreamProjections &proj, std::size_t m, std::size_t n);

    // sum over active (l, k) of |wrap(actual_phase - target)|.
    double phase_error_objective(double x, const PhaseTargets &targets, const Scenario &scenario, std::size_t m);

    // Grid points x0 + i * step, |i * step| <= span / 2, inside [0, D] and keeping at least d_min
    // to both neighbours on the guide (PAs do not pass each other). Ordered by displacement from x0,
    // left before right on ties.
    std::vector<double> candidate_grid(const Scenario &scenario, const PaState &pa, std::size_t m, std::size_t n,
                                       const PlacementConfig &cfg);

    struct LineSearchOutcome
    {
        double x = 0.0;
        double objective = 0.0;
        bool feasible = true; // false: no feasible candidate, x is the untouched start point
        std::size_t evaluated = 0;
    };

    // Minimises `objective` over the candidate grid; ties go to the smaller displacement.
    LineSearchOutcome line_search(const std::vector<double> &candidates, double x0,
                                  const std::function<double(double)> &objective);

    // Phase-error line search for PA (m, n) with every other PA fixed.
    LineSearchOutcome refine_pa(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                                const BeamformingState &bf, const AuxiliaryState &aux,
                                std::size_t m, std::size_t n, const PlacementConfig &cfg);
    // Same, reusing projections that match `channels`.
    LineSearchOutcome refine_pa(const Scenario &scenario, const PaState &pa, const ChannelSet &channels,
                                const BeamformingState &bf, const AuxiliaryState &aux,
                                const StreamProjections &proj, std::size_t m, std::size_t n,
                                const PlacementConfig &cfg);

    // Moves PA (m, n) to x and patches entry m of every channel vector in place.
    void move_pa(const Scenario &scenario, PaState &pa, ChannelSet &channels, std::size_t m, std::size_t n, double x);

    // One sequential pass of phase-error refinement over every PA. Auxiliaries are refreshed once
    // from the supplied beamformers; channels are updated after each move.
    PaState fine_placement_pass(const Scenario &scenario, const PaState &pa, const BeamformingState &bf,
                                const PlacementConfig &cfg, ChannelSet &channels);

    // Same pass, but each PA directly maximises the sum rate of the fixed beamformers.
    PaState search_placement_pass(const Scenario &scenario, const PaState &pa, const BeamformingState &bf,
                                  const PlacementConfig &cfg, ChannelSet &channels);
}

#endif
