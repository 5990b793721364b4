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

#ifndef PINCH_ORCHESTRATOR_HPP
#define PINCH_ORCHESTRATOR_HPP

#include "pinch/beamforming.hpp"
#include "pinch/placement.hpp"

#include <string>
#include <string_view>

namespace pinch
{
    enum class Mode
    {
        Proposed,     // phase-error fine placement alternated with beamforming
        Search,       // fine placement by direct sum-rate line search
        CoarseOnly,   // distance-minimising placement, one beamforming solve
        Sdma,         // proposed pipeline without the common stream
        HybridFrozen  // antennas frozen at the guide centres, beamforming only
    };

    std::string_view to_string(Mode mode);
    Mode parse_mode(std::string_view name); // throws std::invalid_argument
    const std::vector<Mode> &all_modes();

    struct SolverConfig
    {
        PlacementConfig placement;
        BeamformerConfig beamformer;
    };

    struct SolveResult
    {
        Mode mode = Mode::Proposed;
        PaState pa;
        BeamformingState bf;
        LagrangeState lag;
        RateReport report;
        std::vector<double> trace;      // raw sum rate; entry 0 is the coarse/initial iterate
        std::vector<double> best_trace; // running best of trace
        std::size_t best_iteration = 0;
        bool converged = false;
        bool qos_satisfied = false;
        double unconstrained_power = 0.0; // see BeamformingResult
        std::string diagnostic;
        double wall_time = 0.0; // seconds
    };

    // Runs one mode end to end. Outer iterations stop once the best sum rate fails to improve by
    // more than outer_tol for `patience` consecutive iterations, or at max_outer_iters.
    SolveResult solve(const Scenario &scenario, const SolverConfig &cfg, Mode mode);

    // Minimal-distance projection of one guide's coordinates onto the ordered, spaced, bounded set.
    std::vector<double> repair_spacing(std::vector<double> x, double d_min, double region_size);

    // Adds i.i.d. N(0, sigma^2) offsets to every PA coordinate, then restores bounds and spacing.
    PaState perturb_positions(const Scenario &scenario, const PaState &pa, double sigma, std::uint64_t seed);

    // Rates of the solved beamformers on different channels. The allocation is frozen and scaled
    // down per carrier when it no longer fits the new common cap.
    RateReport evaluate_with_mismatch(const SolveResult &result, const ChannelSet &perturbed, double noise);
}

#endif
