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

#include "pinch/beamforming.hpp"
#include "pinch/orchestrator.hpp"
#include "pinch/placement.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace pinch;

namespace
{
    struct State
    {
        Scenario s;
        PlacementConfig cfg;
        PaState pa;
        ChannelSet ch;
        BeamformingResult bf;
        AuxiliaryState aux;

        explicit State(const ScenarioTemplate &t, double span = 0.02)
            : s(generate_drop(t, 7))
        {
            cfg.search_span = span;
            cfg.inter_pa_spacing = span + s.min_spacing + cfg.search_step;
            pa = coarse_placement(s, cfg);
            ch = build_channels(s, pa);
            bf = design_beamforming(ch, s, BeamformerConfig{});
            aux = update_auxiliaries(ch, bf.bf, s.noise_power);
        }
    };

    ScenarioTemplate base()
    {
        ScenarioTemplate t;
        t.feed_y.clear();
        return t;
    }

    // One refinement pass: projections plus a line search per PA.
    void refine_all(benchmark::State &bs, const State &st)
    {
        for (auto _ : bs)
        {
            const StreamProjections proj(st.ch, st.bf.bf);
            for (std::size_t m = 0; m < st.s.num_waveguides(); ++m)
                for (std::size_t n = 0; n < st.s.pas_per_guide; ++n)
                    benchmark::DoNotOptimize(refine_pa(st.s, st.pa, st.ch, st.bf.bf, st.aux, proj, m, n, st.cfg));
        }
    }
}

static void RefineByUsers(benchmark::State &bs)
{
    auto t = base();
    t.num_users = static_cast<std::size_t>(bs.range(0));
    refine_all(bs, State(t));
    bs.SetComplexityN(bs.range(0));
}
BENCHMARK(RefineByUsers)->DenseRange(2, 10, 2)->Complexity(benchmark::oN);

static void RefineByGuides(benchmark::State &bs)
{
    auto t = base();
    t.num_waveguides = static_cast<std::size_t>(bs.range(0));
    refine_all(bs, State(t));
    bs.SetComplexityN(bs.range(0));
}
BENCHMARK(RefineByGuides)->DenseRange(2, 10, 2)->Complexity(benchmark::oN);

static void RefineByCandidates(benchmark::State &bs)
{
    const double step = PlacementConfig{}.search_step;
    refine_all(bs, State(base(), static_cast<double>(bs.range(0) - 1) * step));
    bs.SetComplexityN(bs.range(0));
}
BENCHMARK(RefineByCandidates)->Arg(11)->Arg(21)->Arg(41)->Arg(81)->Complexity(benchmark::oN);

static void BeamformingDesign(benchmark::State &bs)
{
    auto t = base();
    t.num_waveguides = static_cast<std::size_t>(bs.range(0));
    const State st(t);
    for (auto _ : bs)
        benchmark::DoNotOptimize(design_beamforming(st.ch, st.s, BeamformerConfig{}));
}
BENCHMARK(BeamformingDesign)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void SolveDefaultDrop(benchmark::State &bs)
{
    const Scenario s = generate_drop(ScenarioTemplate{}, 3);
    const auto mode = static_cast<Mode>(bs.range(0));
    for (auto _ : bs)
        benchmark::DoNotOptimize(solve(s, SolverConfig{}, mode));
    bs.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(SolveDefaultDrop)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
