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

#ifndef PINCH_RUNNER_HPP
#define PINCH_RUNNER_HPP

#include "pinch/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pinch
{
    struct SweepSpec
    {
        std::string param = "P_max"; // P_max, N, D, delta, f_c or sigma_pos
        std::vector<double> values;
        std::vector<Mode> modes;
        std::size_t drops = 1;
        std::uint64_t seed_base = 1;
        ExperimentConfig base;
        std::string output;     // CSV path; empty means stdout
        std::string json_output; // optional per-drop mirror
        std::size_t threads = 0; // 0: hardware concurrency

        void validate() const;
    };

    // Config key a sweep parameter name maps to. Throws for names outside the supported set.
    std::string sweep_param_key(const std::string &param);

    // `key = value` file: keys prefixed with "sweep." fill the SweepSpec, the rest go to the base config.
    SweepSpec parse_sweep_spec(std::istream &in, const std::string &origin = "<stream>");
    SweepSpec load_sweep_spec(const std::string &path);

    struct DropOutcome
    {
        double value = 0.0;
        Mode mode = Mode::Proposed;
        std::uint64_t seed = 0;
        bool ok = false;
        double sum_rate = 0.0;         // scored value (mismatched when sigma_pos is active)
        double nominal_sum_rate = 0.0; // on the intended positions
        bool qos_satisfied = false;
        bool converged = false;
        std::size_t iterations = 0;
        double wall_time = 0.0;
        std::string error;
    };

    struct SweepRow
    {
        std::string param;
        double value = 0.0;
        Mode mode = Mode::Proposed;
        double mean_sum_rate = 0.0;
        double std_sum_rate = 0.0;
        std::size_t drops = 0;     // drops that solved without error
        std::uint64_t seed_base = 0;
        std::string status;        // "ok", or "failed=<n>" when some drops threw
    };

    struct SweepResult
    {
        std::vector<SweepRow> rows;       // value-major, then mode in the order requested
        std::vector<DropOutcome> outcomes; // sorted by (value index, seed, mode index)
    };

    // Seeds are seed_base, seed_base + 1, ...; every mode at a given (value, seed) sees the same drop.
    SweepResult run_sweep(const SweepSpec &spec);

    void write_sweep_csv(std::ostream &out, const SweepResult &result);
    std::string sweep_json(const SweepResult &result);

    // Solves one drop for one mode; the score includes position mismatch when cfg.sigma_pos is set.
    DropOutcome evaluate_drop(const ExperimentConfig &cfg, std::uint64_t seed, Mode mode);

    struct TracePoint
    {
        std::size_t iter = 0;
        double sum_rate = 0.0;
        double best_so_far = 0.0;
    };

    // Full outer-iteration trace with early stopping disabled.
    std::vector<TracePoint> run_convergence(const ExperimentConfig &cfg, std::uint64_t seed, Mode mode);
    void write_trace_csv(std::ostream &out, const std::vector<TracePoint> &trace);

    // Formats a double so that CSV output is byte-stable across runs.
    std::string format_number(double v);
}

#endif
