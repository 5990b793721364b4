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

// Command-line front end: run, sweep and converge.

#include "pinch/runner.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>

using nlohmann::json;

namespace
{
    struct Common
    {
        std::string config;
        std::vector<std::string> overrides;
        std::uint64_t seed = 1;
        std::string mode = "proposed";
        std::string out;
    };

    pinch::ExperimentConfig build_config(const Common &c)
    {
        pinch::ExperimentConfig cfg = c.config.empty() ? pinch::default_config() : pinch::load_config(c.config);
        for (const auto &kv : c.overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
            pinch::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return cfg;
    }

    // Writes to --out when given, stdout otherwise.
    void emit(const std::string &path, const std::string &text)
    {
        if (path.empty())
        {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write '" + path + "'");
        f << text;
    }

    json report_json(const pinch::RateReport &r)
    {
        return {{"sum_rate", r.sum_rate},
                {"rc_cap", r.rc_cap},
                {"rc_user", r.rc_user},
                {"rp", r.rp},
                {"r_alloc", r.r_alloc},
                {"min_user_rate", r.min_user_rate()},
                {"allocation_feasible", r.allocation_feasible}};
    }

    int cmd_run(const Common &c)
    {
        const auto cfg = build_config(c);
        const auto mode = pinch::parse_mode(c.mode);
        const auto scn = pinch::generate_drop(cfg.scenario, c.seed);
        const auto res = pinch::solve(scn, cfg.solver, mode);

        json out = {{"mode", std::string(pinch::to_string(mode))},
                    {"seed", c.seed},
                    {"report", report_json(res.report)},
                    {"power", res.bf.total_power()},
                    {"p_max", scn.p_max},
                    {"pa_positions", res.pa.positions()},
                    {"iterations", res.trace.empty() ? 0 : res.trace.size() - 1},
                    {"best_iteration", res.best_iteration},
                    {"converged", res.converged},
                    {"qos_satisfied", res.qos_satisfied},
                    {"wall_time", res.wall_time}};
        if (!res.diagnostic.empty())
            out["diagnostic"] = res.diagnostic;
        if (cfg.sigma_pos)
        {
            const auto moved = pinch::perturb_positions(scn, res.pa, *cfg.sigma_pos, c.seed ^ 0x9E3779B97F4A7C15ULL);
            const auto ch = pinch::build_channels(scn, moved);
            out["mismatch"] = {{"sigma_pos", *cfg.sigma_pos},
                               {"report", report_json(pinch::evaluate_with_mismatch(res, ch, scn.noise_power))}};
        }
        emit(c.out, out.dump(2) + "\n");
        return 0;
    }

    int cmd_sweep(const Common &c, const std::string &spec_path, const std::string &param,
                  const std::vector<double> &values, const std::vector<std::string> &modes, std::size_t drops,
                  bool seed_given, const std::string &json_path, std::size_t threads)
    {
        pinch::SweepSpec spec;
        if (!spec_path.empty())
            spec = pinch::load_sweep_spec(spec_path);
        else
        {
            spec.base = build_config(c);
            spec.modes = pinch::all_modes();
        }
        if (!spec_path.empty())
        {
            for (const auto &kv : c.overrides)
            {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
                pinch::apply_override(spec.base, kv.substr(0, eq), kv.substr(eq + 1));
            }
        }
        if (!param.empty())
            spec.param = param;
        if (!values.empty())
            spec.values = values;
        if (!modes.empty())
        {
            spec.modes.clear();
            for (const auto &m : modes)
                spec.modes.push_back(pinch::parse_mode(m));
        }
        if (drops > 0)
            spec.drops = drops;
        if (seed_given)
            spec.seed_base = c.seed;
        if (!c.out.empty())
            spec.output = c.out;
        if (!json_path.empty())
            spec.json_output = json_path;
        if (threads > 0)
            spec.threads = threads;

        const auto result = pinch::run_sweep(spec);
        std::ostringstream csv;
        pinch::write_sweep_csv(csv, result);
        emit(spec.output, csv.str());
        if (!spec.json_output.empty())
            emit(spec.json_output, pinch::sweep_json(result) + "\n");
        return 0;
    }

    int cmd_converge(const Common &c)
    {
        const auto cfg = build_config(c);
        const auto trace = pinch::run_convergence(cfg, c.seed, pinch::parse_mode(c.mode));
        std::ostringstream csv;
        pinch::write_trace_csv(csv, trace);
        emit(c.out, csv.str());
        return 0;
    }

    void add_common(CLI::App *sub, Common &c, bool with_mode)
    {
        sub->add_option("--config", c.config, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--set", c.overrides, "override one config key (key=value), repeatable");
        sub->add_option("--out", c.out, "output file (default stdout)");
        if (with_mode)
            sub->add_option("--mode", c.mode, "proposed, search, coarse_only, sdma or hybrid_frozen");
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"pinch: pinching-antenna RSMA simulator"};
    app.require_subcommand(1);

    Common common;
    std::string spec_path, param, json_path;
    std::vector<double> values;
    std::vector<std::string> modes;
    std::size_t drops = 0, threads = 0;

    auto *run = app.add_subcommand("run", "solve one drop and print the rate report as JSON");
    add_common(run, common, true);
    run->add_option("--seed", common.seed, "user drop seed");

    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one parameter, CSV output");
    add_common(sweep, common, false);
    sweep->add_option("spec", spec_path, "sweep file (sweep.* keys plus config keys)")->check(CLI::ExistingFile);
    auto *seed_opt = sweep->add_option("--seed", common.seed, "first drop seed");
    sweep->add_option("--param", param, "P_max, N, D, delta, f_c or sigma_pos");
    sweep->add_option("--values", values, "values of the swept parameter")->delimiter(',');
    sweep->add_option("--modes", modes, "modes to compare (default all)")->delimiter(',');
    sweep->add_option("--drops", drops, "drops per value");
    sweep->add_option("--json", json_path, "per-drop JSON mirror");
    sweep->add_option("--threads", threads, "worker threads (default hardware)");

    auto *conv = app.add_subcommand("converge", "outer-iteration trace as CSV");
    add_common(conv, common, true);
    conv->add_option("--seed", common.seed, "user drop seed");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (run->parsed())
            return cmd_run(common);
        if (sweep->parsed())
            return cmd_sweep(common, spec_path, param, values, modes, drops, seed_opt->count() > 0, json_path, threads);
        if (conv->parsed())
            return cmd_converge(common);
    }
    catch (const std::exception &e)
    {
        std::cerr << json{{"error", e.what()}, {"status", "failed"}}.dump() << "\n";
        return 2;
    }
    return 1;
}
