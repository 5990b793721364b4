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

#include "pinch/runner.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pinch
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, sep))
                if (!trim(item).empty())
                    out.push_back(trim(item));
            return out;
        }

        double parse_number(const std::string &key, const std::string &text)
        {
            std::size_t used = 0;
            try
            {
                const double v = std::stod(text, &used);
                if (trim(text.substr(used)).empty())
                    return v;
            }
            catch (const std::exception &)
            {
            }
            throw std::invalid_argument("sweep key '" + key + "': '" + text + "' is not a number");
        }

        // Mismatch draws are shared by every mode of a drop.
        std::uint64_t mismatch_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }
    }

    std::string sweep_param_key(const std::string &param)
    {
        if (param == "P_max" || param == "p_max_dbm")
            return "p_max_dbm";
        if (param == "N")
            return "N";
        if (param == "D")
            return "D";
        if (param == "delta" || param == "search_step")
            return "search_step";
        if (param == "f_c")
            return "f_c";
        if (param == "sigma_pos")
            return "sigma_pos";
        throw std::invalid_argument("unsupported sweep parameter '" + param +
                                    "' (expected P_max, N, D, delta, f_c or sigma_pos)");
    }

    void SweepSpec::validate() const
    {
        sweep_param_key(param);
        if (values.empty())
            throw std::invalid_argument("sweep needs at least one value");
        if (modes.empty())
            throw std::invalid_argument("sweep needs at least one mode");
        if (drops == 0)
            throw std::invalid_argument("sweep needs at least one drop");
    }

    SweepSpec parse_sweep_spec(std::istream &in, const std::string &origin)
    {
        SweepSpec spec;
        spec.base = default_config();
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto where = origin + ":" + std::to_string(lineno) + ": ";
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(where + "expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            try
            {
                if (key.rfind("sweep.", 0) != 0)
                {
                    apply_override(spec.base, key, value);
                    continue;
                }
                const auto sub = key.substr(6);
                if (sub == "param")
                    spec.param = value;
                else if (sub == "values")
                {
                    spec.values.clear();
                    for (const auto &v : split(value, ','))
                        spec.values.push_back(parse_number(key, v));
                }
                else if (sub == "modes")
                {
                    spec.modes.clear();
                    for (const auto &m : split(value, ','))
                        spec.modes.push_back(parse_mode(m));
                }
                else if (sub == "drops")
                    spec.drops = static_cast<std::size_t>(parse_number(key, value));
                else if (sub == "seed_base")
                    spec.seed_base = static_cast<std::uint64_t>(parse_number(key, value));
                else if (sub == "output")
                    spec.output = value;
                else if (sub == "json")
                    spec.json_output = value;
                else if (sub == "threads")
                    spec.threads = static_cast<std::size_t>(parse_number(key, value));
                else
                    throw std::invalid_argument("unknown sweep key '" + key + "'");
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument(where + e.what());
            }
        }
        if (spec.modes.empty())
            spec.modes = all_modes();
        return spec;
    }

    SweepSpec load_sweep_spec(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open sweep file '" + path + "'");
        return parse_sweep_spec(in, path);
    }

    DropOutcome evaluate_drop(const ExperimentConfig &cfg, std::uint64_t seed, Mode mode)
    {
        DropOutcome out;
        out.mode = mode;
        out.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            const Scenario scn = generate_drop(cfg.scenario, seed);
            const SolveResult res = solve(scn, cfg.solver, mode);
            out.nominal_sum_rate = res.report.sum_rate;
            out.sum_rate = res.report.sum_rate;
            out.qos_satisfied = res.qos_satisfied;
            out.converged = res.converged;
            out.iterations = res.trace.empty() ? 0 : res.trace.size() - 1;
            if (cfg.sigma_pos)
            {
                const PaState moved = perturb_positions(scn, res.pa, *cfg.sigma_pos, mismatch_seed(seed));
                const ChannelSet perturbed = build_channels(scn, moved);
                out.sum_rate = evaluate_with_mismatch(res, perturbed, scn.noise_power).sum_rate;
            }
            out.ok = std::isfinite(out.sum_rate);
            if (!out.ok)
                out.error = "non-finite sum rate";
        }
        catch (const std::exception &e)
        {
            out.ok = false;
            out.error = e.what();
        }
        out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    SweepResult run_sweep(const SweepSpec &spec)
    {
        spec.validate();
        const std::string key = sweep_param_key(spec.param);

        std::vector<ExperimentConfig> configs;
        for (double v : spec.values)
        {
            ExperimentConfig cfg = spec.base;
            std::ostringstream text;
            text.precision(17);
            text << v;
            apply_override(cfg, key, text.str());
            configs.push_back(cfg);
        }

        // One task per (value, drop); each task runs every mode on the same drop.
        const std::size_t n_values = spec.values.size();
        const std::size_t n_modes = spec.modes.size();
        const std::size_t n_tasks = n_values * spec.drops;
        std::vector<DropOutcome> outcomes(n_tasks * n_modes);

        std::atomic<std::size_t> next{0};
        auto worker = [&]
        {
            for (std::size_t t = next++; t < n_tasks; t = next++)
            {
                const std::size_t vi = t / spec.drops;
                const std::uint64_t seed = spec.seed_base + t % spec.drops;
                for (std::size_t mi = 0; mi < n_modes; ++mi)
                {
                    DropOutcome o = evaluate_drop(configs[vi], seed, spec.modes[mi]);
                    o.value = spec.values[vi];
                    outcomes[t * n_modes + mi] = std::move(o);
                }
            }
        };
        std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, n_tasks);
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        SweepResult result;
        result.outcomes = outcomes;
        for (std::size_t vi = 0; vi < n_values; ++vi)
        {
            for (std::size_t mi = 0; mi < n_modes; ++mi)
            {
                SweepRow row;
                row.param = spec.param;
                row.value = spec.values[vi];
                row.mode = spec.modes[mi];
                row.seed_base = spec.seed_base;
                std::vector<double> rates;
                std::size_t failed = 0;
                for (std::size_t d = 0; d < spec.drops; ++d)
                {
                    const auto &o = outcomes[(vi * spec.drops + d) * n_modes + mi];
                    if (o.ok)
                        rates.push_back(o.sum_rate);
                    else
                        ++failed;
                }
                row.drops = rates.size();
                if (!rates.empty())
                {
                    double sum = 0.0;
                    for (double r : rates)
                        sum += r;
                    row.mean_sum_rate = sum / static_cast<double>(rates.size());
                    double ss = 0.0;
                    for (double r : rates)
                        ss += (r - row.mean_sum_rate) * (r - row.mean_sum_rate);
                    row.std_sum_rate = rates.size() > 1 ? std::sqrt(ss / static_cast<double>(rates.size() - 1)) : 0.0;
                }
                else
                    row.mean_sum_rate = std::nan("");
                row.status = failed == 0 ? "ok" : "failed=" + std::to_string(failed);
                result.rows.push_back(row);
            }
        }
        return result;
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

    void write_sweep_csv(std::ostream &out, const SweepResult &result)
    {
        out << "param,value,mode,mean_sum_rate,std,drops,seed_base,status\n";
        for (const auto &r : result.rows)
        {
            out << r.param << ',' << format_number(r.value) << ',' << to_string(r.mode) << ','
                << format_number(r.mean_sum_rate) << ',' << format_number(r.std_sum_rate) << ',' << r.drops << ','
                << r.seed_base << ',' << r.status << '\n';
        }
    }

    std::string sweep_json(const SweepResult &result)
    {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : result.rows)
        {
            rows.push_back({{"param", r.param},
                            {"value", r.value},
                            {"mode", std::string(to_string(r.mode))},
                            {"mean_sum_rate", r.mean_sum_rate},
                            {"std", r.std_sum_rate},
                            {"drops", r.drops},
                            {"seed_base", r.seed_base},
                            {"status", r.status}});
        }
        nlohmann::json drops = nlohmann::json::array();
        for (const auto &o : result.outcomes)
        {
            nlohmann::json d = {{"value", o.value},
                                {"mode", std::string(to_string(o.mode))},
                                {"seed", o.seed},
                                {"ok", o.ok},
                                {"sum_rate", o.sum_rate},
                                {"nominal_sum_rate", o.nominal_sum_rate},
                                {"qos_satisfied", o.qos_satisfied},
                                {"converged", o.converged},
                                {"iterations", o.iterations}};
            if (!o.error.empty())
                d["error"] = o.error;
            drops.push_back(d);
        }
        return nlohmann::json{{"rows", rows}, {"drops", drops}}.dump(2);
    }

    std::vector<TracePoint> run_convergence(const ExperimentConfig &cfg, std::uint64_t seed, Mode mode)
    {
        SolverConfig solver = cfg.solver;
        solver.placement.patience = solver.placement.max_outer_iters + 1;
        const Scenario scn = generate_drop(cfg.scenario, seed);
        const SolveResult res = solve(scn, solver, mode);
        std::vector<TracePoint> out;
        for (std::size_t i = 0; i < res.trace.size(); ++i)
            out.push_back({i, res.trace[i], res.best_trace[i]});
        return out;
    }

    void write_trace_csv(std::ostream &out, const std::vector<TracePoint> &trace)
    {
        out << "iter,sum_rate,best_so_far\n";
        for (const auto &p : trace)
            out << p.iter << ',' << format_number(p.sum_rate) << ',' << format_number(p.best_so_far) << '\n';
    }
}
