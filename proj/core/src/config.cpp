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

#include "pinch/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>

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

        double to_double(const std::string &key, const std::string &text)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(text, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used == 0 || trim(text.substr(used)) != "")
                throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a number");
            return v;
        }

        std::size_t to_count(const std::string &key, const std::string &text)
        {
            const double v = to_double(key, text);
            if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
                throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a non-negative integer");
            return static_cast<std::size_t>(v);
        }

        std::vector<double> to_list(const std::string &key, const std::string &text)
        {
            std::vector<double> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ','))
                out.push_back(to_double(key, trim(item)));
            return out;
        }

        using Setter = std::function<void(ExperimentConfig &, const std::string &, const std::string &)>;

        struct KeySpec
        {
            std::string help;
            Setter set;
        };

        const std::map<std::string, KeySpec> &registry()
        {
            static const std::map<std::string, KeySpec> keys = {
                {"K", {"number of users", [](auto &c, auto &k, auto &v) { c.scenario.num_users = to_count(k, v); }}},
                {"M", {"number of waveguides", [](auto &c, auto &k, auto &v) { c.scenario.num_waveguides = to_count(k, v); }}},
                {"N", {"PAs per waveguide", [](auto &c, auto &k, auto &v) { c.scenario.pas_per_guide = to_count(k, v); }}},
                {"L", {"number of carriers", [](auto &c, auto &k, auto &v) { c.scenario.num_carriers = to_count(k, v); }}},
                {"f_c", {"centre carrier frequency [Hz]", [](auto &c, auto &k, auto &v) { c.scenario.center_frequency_hz = to_double(k, v); }}},
                {"delta_f", {"carrier spacing [Hz]", [](auto &c, auto &k, auto &v) { c.scenario.carrier_spacing_hz = to_double(k, v); }}},
                {"height", {"waveguide / feed height [m]", [](auto &c, auto &k, auto &v) { c.scenario.waveguide_height = to_double(k, v); }}},
                {"absorption", {"in-guide absorption coefficient [1/m]", [](auto &c, auto &k, auto &v) { c.scenario.absorption = to_double(k, v); }}},
                {"eta_eff", {"effective refractive index", [](auto &c, auto &k, auto &v) { c.scenario.eta_eff = to_double(k, v); }}},
                {"feed_y", {"comma list of feed-point y per waveguide [m]", [](auto &c, auto &k, auto &v) { c.scenario.feed_y = to_list(k, v); }}},
                {"D", {"waveguide length / region side [m]", [](auto &c, auto &k, auto &v) { c.scenario.region_size = to_double(k, v); }}},
                {"user_region", {"x_min,x_max,y_min,y_max of the user drop rectangle [m]", [](auto &c, auto &k, auto &v)
                                 {
                                     const auto r = to_list(k, v);
                                     if (r.size() != 4)
                                         throw std::invalid_argument("config key 'user_region' needs four values");
                                     c.scenario.user_region = Region{r[0], r[1], r[2], r[3]};
                                 }}},
                {"noise_dbm", {"noise power [dBm]", [](auto &c, auto &k, auto &v) { c.scenario.noise_dbm = to_double(k, v); }}},
                {"p_max_dbm", {"transmit power budget [dBm]", [](auto &c, auto &k, auto &v) { c.scenario.p_max_dbm = to_double(k, v); }}},
                {"r_min", {"per-user minimum rate [bits/s/Hz]", [](auto &c, auto &k, auto &v) { c.scenario.r_min = to_double(k, v); }}},
                {"d_min", {"minimum PA spacing [m] (default half wavelength at f_c)", [](auto &c, auto &k, auto &v) { c.scenario.min_spacing = to_double(k, v); }}},
                {"search_step", {"fine line-search step [m]", [](auto &c, auto &k, auto &v) { c.solver.placement.search_step = to_double(k, v); }}},
                {"search_span", {"fine line-search interval length [m] (default 20 steps)", [](auto &c, auto &k, auto &v) { c.solver.placement.search_span = to_double(k, v); }}},
                {"inter_pa_spacing", {"coarse layout spacing [m] (default d_min)", [](auto &c, auto &k, auto &v) { c.solver.placement.inter_pa_spacing = to_double(k, v); }}},
                {"max_outer_iters", {"outer iteration cap", [](auto &c, auto &k, auto &v) { c.solver.placement.max_outer_iters = to_count(k, v); }}},
                {"patience", {"outer iterations without improvement before stopping", [](auto &c, auto &k, auto &v) { c.solver.placement.patience = to_count(k, v); }}},
                {"outer_tol", {"outer improvement threshold [bits/s/Hz]", [](auto &c, auto &k, auto &v) { c.solver.placement.outer_tol = to_double(k, v); }}},
                {"step_lambda", {"common-rate multiplier step", [](auto &c, auto &k, auto &v) { c.solver.beamformer.step_lambda = to_double(k, v); }}},
                {"step_eta", {"QoS multiplier step", [](auto &c, auto &k, auto &v) { c.solver.beamformer.step_eta = to_double(k, v); }}},
                {"step_zeta", {"allocation multiplier step", [](auto &c, auto &k, auto &v) { c.solver.beamformer.step_zeta = to_double(k, v); }}},
                {"mu_min", {"lower power-multiplier bound", [](auto &c, auto &k, auto &v) { c.solver.beamformer.mu_min = to_double(k, v); }}},
                {"mu_max", {"initial upper power-multiplier bound", [](auto &c, auto &k, auto &v) { c.solver.beamformer.mu_max = to_double(k, v); }}},
                {"bisection_tol", {"relative power tolerance of the bisection", [](auto &c, auto &k, auto &v) { c.solver.beamformer.bisection_tol = to_double(k, v); }}},
                {"max_inner_iters", {"beamforming iteration cap", [](auto &c, auto &k, auto &v) { c.solver.beamformer.max_inner_iters = to_count(k, v); }}},
                {"inner_tol", {"beamforming sum-rate tolerance [bits/s/Hz]", [](auto &c, auto &k, auto &v) { c.solver.beamformer.inner_tol = to_double(k, v); }}},
                {"sigma_pos", {"PA position error std [m]; enables mismatch scoring", [](auto &c, auto &k, auto &v) { c.sigma_pos = to_double(k, v); }}},
            };
            return keys;
        }
    }

    const std::map<std::string, std::string> &config_keys()
    {
        static const std::map<std::string, std::string> keys = []
        {
            std::map<std::string, std::string> out;
            for (const auto &[k, spec] : registry())
                out.emplace(k, spec.help);
            return out;
        }();
        return keys;
    }

    void apply_override(ExperimentConfig &cfg, const std::string &key, const std::string &value)
    {
        const auto it = registry().find(key);
        if (it == registry().end())
            throw std::invalid_argument("unknown config key '" + key + "'");
        it->second.set(cfg, key, trim(value));
    }

    ExperimentConfig parse_config(std::istream &in, const std::string &origin)
    {
        ExperimentConfig cfg = default_config();
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
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
            try
            {
                apply_override(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open config file '" + path + "'");
        return parse_config(in, path);
    }

    ExperimentConfig default_config() { return ExperimentConfig{}; }
}
