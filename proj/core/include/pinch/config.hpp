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

#ifndef PINCH_CONFIG_HPP
#define PINCH_CONFIG_HPP

#include "pinch/orchestrator.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace pinch
{
    // Scenario template plus solver settings, as read from a flat `key = value` file.
    struct ExperimentConfig
    {
        ScenarioTemplate scenario;
        SolverConfig solver;
        std::optional<double> sigma_pos; // metres; set => results are also scored under position mismatch

        double resolved_sigma_pos() const
        {
            return sigma_pos.value_or(kSpeedOfLight / scenario.center_frequency_hz / 8.0);
        }
    };

    // Known keys with a one-line description, for --help and error messages.
    const std::map<std::string, std::string> &config_keys();

    // Sets one key. dBm-valued keys stay in dBm in the template and are converted when a Scenario
    // is built. Throws std::invalid_argument for unknown keys or malformed values.
    void apply_override(ExperimentConfig &cfg, const std::string &key, const std::string &value);

    // '#' starts a comment; blank lines are ignored.
    ExperimentConfig parse_config(std::istream &in, const std::string &origin = "<stream>");
    ExperimentConfig load_config(const std::string &path);

    // Default template reproducing the simulation table values.
    ExperimentConfig default_config();
}

#endif
