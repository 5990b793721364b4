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

#ifndef PINCH_SCENARIO_HPP
#define PINCH_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pinch
{
    // Speed of light used for every wavelength in the library [m/s].
    inline constexpr double kSpeedOfLight = 3.0e8;

    struct Position3D
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    double distance(const Position3D &a, const Position3D &b);

    double dbm_to_watts(double dbm);
    double watts_to_dbm(double watts);

    // A straight dielectric waveguide running parallel to the x-axis at constant (y, z).
    // PAs on it are addressed by their x-coordinate in [0, length].
    struct Waveguide
    {
        std::size_t index = 0;
        Position3D feed_point;
        double axis_y = 0.0;
        double height = 3.0;
        double length = 6.0;
        double absorption = 0.01; // per metre
        double eta_eff = 1.4;     // effective refractive index

        Position3D point_at(double x) const { return {x, axis_y, height}; }
        void validate() const;
    };

    // L carriers centred on f_c with uniform spacing.
    class CarrierGrid
    {
    public:
        CarrierGrid() = default;
        CarrierGrid(std::size_t count, double center_frequency_hz, double spacing_hz);

        std::size_t size() const { return frequencies_.size(); }
        double frequency(std::size_t l) const { return frequencies_.at(l); }
        double wavelength(std::size_t l) const { return wavelengths_.at(l); }
        double center_frequency() const { return center_; }
        double spacing() const { return spacing_; }
        double center_wavelength() const { return kSpeedOfLight / center_; }

    private:
        double center_ = 28.0e9;
        double spacing_ = 400.0e6;
        std::vector<double> frequencies_;
        std::vector<double> wavelengths_;
    };

    // Axis-aligned rectangle on the ground plane where users are dropped.
    struct Region
    {
        double x_min = 0.0;
        double x_max = 0.0;
        double y_min = 0.0;
        double y_max = 0.0;
    };

    // Everything needed to draw a Scenario. Powers in dBm here; Scenario holds watts.
    struct ScenarioTemplate
    {
        std::size_t num_users = 4;
        std::size_t num_waveguides = 2;
        std::size_t pas_per_guide = 2;
        std::size_t num_carriers = 3;
        double center_frequency_hz = 28.0e9;
        double carrier_spacing_hz = 400.0e6;
        double waveguide_height = 3.0;
        double absorption = 0.01;
        double eta_eff = 1.4;
        std::vector<double> feed_y = {-5.0, 5.0}; // empty: spread over [-5, 5]
        double region_size = 6.0;                 // waveguide length D
        std::optional<Region> user_region;        // default: square of side D centred between the guides
        double noise_dbm = -70.0;
        double p_max_dbm = 25.0;
        double r_min = 0.1;                 // bits/s/Hz, summed over carriers
        std::optional<double> min_spacing;  // default: half wavelength at f_c

        double resolved_min_spacing() const;
        Region resolved_user_region() const;
        std::vector<double> resolved_feed_y() const;
    };

    struct Scenario
    {
        std::vector<Position3D> users;
        std::vector<Waveguide> waveguides;
        std::size_t pas_per_guide = 1;
        CarrierGrid carriers;
        double noise_power = 1e-10; // watts
        double p_max = 0.316;       // watts
        double r_min = 0.1;
        double min_spacing = 0.0;
        double region_size = 6.0;
        Region user_region;
        std::uint64_t rng_seed = 0;

        std::size_t num_users() const { return users.size(); }
        std::size_t num_waveguides() const { return waveguides.size(); }
        std::size_t num_carriers() const { return carriers.size(); }

        // Throws std::invalid_argument when any invariant is broken.
        void validate() const;
    };

    // Users are drawn uniformly i.i.d. in the template's region. Same (template, seed), same Scenario.
    Scenario generate_drop(const ScenarioTemplate &tmpl, std::uint64_t seed);

    // Scenario with explicitly given user positions (no randomness).
    Scenario make_scenario(const ScenarioTemplate &tmpl, std::vector<Position3D> users);

    struct PlacementConfig
    {
        double search_step = 0.001;            // grid step of the fine line search [m]
        std::optional<double> search_span;     // default 20 * search_step
        std::optional<double> inter_pa_spacing; // default: scenario min spacing
        std::size_t max_outer_iters = 100;
        std::size_t patience = 10;
        double outer_tol = 1e-3;

        double resolved_span() const { return search_span.value_or(20.0 * search_step); }
        double resolved_inter_pa_spacing(const Scenario &scenario) const
        {
            return inter_pa_spacing.value_or(scenario.min_spacing);
        }
        void validate(const Scenario &scenario) const;
    };

    struct BeamformerConfig
    {
        double step_lambda = 0.05;
        double step_eta = 0.05;
        double step_zeta = 0.05;
        double mu_min = 1e-12;
        double mu_max = 1.0;
        double bisection_tol = 1e-4; // relative power tolerance below P_max
        std::size_t max_bisection_iters = 200;
        std::size_t max_bracket_doublings = 200;
        std::size_t max_inner_iters = 200;
        double inner_tol = 1e-4; // bits/s/Hz

        void validate() const;
    };
}

#endif
