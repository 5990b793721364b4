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

#include "pinch/scenario.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace pinch
{
    namespace
    {
        bool finite(const Position3D &p)
        {
            return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
        }
    }

    double distance(const Position3D &a, const Position3D &b)
    {
        const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

    void Waveguide::validate() const
    {
        if (!finite(feed_point))
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": non-finite feed point");
        if (feed_point.y != axis_y || feed_point.z != height)
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": feed point must lie on the guide axis");
        if (!(length > 0.0))
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": length must be positive");
        if (!(absorption >= 0.0))
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": absorption must be non-negative");
        if (!(eta_eff >= 1.0))
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": eta_eff must be >= 1");
        if (!(height >= 0.0))
            throw std::invalid_argument("waveguide " + std::to_string(index) + ": height must be non-negative");
    }

    CarrierGrid::CarrierGrid(std::size_t count, double center_frequency_hz, double spacing_hz)
        : center_(center_frequency_hz), spacing_(spacing_hz)
    {
        if (count == 0)
            throw std::invalid_argument("carrier grid needs at least one carrier");
        if (!(center_frequency_hz > 0.0) || !(spacing_hz >= 0.0))
            throw std::invalid_argument("carrier grid: centre frequency must be positive and spacing non-negative");
        frequencies_.reserve(count);
        wavelengths_.reserve(count);
        const double mid = 0.5 * static_cast<double>(count - 1);
        for (std::size_t l = 0; l < count; ++l)
        {
            const double f = center_frequency_hz + (static_cast<double>(l) - mid) * spacing_hz;
            if (!(f > 0.0))
                throw std::invalid_argument("carrier grid: carrier " + std::to_string(l) + " has non-positive frequency");
            frequencies_.push_back(f);
            wavelengths_.push_back(kSpeedOfLight / f);
        }
    }

    double ScenarioTemplate::resolved_min_spacing() const
    {
        return min_spacing.value_or(0.5 * kSpeedOfLight / center_frequency_hz);
    }

    std::vector<double> ScenarioTemplate::resolved_feed_y() const
    {
        if (!feed_y.empty())
        {
            if (feed_y.size() != num_waveguides)
                throw std::invalid_argument("feed_y must list one y-coordinate per waveguide");
            return feed_y;
        }
        std::vector<double> ys(num_waveguides, 0.0);
        if (num_waveguides > 1)
            for (std::size_t m = 0; m < num_waveguides; ++m)
                ys[m] = -5.0 + 10.0 * static_cast<double>(m) / static_cast<double>(num_waveguides - 1);
        return ys;
    }

    Region ScenarioTemplate::resolved_user_region() const
    {
        if (user_region)
            return *user_region;
        const auto ys = resolved_feed_y();
        double centre = 0.0;
        for (double y : ys)
            centre += y;
        centre /= static_cast<double>(ys.size());
        return {0.0, region_size, centre - 0.5 * region_size, centre + 0.5 * region_size};
    }

    void Scenario::validate() const
    {
        if (users.empty())
            throw std::invalid_argument("scenario needs at least one user");
        if (waveguides.empty())
            throw std::invalid_argument("scenario needs at least one waveguide");
        if (pas_per_guide == 0)
            throw std::invalid_argument("scenario needs at least one PA per waveguide");
        if (carriers.size() == 0)
            throw std::invalid_argument("scenario needs at least one carrier");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("noise power must be positive");
        if (!(p_max > 0.0))
            throw std::invalid_argument("P_max must be positive");
        if (!(min_spacing > 0.0))
            throw std::invalid_argument("minimum PA spacing must be positive");
        if (!(region_size > 0.0))
            throw std::invalid_argument("region size must be positive");
        if (!(r_min >= 0.0))
            throw std::invalid_argument("R_min must be non-negative");
        for (const auto &u : users)
        {
            if (!finite(u))
                throw std::invalid_argument("user position is not finite");
            if (u.z < 0.0)
                throw std::invalid_argument("user height must be non-negative");
        }
        for (const auto &w : waveguides)
        {
            w.validate();
            if (w.length != region_size)
                throw std::invalid_argument("waveguide length must equal the region size");
        }
    }

    namespace
    {
        Scenario skeleton(const ScenarioTemplate &tmpl)
        {
            if (!(tmpl.region_size > 0.0))
                throw std::invalid_argument("region size must be positive");
            if (tmpl.num_users == 0 || tmpl.num_waveguides == 0 || tmpl.pas_per_guide == 0 || tmpl.num_carriers == 0)
                throw std::invalid_argument("K, M, N and L must all be at least 1");
            const Region region = tmpl.resolved_user_region();
            if (!(region.x_max >= region.x_min) || !(region.y_max >= region.y_min) ||
                !std::isfinite(region.x_min + region.x_max + region.y_min + region.y_max))
                throw std::invalid_argument("user region bounds are inverted or non-finite");

            Scenario s;
            s.carriers = CarrierGrid(tmpl.num_carriers, tmpl.center_frequency_hz, tmpl.carrier_spacing_hz);
            s.pas_per_guide = tmpl.pas_per_guide;
            s.noise_power = dbm_to_watts(tmpl.noise_dbm);
            s.p_max = dbm_to_watts(tmpl.p_max_dbm);
            s.r_min = tmpl.r_min;
            s.min_spacing = tmpl.resolved_min_spacing();
            s.region_size = tmpl.region_size;
            s.user_region = region;

            const auto ys = tmpl.resolved_feed_y();
            for (std::size_t m = 0; m < tmpl.num_waveguides; ++m)
            {
                Waveguide w;
                w.index = m;
                w.axis_y = ys[m];
                w.height = tmpl.waveguide_height;
                w.feed_point = {0.0, ys[m], tmpl.waveguide_height};
                w.length = tmpl.region_size;
                w.absorption = tmpl.absorption;
                w.eta_eff = tmpl.eta_eff;
                s.waveguides.push_back(w);
            }
            return s;
        }
    }

    Scenario generate_drop(const ScenarioTemplate &tmpl, std::uint64_t seed)
    {
        Scenario s = skeleton(tmpl);
        s.rng_seed = seed;
        std::mt19937_64 rng(seed);
        // Explicit affine map keeps a collapsed region exact.
        const auto draw = [&rng](double lo, double hi)
        {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            return lo + (hi - lo) * u;
        };
        const Region &r = s.user_region;
        s.users.reserve(tmpl.num_users);
        for (std::size_t k = 0; k < tmpl.num_users; ++k)
        {
            const double x = draw(r.x_min, r.x_max);
            const double y = draw(r.y_min, r.y_max);
            s.users.push_back({x, y, 0.0});
        }
        s.validate();
        return s;
    }

    Scenario make_scenario(const ScenarioTemplate &tmpl, std::vector<Position3D> users)
    {
        Scenario s = skeleton(tmpl);
        s.users = std::move(users);
        s.validate();
        return s;
    }

    void PlacementConfig::validate(const Scenario &scenario) const
    {
        const double span = resolved_span();
        if (!(search_step > 0.0))
            throw std::invalid_argument("search step must be positive");
        if (!(span >= 0.0))
            throw std::invalid_argument("search span must be non-negative");
        if (span > 0.0 && search_step > span)
            throw std::invalid_argument("search step must not exceed the search span");
        if (resolved_inter_pa_spacing(scenario) < scenario.min_spacing)
            throw std::invalid_argument("inter-PA spacing must be at least the minimum spacing");
    }

    void BeamformerConfig::validate() const
    {
        if (!(step_lambda > 0.0 && step_eta > 0.0 && step_zeta > 0.0))
            throw std::invalid_argument("multiplier step sizes must be positive");
        if (!(mu_min >= 0.0 && mu_min < mu_max))
            throw std::invalid_argument("bisection bounds must satisfy 0 <= mu_min < mu_max");
        if (!(bisection_tol > 0.0 && bisection_tol < 1.0))
            throw std::invalid_argument("bisection tolerance must lie in (0, 1)");
    }
}
