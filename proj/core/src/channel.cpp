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

#include "pinch/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pinch
{
    namespace
    {
        constexpr double kTwoPi = 2.0 * std::numbers::pi;

        void check_indices(const Scenario &s, std::size_t l, std::size_t k, std::size_t m, std::size_t n)
        {
            if (l >= s.num_carriers() || k >= s.num_users() || m >= s.num_waveguides() || n >= s.pas_per_guide)
                throw std::out_of_range("channel index out of range");
        }

        long double ldistance(const Position3D &a, const Position3D &b)
        {
            const long double dx = static_cast<long double>(a.x) - b.x;
            const long double dy = static_cast<long double>(a.y) - b.y;
            const long double dz = static_cast<long double>(a.z) - b.z;
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        }

        // exp(-j 2 pi * cycles), reduced to a fractional cycle first so that
        // large electrical lengths keep full precision.
        Complex cycle_phasor(long double cycles)
        {
            const auto frac = static_cast<double>(cycles - std::round(cycles));
            return std::polar(1.0, -kTwoPi * frac);
        }
    }

    double fractional_cycles(const Waveguide &guide, double x, const Position3D &user, double frequency)
    {
        const Position3D p = guide.point_at(x);
        const long double path = ldistance(p, user) + static_cast<long double>(guide.eta_eff) * ldistance(guide.feed_point, p);
        const long double cycles = path * frequency / static_cast<long double>(kSpeedOfLight);
        return static_cast<double>(cycles - std::round(cycles));
    }

    std::vector<std::string> layout_violations(const Scenario &scenario, const PaState &pa, double tol)
    {
        std::vector<std::string> out;
        if (pa.num_guides() != scenario.num_waveguides() || pa.per_guide() != scenario.pas_per_guide)
        {
            out.emplace_back("PA state shape does not match the scenario");
            return out;
        }
        for (std::size_t m = 0; m < pa.num_guides(); ++m)
        {
            const auto &g = pa.guide(m);
            for (std::size_t n = 0; n < g.size(); ++n)
            {
                std::ostringstream msg;
                if (!std::isfinite(g[n]) || g[n] < -tol || g[n] > scenario.region_size + tol)
                {
                    msg << "PA (" << m << "," << n << ") at x=" << g[n] << " outside [0, " << scenario.region_size << "]";
                    out.push_back(msg.str());
                }
                if (n > 0 && std::abs(g[n] - g[n - 1]) < scenario.min_spacing - tol)
                {
                    msg.str("");
                    msg << "PAs (" << m << "," << n - 1 << ")-(" << m << "," << n << ") spaced "
                        << std::abs(g[n] - g[n - 1]) << " < " << scenario.min_spacing;
                    out.push_back(msg.str());
                }
            }
        }
        return out;
    }

    Complex freespace_coeff(const Position3D &pa, const Position3D &user, double wavelength)
    {
        const long double s = ldistance(pa, user);
        if (!(s > 0.0L))
            throw std::domain_error("free-space coefficient undefined at zero PA-user distance");
        return (wavelength / (4.0 * std::numbers::pi * static_cast<double>(s))) * cycle_phasor(s / wavelength);
    }

    Complex waveguide_coeff(const Position3D &feed, const Position3D &pa, double wavelength,
                            double absorption, double eta_eff)
    {
        const long double s = ldistance(feed, pa);
        return std::sqrt(std::exp(-absorption * static_cast<double>(s))) *
               cycle_phasor(static_cast<long double>(eta_eff) * s / wavelength);
    }

    Complex pa_term(const Scenario &scenario, std::size_t m, double x, std::size_t l, std::size_t k)
    {
        const Waveguide &w = scenario.waveguides.at(m);
        const double lambda = scenario.carriers.wavelength(l);
        const Position3D p = w.point_at(x);
        const Position3D &u = scenario.users.at(k);
        const double s_user = distance(p, u);
        if (!(s_user > 0.0))
            throw std::domain_error("free-space coefficient undefined at zero PA-user distance");
        const double amplitude = lambda * std::sqrt(std::exp(-w.absorption * distance(w.feed_point, p))) /
                                 (4.0 * std::numbers::pi * s_user);
        return amplitude * std::polar(1.0, -kTwoPi * fractional_cycles(w, x, u, scenario.carriers.frequency(l)));
    }

    namespace
    {
        Complex guide_entry(const Scenario &scenario, const PaState &pa, std::size_t m, std::size_t l, std::size_t k)
        {
            Complex sum{0.0, 0.0};
            for (double x : pa.guide(m))
                sum += pa_term(scenario, m, x, l, k);
            return sum / std::sqrt(static_cast<double>(scenario.pas_per_guide));
        }
    }

    CVector effective_channel(const Scenario &scenario, const PaState &pa, std::size_t l, std::size_t k)
    {
        const auto M = scenario.num_waveguides();
        CVector h(static_cast<Eigen::Index>(M));
        for (std::size_t m = 0; m < M; ++m)
            h(static_cast<Eigen::Index>(m)) = guide_entry(scenario, pa, m, l, k);
        return h;
    }

    ChannelSet build_channels(const Scenario &scenario, const PaState &pa)
    {
        ChannelSet out(scenario.num_carriers(), scenario.num_users(), scenario.num_waveguides());
        for (std::size_t l = 0; l < scenario.num_carriers(); ++l)
            for (std::size_t k = 0; k < scenario.num_users(); ++k)
                out.at(l, k) = effective_channel(scenario, pa, l, k);
        return out;
    }

    void refresh_guide(const Scenario &scenario, const PaState &pa, std::size_t m, ChannelSet &channels)
    {
        for (std::size_t l = 0; l < scenario.num_carriers(); ++l)
            for (std::size_t k = 0; k < scenario.num_users(); ++k)
                channels.at(l, k)(static_cast<Eigen::Index>(m)) = guide_entry(scenario, pa, m, l, k);
    }

    ChannelDecomposition decompose(const Scenario &scenario, const PaState &pa,
                                   std::size_t l, std::size_t k, std::size_t m, std::size_t n)
    {
        check_indices(scenario, l, k, m, n);
        return decompose(scenario, pa, effective_channel(scenario, pa, l, k), l, k, m, n);
    }

    ChannelDecomposition decompose(const Scenario &scenario, const PaState &pa, const CVector &h,
                                   std::size_t l, std::size_t k, std::size_t m, std::size_t n)
    {
        check_indices(scenario, l, k, m, n);
        const auto M = static_cast<Eigen::Index>(scenario.num_waveguides());
        const auto slot = static_cast<Eigen::Index>(m);
        const Waveguide &w = scenario.waveguides[m];
        const double lambda = scenario.carriers.wavelength(l);
        const Position3D p = w.point_at(pa.at(m, n));
        const double s_user = distance(p, scenario.users[k]);
        const double s_feed = distance(w.feed_point, p);
        if (!(s_user > 0.0))
            throw std::domain_error("decomposition undefined at zero PA-user distance");

        ChannelDecomposition d;
        d.dist = Eigen::VectorXd::Zero(M);
        d.phase = CVector::Zero(M);
        d.single = CVector::Zero(M);
        d.dist(slot) = lambda * std::sqrt(std::exp(-w.absorption * s_feed)) / (4.0 * std::numbers::pi * s_user);
        d.phase(slot) = std::polar(1.0, -kTwoPi * fractional_cycles(w, pa.at(m, n), scenario.users[k], scenario.carriers.frequency(l)));
        d.single(slot) = d.dist(slot) * d.phase(slot) / std::sqrt(static_cast<double>(scenario.pas_per_guide));
        d.residual = h - d.single;
        if (scenario.pas_per_guide == 1)
            d.residual(slot) = Complex{0.0, 0.0};
        return d;
    }
}
