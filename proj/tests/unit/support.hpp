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

#ifndef PINCH_TEST_SUPPORT_HPP
#define PINCH_TEST_SUPPORT_HPP

#include "pinch/orchestrator.hpp"

#include <random>

namespace pinch::test
{
    inline double lambda_28() { return kSpeedOfLight / 28.0e9; }

    // Single guide at y = 5, height 3, feed at x = 0.
    inline ScenarioTemplate tiny_template(std::size_t k = 1, std::size_t m = 1, std::size_t n = 1, std::size_t l = 1)
    {
        ScenarioTemplate t;
        t.num_users = k;
        t.num_waveguides = m;
        t.pas_per_guide = n;
        t.num_carriers = l;
        if (m == 1)
            t.feed_y = {5.0};
        else
            t.feed_y.clear();
        return t;
    }

    inline CVector random_vector(std::mt19937_64 &rng, std::size_t m, double scale = 1.0)
    {
        std::normal_distribution<double> nd(0.0, scale);
        CVector v(static_cast<Eigen::Index>(m));
        for (auto &z : v)
            z = Complex(nd(rng), nd(rng));
        return v;
    }

    inline ChannelSet random_channels(std::mt19937_64 &rng, std::size_t l, std::size_t k, std::size_t m,
                                      double scale = 1.0)
    {
        ChannelSet ch(l, k, m);
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < k; ++b)
                ch.at(a, b) = random_vector(rng, m, scale);
        return ch;
    }

    inline BeamformingState random_beamformers(std::mt19937_64 &rng, std::size_t l, std::size_t k, std::size_t m,
                                               double scale = 1.0)
    {
        auto bf = BeamformingState::zeros(l, k, m);
        for (std::size_t a = 0; a < l; ++a)
        {
            bf.common[a] = random_vector(rng, m, scale);
            for (std::size_t b = 0; b < k; ++b)
                bf.priv[a][b] = random_vector(rng, m, scale);
        }
        return bf;
    }

    inline LagrangeState random_multipliers(std::mt19937_64 &rng, std::size_t l, std::size_t k)
    {
        std::uniform_real_distribution<double> u(0.0, 2.0);
        auto lag = LagrangeState::initial(l, k);
        for (auto &row : lag.lambda_com)
            for (auto &v : row)
                v = u(rng);
        for (auto &v : lag.eta_qos)
            v = u(rng);
        for (auto &v : lag.zeta_alloc)
            v = u(rng);
        lag.mu = u(rng);
        return lag;
    }

    inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}

#endif
