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

#include "pinch/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pinch
{
    namespace
    {
        double private_interference(const CVector &h, const BeamformingState &bf, std::size_t l, std::optional<std::size_t> skip)
        {
            double sum = 0.0;
            const auto &priv = bf.priv.at(l);
            for (std::size_t i = 0; i < priv.size(); ++i)
                if (!skip || *skip != i)
                    sum += std::norm(h.dot(priv[i]));
            return sum;
        }

        // h^H w of the stream and the full quadratic-transform denominator.
        std::pair<Complex, double> stream_terms(Stream stream, const CVector &h, const BeamformingState &bf,
                                                double noise, std::size_t l, std::size_t k)
        {
            const double all_private = private_interference(h, bf, l, std::nullopt);
            if (stream == Stream::Private)
                return {h.dot(bf.priv.at(l).at(k)), all_private + noise};
            const Complex a = h.dot(bf.common.at(l));
            return {a, std::norm(a) + all_private + noise};
        }
    }

    BeamformingState BeamformingState::zeros(std::size_t num_carriers, std::size_t num_users, std::size_t num_guides)
    {
        const auto M = static_cast<Eigen::Index>(num_guides);
        BeamformingState bf;
        bf.common.assign(num_carriers, CVector::Zero(M));
        bf.priv.assign(num_carriers, std::vector<CVector>(num_users, CVector::Zero(M)));
        return bf;
    }

    double BeamformingState::total_power() const
    {
        double p = 0.0;
        for (std::size_t l = 0; l < common.size(); ++l)
        {
            p += common[l].squaredNorm();
            for (const auto &w : priv[l])
                p += w.squaredNorm();
        }
        return p;
    }

    double RateReport::user_rate(std::size_t k) const
    {
        double r = 0.0;
        for (std::size_t l = 0; l < rp.size(); ++l)
            r += rp[l].at(k) + r_alloc[l].at(k);
        return r;
    }

    double RateReport::min_user_rate() const
    {
        if (rp.empty())
            return 0.0;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < rp.front().size(); ++k)
            lo = std::min(lo, user_rate(k));
        return lo;
    }

    double sinr_private(const CVector &h, const BeamformingState &bf, std::size_t l, std::size_t k, double noise)
    {
        const double signal = std::norm(h.dot(bf.priv.at(l).at(k)));
        return signal / (private_interference(h, bf, l, k) + noise);
    }

    double sinr_common(const CVector &h, const BeamformingState &bf, std::size_t l, std::size_t /*k*/, double noise)
    {
        const double signal = std::norm(h.dot(bf.common.at(l)));
        return signal / (private_interference(h, bf, l, std::nullopt) + noise);
    }

    RateReport rate_report(const ChannelSet &channels, const BeamformingState &bf,
                           const std::optional<Grid<double>> &r_alloc, double noise)
    {
        const auto L = channels.num_carriers();
        const auto K = channels.num_users();
        RateReport rep;
        rep.rc_user = make_grid<double>(L, K);
        rep.rp = make_grid<double>(L, K);
        rep.rc_cap.assign(L, 0.0);
        for (std::size_t l = 0; l < L; ++l)
        {
            double cap = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < K; ++k)
            {
                const auto &h = channels.at(l, k);
                rep.rc_user[l][k] = std::log2(1.0 + sinr_common(h, bf, l, k, noise));
                rep.rp[l][k] = std::log2(1.0 + sinr_private(h, bf, l, k, noise));
                cap = std::min(cap, rep.rc_user[l][k]);
            }
            rep.rc_cap[l] = cap;
        }

        if (r_alloc)
        {
            if (r_alloc->size() != L)
                throw std::invalid_argument("common-rate allocation has the wrong number of carriers");
            rep.r_alloc = *r_alloc;
            for (std::size_t l = 0; l < L; ++l)
            {
                if (rep.r_alloc[l].size() != K)
                    throw std::invalid_argument("common-rate allocation has the wrong number of users");
                double total = 0.0;
                for (double r : rep.r_alloc[l])
                {
                    if (r < 0.0)
                        rep.allocation_feasible = false;
                    total += r;
                }
                if (total > rep.rc_cap[l] + 1e-9)
                    rep.allocation_feasible = false;
            }
        }
        else
        {
            rep.r_alloc = make_grid<double>(L, K);
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t k = 0; k < K; ++k)
                    rep.r_alloc[l][k] = rep.rc_cap[l] / static_cast<double>(K);
        }

        for (std::size_t l = 0; l < L; ++l)
        {
            rep.sum_rate += rep.rc_cap[l];
            for (std::size_t k = 0; k < K; ++k)
                rep.sum_rate += rep.rp[l][k];
        }
        return rep;
    }

    double auxiliary_surrogate(double alpha, double gamma)
    {
        constexpr double ln2 = std::numbers::ln2;
        return std::log2(1.0 + alpha) - alpha / ln2 + (1.0 + alpha) * gamma / (ln2 * (1.0 + gamma));
    }

    double optimal_alpha(double gamma)
    {
        if (!(gamma >= 0.0))
            throw std::invalid_argument("SINR must be non-negative");
        return gamma;
    }

    Complex optimal_xi(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                       double noise, std::size_t l, std::size_t k)
    {
        const auto [a, denom] = stream_terms(stream, h, bf, noise, l, k);
        return std::sqrt(1.0 + alpha) * a / denom;
    }

    double quadratic_surrogate(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                               Complex xi, double noise, std::size_t l, std::size_t k)
    {
        const auto [a, denom] = stream_terms(stream, h, bf, noise, l, k);
        return 2.0 * std::sqrt(1.0 + alpha) * std::real(std::conj(xi) * a) - std::norm(xi) * denom;
    }

    double fractional_form(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                           double noise, std::size_t l, std::size_t k)
    {
        const auto [a, denom] = stream_terms(stream, h, bf, noise, l, k);
        return (1.0 + alpha) * std::norm(a) / denom;
    }

    AuxiliaryState update_auxiliaries(const ChannelSet &channels, const BeamformingState &bf, double noise)
    {
        const auto L = channels.num_carriers();
        const auto K = channels.num_users();
        AuxiliaryState aux;
        aux.alpha_p = make_grid<double>(L, K);
        aux.alpha_c = make_grid<double>(L, K);
        aux.xi_p = make_grid<Complex>(L, K);
        aux.xi_c = make_grid<Complex>(L, K);
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t k = 0; k < K; ++k)
            {
                const auto &h = channels.at(l, k);
                aux.alpha_p[l][k] = optimal_alpha(sinr_private(h, bf, l, k, noise));
                aux.alpha_c[l][k] = optimal_alpha(sinr_common(h, bf, l, k, noise));
                aux.xi_p[l][k] = optimal_xi(Stream::Private, h, bf, aux.alpha_p[l][k], noise, l, k);
                aux.xi_c[l][k] = optimal_xi(Stream::Common, h, bf, aux.alpha_c[l][k], noise, l, k);
            }
        return aux;
    }
}
