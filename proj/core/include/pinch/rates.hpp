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

#ifndef PINCH_RATES_HPP
#define PINCH_RATES_HPP

#include "pinch/channel.hpp"

#include <optional>

namespace pinch
{
    // Per-carrier common beamformer and per-(carrier, user) private beamformers.
    struct BeamformingState
    {
        std::vector<CVector> common;  // [l]
        Grid<CVector> priv;           // [l][k]

        static BeamformingState zeros(std::size_t num_carriers, std::size_t num_users, std::size_t num_guides);

        std::size_t num_carriers() const { return common.size(); }
        std::size_t num_users() const { return priv.empty() ? 0 : priv.front().size(); }
        double total_power() const;
    };

    struct RateReport
    {
        Grid<double> rc_user;      // common-stream decoding rate of user k on carrier l
        std::vector<double> rc_cap; // min over users, per carrier
        Grid<double> rp;           // private rates
        Grid<double> r_alloc;      // common rate allocated to each user
        double sum_rate = 0.0;
        bool allocation_feasible = true;

        // Total rate of user k over all carriers: sum_l (r_alloc + rp).
        double user_rate(std::size_t k) const;
        double min_user_rate() const;
    };

    // Fractional-programming auxiliaries per (carrier, user).
    struct AuxiliaryState
    {
        Grid<double> alpha_p, alpha_c;
        Grid<Complex> xi_p, xi_c;
    };

    enum class Stream
    {
        Private,
        Common
    };

    // |h^H w_p[l][k]|^2 / (sum_{i != k} |h^H w_p[l][i]|^2 + noise)
    double sinr_private(const CVector &h, const BeamformingState &bf, std::size_t l, std::size_t k, double noise);

    // |h^H w_c[l]|^2 / (sum_i |h^H w_p[l][i]|^2 + noise)
    double sinr_common(const CVector &h, const BeamformingState &bf, std::size_t l, std::size_t k, double noise);

    // Rates for the given beamformers. Without an allocation the common cap of each carrier is
    // split equally. A supplied allocation is kept verbatim; allocation_feasible reports whether
    // every carrier's allocation fits under its cap.
    RateReport rate_report(const ChannelSet &channels, const BeamformingState &bf,
                           const std::optional<Grid<double>> &r_alloc, double noise);

    // log2(1 + a) - a / ln2 + (1 + a) g / (ln2 (1 + g)); maximised at a = g with value log2(1 + g).
    double auxiliary_surrogate(double alpha, double gamma);

    // Throws std::invalid_argument for negative SINR.
    double optimal_alpha(double gamma);

    Complex optimal_xi(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                       double noise, std::size_t l, std::size_t k);

    // Quadratic-transform surrogate 2 sqrt(1+a) Re{xi* h^H w} - |xi|^2 * denominator.
    double quadratic_surrogate(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                               Complex xi, double noise, std::size_t l, std::size_t k);

    // (1 + a) |h^H w|^2 / denominator, the value the surrogate reaches at the optimal xi.
    double fractional_form(Stream stream, const CVector &h, const BeamformingState &bf, double alpha,
                           double noise, std::size_t l, std::size_t k);

    // alpha = SINR and xi at its closed form, for every (l, k).
    AuxiliaryState update_auxiliaries(const ChannelSet &channels, const BeamformingState &bf, double noise);
}

#endif
