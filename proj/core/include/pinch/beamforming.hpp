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

#ifndef PINCH_BEAMFORMING_HPP
#define PINCH_BEAMFORMING_HPP

#include "pinch/rates.hpp"

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

namespace pinch
{
    // Raised when mu = 0 and the weighted channel Gram matrix is rank deficient.
    class SingularSystemError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct LagrangeState
    {
        double mu = 0.0;
        Grid<double> lambda_com;        // [l][k], each row sums to 1 + zeta[l] when the common stream is on
        std::vector<double> eta_qos;    // [k]
        std::vector<double> zeta_alloc; // [l]
        Grid<double> r_alloc;           // [l][k]

        static LagrangeState initial(std::size_t num_carriers, std::size_t num_users, bool common_stream = true);
    };

    struct BeamformingOptions
    {
        bool common_stream = true; // false: w_c pinned to zero and lambda frozen at zero (SDMA)
    };

    // (sum_k beta_c h h^H + mu I)^{-1} sum_k rho_c h for carrier l.
    CVector common_beamformer(std::span<const CVector> h_l, const LagrangeState &lag, const AuxiliaryState &aux,
                              double mu, std::size_t l);

    // (1 + eta_k) sqrt(1 + alpha_p) xi_p (sum_j beta_p[j] h_j h_j^H + mu I)^{-1} h_k for carrier l.
    CVector private_beamformer(std::span<const CVector> h_l, const LagrangeState &lag, const AuxiliaryState &aux,
                               double mu, std::size_t l, std::size_t k);

    // Lagrangian gradients with respect to w_c[l] and w_p[l][k], evaluated at the given vectors.
    CVector lagrangian_gradient_common(std::span<const CVector> h_l, const LagrangeState &lag,
                                       const AuxiliaryState &aux, double mu, std::size_t l, const CVector &w);
    CVector lagrangian_gradient_private(std::span<const CVector> h_l, const LagrangeState &lag,
                                        const AuxiliaryState &aux, double mu, std::size_t l, std::size_t k,
                                        const CVector &w);

    // Projected subgradient step on lambda, eta and zeta. lambda rows are projected onto
    // {lambda >= 0, sum_k lambda = 1 + zeta_l}, the dual-feasible set for the free common rate.
    LagrangeState update_multipliers(const LagrangeState &lag, const RateReport &report, const BeamformerConfig &cfg,
                                     double r_min, const BeamformingOptions &opts = {});

    // r_k = (eta_k - zeta)^+ / sum_j (eta_j - zeta)^+ * cap; all zeros when every positive part vanishes.
    std::vector<double> allocate_common_rate(std::span<const double> eta, double zeta, double cap);

    // Allocation meeting every user's R_min when the total common capacity allows it. Starts from
    // the ratio rule and only deviates when that leaves a user short. Returns nullopt if infeasible.
    std::optional<Grid<double>> qos_allocation(const RateReport &report, const Grid<double> &preferred, double r_min);

    // Euclidean projection of v onto {x >= 0, sum x = total}.
    std::vector<double> project_to_simplex(std::span<const double> v, double total);

    struct MuSolution
    {
        double mu = 0.0;
        BeamformingState bf;
        double power = 0.0;
        double unconstrained_power = 0.0; // power of the closed forms at mu_min
    };

    // All closed-form beamformers at a given mu.
    BeamformingState beamformers_at(const ChannelSet &channels, const LagrangeState &lag, const AuxiliaryState &aux,
                                    double mu, const BeamformingOptions &opts = {});

    // Smallest mu >= mu_min whose closed-form beamformers fit the power budget.
    MuSolution bisect_mu(const ChannelSet &channels, const LagrangeState &lag, const AuxiliaryState &aux,
                         double p_max, const BeamformerConfig &cfg, const BeamformingOptions &opts = {});

    // Matched-filter directions with the budget split equally over all active streams.
    BeamformingState initial_beamformers(const ChannelSet &channels, double p_max, const BeamformingOptions &opts = {});

    struct BeamformingResult
    {
        BeamformingState bf;
        LagrangeState lag;
        AuxiliaryState aux;
        RateReport report;
        std::size_t iterations = 0;
        bool converged = false;
        bool qos_satisfied = false;
        // Power at mu_min of the closed forms that produced bf. Infinite when bf is the matched-filter
        // start, whose power is set to the budget directly.
        double unconstrained_power = 0.0;
    };

    struct WarmStart
    {
        BeamformingState bf;
        LagrangeState lag;
        double unconstrained_power = std::numeric_limits<double>::infinity();
    };

    // Alternates auxiliaries, multipliers, allocation and the mu bisection with positions frozen.
    // Returns the best iterate seen (QoS-satisfying iterates preferred).
    BeamformingResult design_beamforming(const ChannelSet &channels, const Scenario &scenario,
                                         const BeamformerConfig &cfg, const BeamformingOptions &opts = {},
                                         const std::optional<WarmStart> &warm = std::nullopt);
}

#endif
