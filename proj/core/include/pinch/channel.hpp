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

#ifndef PINCH_CHANNEL_HPP
#define PINCH_CHANNEL_HPP

#include "pinch/scenario.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace pinch
{
    using Complex = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    template <typename T>
    using Grid = std::vector<std::vector<T>>;

    template <typename T>
    Grid<T> make_grid(std::size_t rows, std::size_t cols, const T &value = T{})
    {
        return Grid<T>(rows, std::vector<T>(cols, value));
    }

    // PA x-coordinates, indexed [waveguide][pa]. y and z come from the waveguide.
    class PaState
    {
    public:
        PaState() = default;
        PaState(std::size_t num_guides, std::size_t per_guide, double fill = 0.0)
            : x_(num_guides, std::vector<double>(per_guide, fill)) {}
        explicit PaState(Grid<double> x) : x_(std::move(x)) {}

        std::size_t num_guides() const { return x_.size(); }
        std::size_t per_guide() const { return x_.empty() ? 0 : x_.front().size(); }

        double &at(std::size_t m, std::size_t n) { return x_.at(m).at(n); }
        double at(std::size_t m, std::size_t n) const { return x_.at(m).at(n); }
        std::vector<double> &guide(std::size_t m) { return x_.at(m); }
        const std::vector<double> &guide(std::size_t m) const { return x_.at(m); }
        const Grid<double> &positions() const { return x_; }

        bool operator==(const PaState &) const = default;

    private:
        Grid<double> x_;
    };

    // Human-readable list of bound / spacing violations; empty when the layout is valid.
    std::vector<std::string> layout_violations(const Scenario &scenario, const PaState &pa, double tol = 1e-9);

    // Free-space LoS coefficient (lambda / 4 pi) exp(-j 2 pi s / lambda) / s.
    // Throws std::domain_error when the two points coincide.
    Complex freespace_coeff(const Position3D &pa, const Position3D &user, double wavelength);

    // In-waveguide coefficient sqrt(exp(-absorption s)) exp(-j 2 pi eta_eff s / lambda).
    Complex waveguide_coeff(const Position3D &feed, const Position3D &pa, double wavelength,
                            double absorption, double eta_eff);

    // Electrical length s_user + eta_eff * s_feed of a PA at x, in wavelengths at `frequency`,
    // reduced to [-0.5, 0.5]. Evaluated in extended precision.
    double fractional_cycles(const Waveguide &guide, double x, const Position3D &user, double frequency);

    // h * g for a single PA at coordinate x on guide m, without the 1/sqrt(N) factor.
    Complex pa_term(const Scenario &scenario, std::size_t m, double x, std::size_t l, std::size_t k);

    // Equivalent M-vector channel of user k on carrier l.
    CVector effective_channel(const Scenario &scenario, const PaState &pa, std::size_t l, std::size_t k);

    class ChannelSet
    {
    public:
        ChannelSet() = default;
        ChannelSet(std::size_t num_carriers, std::size_t num_users, std::size_t num_guides)
            : h_(num_carriers, std::vector<CVector>(num_users, CVector::Zero(static_cast<Eigen::Index>(num_guides)))) {}

        std::size_t num_carriers() const { return h_.size(); }
        std::size_t num_users() const { return h_.empty() ? 0 : h_.front().size(); }
        std::size_t num_guides() const
        {
            return (h_.empty() || h_.front().empty()) ? 0 : static_cast<std::size_t>(h_.front().front().size());
        }

        const CVector &at(std::size_t l, std::size_t k) const { return h_.at(l).at(k); }
        CVector &at(std::size_t l, std::size_t k) { return h_.at(l).at(k); }
        const std::vector<CVector> &carrier(std::size_t l) const { return h_.at(l); }

    private:
        Grid<CVector> h_;
    };

    ChannelSet build_channels(const Scenario &scenario, const PaState &pa);

    // Rewrites entry m of every h[l][k] after guide m's PAs moved.
    void refresh_guide(const Scenario &scenario, const PaState &pa, std::size_t m, ChannelSet &channels);

    // Split of h[l][k] into the part carried by PA (m, n) and everything else, plus the
    // distance / phase factorisation of that single-PA part. Only slot m of single, dist
    // and phase is non-zero.
    struct ChannelDecomposition
    {
        CVector single;
        CVector residual;
        Eigen::VectorXd dist;
        CVector phase;
    };

    ChannelDecomposition decompose(const Scenario &scenario, const PaState &pa,
                                   std::size_t l, std::size_t k, std::size_t m, std::size_t n);

    // Same, reusing an already built h[l][k].
    ChannelDecomposition decompose(const Scenario &scenario, const PaState &pa, const CVector &h,
                                   std::size_t l, std::size_t k, std::size_t m, std::size_t n);
}

#endif
