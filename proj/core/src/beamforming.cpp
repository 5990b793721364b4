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

#include "pinch/beamforming.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace pinch
{
    namespace
    {
        Eigen::Index dim(std::span<const CVector> h_l) { return h_l.empty() ? 0 : h_l.front().size(); }

        double beta_common(const LagrangeState &lag, const AuxiliaryState &aux, std::size_t l, std::size_t k)
        {
            return lag.lambda_com[l][k] * std::norm(aux.xi_c[l][k]);
        }

        Complex rho_common(const LagrangeState &lag, const AuxiliaryState &aux, std::size_t l, std::size_t k)
        {
            return lag.lambda_com[l][k] * std::sqrt(1.0 + aux.alpha_c[l][k]) * aux.xi_c[l][k];
        }

        double beta_private(const LagrangeState &lag, const AuxiliaryState &aux, std::size_t l, std::size_t j)
        {
            return lag.lambda_com[l][j] * std::norm(aux.xi_c[l][j]) + (1.0 + lag.eta_qos[j]) * std::norm(aux.xi_p[l][j]);
        }

        Complex private_scale(const LagrangeState &lag, const AuxiliaryState &aux, std::size_t l, std::size_t k)
        {
            return (1.0 + lag.eta_qos[k]) * std::sqrt(1.0 + aux.alpha_p[l][k]) * aux.xi_p[l][k];
        }

        CMatrix weighted_gram(std::span<const CVector> h_l, const std::function<double(std::size_t)> &weight)
        {
            const auto M = dim(h_l);
            CMatrix A = CMatrix::Zero(M, M);
            for (std::size_t k = 0; k < h_l.size(); ++k)
                A.noalias() += weight(k) * h_l[k] * h_l[k].adjoint();
            return A;
        }

        CVector regularised_solve(CMatrix A, const CVector &rhs, double mu)
        {
            if (rhs.squaredNorm() == 0.0)
                return CVector::Zero(rhs.size());
            if (mu <= 0.0)
            {
                Eigen::SelfAdjointEigenSolver<CMatrix> es(A, Eigen::EigenvaluesOnly);
                const double top = es.eigenvalues().maxCoeff();
                if (!(es.eigenvalues().minCoeff() > 1e-13 * std::max(top, 1e-300)))
                    throw SingularSystemError("beamformer system is singular at mu = 0");
            }
            A.diagonal().array() += mu;
            Eigen::LLT<CMatrix> llt(A);
            if (llt.info() != Eigen::Success)
                throw SingularSystemError("beamformer system is not positive definite");
            return llt.solve(rhs);
        }

        // Spectral form of one carrier's systems, so that w(mu) and the power are cheap to
        // re-evaluate during the bisection.
        struct CarrierSpectrum
        {
            Eigen::VectorXd eig_c, eig_p;
            CMatrix vec_c, vec_p;
            CVector proj_c;              // U_c^H rhs_c
            std::vector<CVector> proj_p; // U_p^H (scale_k h_k)

            static void decompose(const CMatrix &A, Eigen::VectorXd &eig, CMatrix &vec)
            {
                Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
                eig = es.eigenvalues().cwiseMax(0.0);
                vec = es.eigenvectors();
            }

            // Components along the numerical null space are zero in exact arithmetic (each rhs is
            // a combination of channels carrying positive weight).
            static void clean(CVector &proj, const Eigen::VectorXd &eig)
            {
                const double top = eig.size() ? eig.maxCoeff() : 0.0;
                for (Eigen::Index i = 0; i < proj.size(); ++i)
                    if (eig(i) <= 1e-13 * top)
                        proj(i) = Complex{0.0, 0.0};
            }

            double power(double mu) const
            {
                double p = 0.0;
                for (Eigen::Index i = 0; i < proj_c.size(); ++i)
                    p += std::norm(proj_c(i)) / ((eig_c(i) + mu) * (eig_c(i) + mu));
                for (const auto &proj : proj_p)
                    for (Eigen::Index i = 0; i < proj.size(); ++i)
                        p += std::norm(proj(i)) / ((eig_p(i) + mu) * (eig_p(i) + mu));
                return p;
            }

            static CVector apply(const CMatrix &vec, const Eigen::VectorXd &eig, const CVector &proj, double mu)
            {
                CVector scaled(proj.size());
                for (Eigen::Index i = 0; i < proj.size(); ++i)
                    scaled(i) = proj(i) / (eig(i) + mu);
                return vec * scaled;
            }
        };

        CarrierSpectrum carrier_spectrum(std::span<const CVector> h_l, const LagrangeState &lag,
                                         const AuxiliaryState &aux, std::size_t l, bool common)
        {
            const auto M = dim(h_l);
            const auto K = h_l.size();
            CarrierSpectrum cs;

            CVector rhs_c = CVector::Zero(M);
            if (common)
            {
                for (std::size_t k = 0; k < K; ++k)
                    rhs_c += rho_common(lag, aux, l, k) * h_l[k];
                CarrierSpectrum::decompose(weighted_gram(h_l, [&](std::size_t k) { return beta_common(lag, aux, l, k); }),
                                           cs.eig_c, cs.vec_c);
                cs.proj_c = cs.vec_c.adjoint() * rhs_c;
                CarrierSpectrum::clean(cs.proj_c, cs.eig_c);
            }
            else
            {
                cs.eig_c = Eigen::VectorXd::Zero(M);
                cs.vec_c = CMatrix::Identity(M, M);
                cs.proj_c = CVector::Zero(M);
            }

            CarrierSpectrum::decompose(weighted_gram(h_l, [&](std::size_t j) { return beta_private(lag, aux, l, j); }),
                                       cs.eig_p, cs.vec_p);
            cs.proj_p.reserve(K);
            for (std::size_t k = 0; k < K; ++k)
            {
                CVector proj = cs.vec_p.adjoint() * (private_scale(lag, aux, l, k) * h_l[k]);
                CarrierSpectrum::clean(proj, cs.eig_p);
                cs.proj_p.push_back(std::move(proj));
            }
            return cs;
        }

        void check_mu_zero(const std::vector<CarrierSpectrum> &spectra, double mu)
        {
            if (mu > 0.0)
                return;
            for (const auto &cs : spectra)
            {
                const auto singular_hit = [](const Eigen::VectorXd &eig, const CVector &proj)
                {
                    for (Eigen::Index i = 0; i < proj.size(); ++i)
                        if (eig(i) <= 0.0 && std::norm(proj(i)) > 0.0)
                            return true;
                    return false;
                };
                if (singular_hit(cs.eig_c, cs.proj_c))
                    throw SingularSystemError("common beamformer system is singular at mu = 0");
                for (const auto &proj : cs.proj_p)
                    if (singular_hit(cs.eig_p, proj))
                        throw SingularSystemError("private beamformer system is singular at mu = 0");
            }
        }

        BeamformingState beamformers_from(const std::vector<CarrierSpectrum> &spectra, std::size_t M, double mu)
        {
            check_mu_zero(spectra, mu);
            const auto L = spectra.size();
            const auto K = L ? spectra.front().proj_p.size() : 0;
            auto bf = BeamformingState::zeros(L, K, M);
            for (std::size_t l = 0; l < L; ++l)
            {
                const auto &cs = spectra[l];
                if (cs.proj_c.squaredNorm() > 0.0)
                    bf.common[l] = CarrierSpectrum::apply(cs.vec_c, cs.eig_c, cs.proj_c, mu);
                for (std::size_t k = 0; k < K; ++k)
                    if (cs.proj_p[k].squaredNorm() > 0.0)
                        bf.priv[l][k] = CarrierSpectrum::apply(cs.vec_p, cs.eig_p, cs.proj_p[k], mu);
            }
            return bf;
        }

        std::vector<CarrierSpectrum> all_spectra(const ChannelSet &channels, const LagrangeState &lag,
                                                 const AuxiliaryState &aux, const BeamformingOptions &opts)
        {
            std::vector<CarrierSpectrum> spectra;
            spectra.reserve(channels.num_carriers());
            for (std::size_t l = 0; l < channels.num_carriers(); ++l)
                spectra.push_back(carrier_spectrum(channels.carrier(l), lag, aux, l, opts.common_stream));
            return spectra;
        }

        double total_power(const std::vector<CarrierSpectrum> &spectra, double mu)
        {
            double p = 0.0;
            for (const auto &cs : spectra)
                p += cs.power(mu);
            return p;
        }
    }

    LagrangeState LagrangeState::initial(std::size_t num_carriers, std::size_t num_users, bool common_stream)
    {
        LagrangeState lag;
        const double share = common_stream ? 1.0 / static_cast<double>(num_users) : 0.0;
        lag.lambda_com = make_grid<double>(num_carriers, num_users, share);
        lag.eta_qos.assign(num_users, 0.0);
        lag.zeta_alloc.assign(num_carriers, 0.0);
        lag.r_alloc = make_grid<double>(num_carriers, num_users);
        return lag;
    }

    CVector common_beamformer(std::span<const CVector> h_l, const LagrangeState &lag, const AuxiliaryState &aux,
                              double mu, std::size_t l)
    {
        const auto M = dim(h_l);
        CVector rhs = CVector::Zero(M);
        for (std::size_t k = 0; k < h_l.size(); ++k)
            rhs += rho_common(lag, aux, l, k) * h_l[k];
        const CMatrix A = weighted_gram(h_l, [&](std::size_t k) { return beta_common(lag, aux, l, k); });
        return regularised_solve(A, rhs, mu);
    }

    CVector private_beamformer(std::span<const CVector> h_l, const LagrangeState &lag, const AuxiliaryState &aux,
                               double mu, std::size_t l, std::size_t k)
    {
        const CMatrix A = weighted_gram(h_l, [&](std::size_t j) { return beta_private(lag, aux, l, j); });
        return regularised_solve(A, private_scale(lag, aux, l, k) * h_l[k], mu);
    }

    CVector lagrangian_gradient_common(std::span<const CVector> h_l, const LagrangeState &lag,
                                       const AuxiliaryState &aux, double mu, std::size_t l, const CVector &w)
    {
        CVector g = -2.0 * mu * w;
        for (std::size_t k = 0; k < h_l.size(); ++k)
        {
            g += 2.0 * rho_common(lag, aux, l, k) * h_l[k];
            g -= 2.0 * beta_common(lag, aux, l, k) * h_l[k] * h_l[k].dot(w);
        }
        return g;
    }

    CVector lagrangian_gradient_private(std::span<const CVector> h_l, const LagrangeState &lag,
                                        const AuxiliaryState &aux, double mu, std::size_t l, std::size_t k,
                                        const CVector &w)
    {
        CVector g = 2.0 * private_scale(lag, aux, l, k) * h_l[k] - 2.0 * mu * w;
        for (std::size_t j = 0; j < h_l.size(); ++j)
            g -= 2.0 * beta_private(lag, aux, l, j) * h_l[j] * h_l[j].dot(w);
        return g;
    }

    std::vector<double> project_to_simplex(std::span<const double> v, double total)
    {
        std::vector<double> out(v.size(), 0.0);
        if (v.empty() || total <= 0.0)
            return out;
        std::vector<double> u(v.begin(), v.end());
        std::sort(u.begin(), u.end(), std::greater<>());
        double running = 0.0, theta = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
        {
            running += u[j];
            const double t = (running - total) / static_cast<double>(j + 1);
            if (u[j] - t > 0.0)
                theta = t;
        }
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = std::max(v[i] - theta, 0.0);
        return out;
    }

    LagrangeState update_multipliers(const LagrangeState &lag, const RateReport &report, const BeamformerConfig &cfg,
                                     double r_min, const BeamformingOptions &opts)
    {
        const auto L = report.rc_cap.size();
        const auto K = report.rp.empty() ? 0 : report.rp.front().size();
        LagrangeState next = lag;

        for (std::size_t l = 0; l < L; ++l)
        {
            const double allocated = std::accumulate(report.r_alloc[l].begin(), report.r_alloc[l].end(), 0.0);
            next.zeta_alloc[l] = std::max(0.0, lag.zeta_alloc[l] + cfg.step_zeta * (allocated - report.rc_cap[l]));
        }
        for (std::size_t k = 0; k < K; ++k)
            next.eta_qos[k] = std::max(0.0, lag.eta_qos[k] + cfg.step_eta * (r_min - report.user_rate(k)));

        for (std::size_t l = 0; l < L; ++l)
        {
            if (!opts.common_stream)
            {
                std::fill(next.lambda_com[l].begin(), next.lambda_com[l].end(), 0.0);
                continue;
            }
            std::vector<double> stepped(K);
            for (std::size_t k = 0; k < K; ++k)
                stepped[k] = lag.lambda_com[l][k] + cfg.step_lambda * (report.rc_cap[l] - report.rc_user[l][k]);
            next.lambda_com[l] = project_to_simplex(stepped, 1.0 + next.zeta_alloc[l]);
        }
        return next;
    }

    std::vector<double> allocate_common_rate(std::span<const double> eta, double zeta, double cap)
    {
        std::vector<double> r(eta.size(), 0.0);
        double total = 0.0;
        for (double e : eta)
            total += std::max(0.0, e - zeta);
        if (!(total > 0.0))
            return r;
        for (std::size_t k = 0; k < eta.size(); ++k)
            r[k] = std::max(0.0, eta[k] - zeta) / total * cap;
        return r;
    }

    std::optional<Grid<double>> qos_allocation(const RateReport &report, const Grid<double> &preferred, double r_min)
    {
        const auto L = report.rc_cap.size();
        const auto K = report.rp.empty() ? 0 : report.rp.front().size();
        RateReport trial = report;
        trial.r_alloc = preferred;
        bool ok = true;
        for (std::size_t k = 0; k < K; ++k)
            ok = ok && trial.user_rate(k) >= r_min;
        if (ok)
            return preferred;

        std::vector<double> deficit(K, 0.0);
        double need = 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            double private_total = 0.0;
            for (std::size_t l = 0; l < L; ++l)
                private_total += report.rp[l][k];
            deficit[k] = std::max(0.0, r_min - private_total);
            need += deficit[k];
        }
        const double capacity = std::accumulate(report.rc_cap.begin(), report.rc_cap.end(), 0.0);
        if (need > capacity)
            return std::nullopt;

        auto r = make_grid<double>(L, K);
        std::vector<double> left = report.rc_cap;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L && deficit[k] > 0.0; ++l)
            {
                const double take = std::min(deficit[k], left[l]);
                r[l][k] += take;
                left[l] -= take;
                deficit[k] -= take;
            }
        for (std::size_t l = 0; l < L; ++l)
        {
            if (left[l] <= 0.0)
                continue;
            const double weight = std::accumulate(preferred[l].begin(), preferred[l].end(), 0.0);
            for (std::size_t k = 0; k < K; ++k)
                r[l][k] += weight > 0.0 ? left[l] * preferred[l][k] / weight : left[l] / static_cast<double>(K);
        }
        return r;
    }

    BeamformingState beamformers_at(const ChannelSet &channels, const LagrangeState &lag, const AuxiliaryState &aux,
                                    double mu, const BeamformingOptions &opts)
    {
        return beamformers_from(all_spectra(channels, lag, aux, opts), channels.num_guides(), mu);
    }

    MuSolution bisect_mu(const ChannelSet &channels, const LagrangeState &lag, const AuxiliaryState &aux,
                         double p_max, const BeamformerConfig &cfg, const BeamformingOptions &opts)
    {
        const auto spectra = all_spectra(channels, lag, aux, opts);
        const auto M = channels.num_guides();
        const double unconstrained = total_power(spectra, cfg.mu_min);
        const auto finish = [&](double mu)
        {
            MuSolution sol;
            sol.mu = mu;
            sol.bf = beamformers_from(spectra, M, mu);
            sol.power = sol.bf.total_power();
            sol.unconstrained_power = unconstrained;
            return sol;
        };

        if (unconstrained <= p_max)
            return finish(cfg.mu_min);

        double lo = cfg.mu_min;
        double hi = std::max(cfg.mu_max, 2.0 * cfg.mu_min);
        std::size_t doublings = 0;
        while (total_power(spectra, hi) > p_max)
        {
            lo = hi;
            hi *= 2.0;
            if (++doublings > cfg.max_bracket_doublings)
                throw std::runtime_error("mu bisection: failed to bracket the power budget");
        }

        const double floor = p_max * (1.0 - cfg.bisection_tol);
        for (std::size_t it = 0; it < cfg.max_bisection_iters; ++it)
        {
            if (total_power(spectra, hi) >= floor)
                break;
            // Geometric steps while the bracket spans decades, arithmetic afterwards.
            const double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
            if (total_power(spectra, mid) > p_max)
                lo = mid;
            else
                hi = mid;
        }
        return finish(hi);
    }

    BeamformingState initial_beamformers(const ChannelSet &channels, double p_max, const BeamformingOptions &opts)
    {
        const auto L = channels.num_carriers();
        const auto K = channels.num_users();
        const auto M = channels.num_guides();
        auto bf = BeamformingState::zeros(L, K, M);
        const double streams = static_cast<double>(L * (K + (opts.common_stream ? 1 : 0)));
        const double amp = std::sqrt(p_max / streams);
        for (std::size_t l = 0; l < L; ++l)
        {
            CVector direction = CVector::Zero(static_cast<Eigen::Index>(M));
            for (std::size_t k = 0; k < K; ++k)
            {
                const auto &h = channels.at(l, k);
                const double n = h.norm();
                if (n > 0.0)
                {
                    bf.priv[l][k] = amp * h / n;
                    direction += h / n;
                }
            }
            if (opts.common_stream && direction.norm() > 0.0)
                bf.common[l] = amp * direction / direction.norm();
        }
        return bf;
    }

    namespace
    {
        bool meets_qos(const RateReport &rep, double r_min)
        {
            return rep.min_user_rate() >= r_min - 1e-9;
        }

        // Ratio-rule allocation for the current caps, repaired for QoS where possible.
        bool finalise_allocation(RateReport &rep, const LagrangeState &lag, double r_min)
        {
            auto ratio = make_grid<double>(rep.rc_cap.size(), lag.eta_qos.size());
            for (std::size_t l = 0; l < rep.rc_cap.size(); ++l)
                ratio[l] = allocate_common_rate(lag.eta_qos, lag.zeta_alloc[l], rep.rc_cap[l]);
            const auto repaired = qos_allocation(rep, ratio, r_min);
            rep.r_alloc = repaired ? *repaired : ratio;
            rep.allocation_feasible = true;
            return meets_qos(rep, r_min);
        }
    }

    BeamformingResult design_beamforming(const ChannelSet &channels, const Scenario &scenario,
                                         const BeamformerConfig &cfg, const BeamformingOptions &opts,
                                         const std::optional<WarmStart> &warm)
    {
        cfg.validate();
        const auto L = channels.num_carriers();
        const auto K = channels.num_users();
        const double noise = scenario.noise_power;

        BeamformingState bf;
        LagrangeState lag;
        double unconstrained = std::numeric_limits<double>::infinity();
        if (warm)
        {
            bf = warm->bf;
            lag = warm->lag;
            unconstrained = warm->unconstrained_power;
            if (!opts.common_stream)
                for (auto &c : bf.common)
                    c.setZero();
        }
        else
        {
            bf = initial_beamformers(channels, scenario.p_max, opts);
            lag = LagrangeState::initial(L, K, opts.common_stream);
        }
        if (bf.total_power() > scenario.p_max)
        {
            const double s = std::sqrt(scenario.p_max / bf.total_power());
            unconstrained = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < L; ++l)
            {
                bf.common[l] *= s;
                for (auto &w : bf.priv[l])
                    w *= s;
            }
        }

        RateReport report = rate_report(channels, bf, std::nullopt, noise);
        for (std::size_t l = 0; l < L; ++l)
            lag.r_alloc[l] = allocate_common_rate(lag.eta_qos, lag.zeta_alloc[l], report.rc_cap[l]);
        report.r_alloc = lag.r_alloc;

        BeamformingResult best;
        const auto consider = [&](std::size_t iteration, const AuxiliaryState &aux)
        {
            RateReport finished = report;
            const bool qos = finalise_allocation(finished, lag, scenario.r_min);
            const bool better = (qos && !best.qos_satisfied) ||
                                (qos == best.qos_satisfied && finished.sum_rate > best.report.sum_rate);
            if (iteration == 0 || better)
            {
                best.bf = bf;
                best.lag = lag;
                best.lag.r_alloc = finished.r_alloc;
                best.aux = aux;
                best.unconstrained_power = unconstrained;
                best.report = std::move(finished);
                best.qos_satisfied = qos;
            }
        };
        consider(0, update_auxiliaries(channels, bf, noise));

        double previous = report.sum_rate;
        std::size_t it = 0;
        bool converged = false;
        while (it < cfg.max_inner_iters)
        {
            ++it;
            const AuxiliaryState aux = update_auxiliaries(channels, bf, noise);
            lag = update_multipliers(lag, report, cfg, scenario.r_min, opts);
            for (std::size_t l = 0; l < L; ++l)
                lag.r_alloc[l] = allocate_common_rate(lag.eta_qos, lag.zeta_alloc[l], report.rc_cap[l]);

            MuSolution sol = bisect_mu(channels, lag, aux, scenario.p_max, cfg, opts);
            bf = std::move(sol.bf);
            lag.mu = sol.mu;
            unconstrained = sol.unconstrained_power;

            report = rate_report(channels, bf, std::nullopt, noise);
            for (std::size_t l = 0; l < L; ++l)
                lag.r_alloc[l] = allocate_common_rate(lag.eta_qos, lag.zeta_alloc[l], report.rc_cap[l]);
            report.r_alloc = lag.r_alloc;

            consider(it, update_auxiliaries(channels, bf, noise));
            if (std::abs(report.sum_rate - previous) < cfg.inner_tol)
            {
                converged = true;
                break;
            }
            previous = report.sum_rate;
        }
        best.iterations = it;
        best.converged = converged;
        return best;
    }
}
