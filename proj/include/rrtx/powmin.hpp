// SPDX-License-Identifier: Apache-2.0
//
// rrtx: channel orthogonalization for panel-based large intelligent surfaces
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

// Minimum-power RRTx processing.
//
// With Hc1 = last M-K columns of H1^{-1} U0 and Hc2 = (beta I - Lambda0)^{1/2} V0^H H2^+,
// the processing power is
//
//   ||Theta(U~)||_F^2 = tr(Gc1 U~ Gc2 U~^H),   Gc1 = Hc1^H Hc1,   Gc2 = Hc2 Hc2^H,
//
// minimized over semi-unitary U~. Stationary points are U~ = Uc1 P1 [diag(phi); 0] P2 Uc2^H;
// the global minimum pairs the K smallest eigenvalues of Gc1 (ascending) with the eigenvalues
// of Gc2 in descending order.

#ifndef RRTX_POWMIN_HPP
#define RRTX_POWMIN_HPP

#include "rrtx/channel.hpp"
#include "rrtx/common.hpp"
#include "rrtx/ortho.hpp"
#include "rrtx/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace rrtx
{
    template <typename Real>
    struct CheckedChannels
    {
        CMatrix<Real> Hcheck1; // M x (M-K)
        CMatrix<Real> Hcheck2; // K x M
        CMatrix<Real> Gcheck1; // (M-K) x (M-K), Hcheck1^H Hcheck1
        CMatrix<Real> Gcheck2; // K x K, Hcheck2 Hcheck2^H
        RVector<Real> eigs1;   // ascending
        RVector<Real> eigs2;   // ascending
        CMatrix<Real> Ucheck1; // eigenvectors of Gcheck1, columns match eigs1
        CMatrix<Real> Ucheck2; // eigenvectors of Gcheck2, columns match eigs2
    };

    // Eigenvalue selection and pairing: eigs1[pi1[i]] is paired with eigs2[pi2[i]].
    template <typename Real>
    struct PairingPlan
    {
        std::vector<Index> pi1;
        std::vector<Index> pi2;
        std::vector<Complex<Real>> phases;

        Index size() const { return static_cast<Index>(pi2.size()); }
    };

    namespace detail
    {
        template <typename Real>
        std::vector<Index> stable_argsort(const RVector<Real> &v)
        {
            std::vector<Index> idx(static_cast<std::size_t>(v.size()));
            std::iota(idx.begin(), idx.end(), Index(0));
            std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) < v(b); });
            return idx;
        }

        // Ascending eigen-decomposition with tiny negative round-off clamped to zero.
        template <typename Real>
        void hermitian_eigen(const CMatrix<Real> &G, RVector<Real> &values, CMatrix<Real> &vectors)
        {
            const CMatrix<Real> sym = (G + G.adjoint()) / Real(2);
            Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(sym);
            values = es.eigenvalues();
            vectors = es.eigenvectors();
            const Real scale = std::max(Real(1), values.cwiseAbs().maxCoeff());
            for (Index i = 0; i < values.size(); ++i)
                if (values(i) < Real(0) && values(i) >= -Real(Tolerance::eigen_clamp) * scale)
                    values(i) = Real(0);
        }

        template <typename Real>
        bool has_close_pair(const RVector<Real> &ascending)
        {
            for (Index i = 0; i + 1 < ascending.size(); ++i)
            {
                const Real hi = std::abs(ascending(i + 1));
                const Real gap = ascending(i + 1) - ascending(i);
                if (gap <= Real(Tolerance::degenerate_gap) * std::max(hi, std::numeric_limits<Real>::min()))
                    return true;
            }
            return false;
        }

        template <typename Real>
        void validate_plan(const PairingPlan<Real> &plan, Index n1, Index n2)
        {
            const auto K = static_cast<std::size_t>(n2);
            require_dims(plan.pi2.size() == K && plan.pi1.size() == K && plan.phases.size() == K,
                         "PairingPlan: sizes must equal K");
            std::vector<bool> seen1(static_cast<std::size_t>(n1), false);
            std::vector<bool> seen2(K, false);
            for (std::size_t i = 0; i < K; ++i)
            {
                const Index a = plan.pi1[i];
                const Index b = plan.pi2[i];
                require_dims(a >= 0 && a < n1 && !seen1[static_cast<std::size_t>(a)], "PairingPlan: pi1 must hold distinct indices");
                require_dims(b >= 0 && b < n2 && !seen2[static_cast<std::size_t>(b)], "PairingPlan: pi2 must be a permutation");
                seen1[static_cast<std::size_t>(a)] = true;
                seen2[static_cast<std::size_t>(b)] = true;
                if (std::abs(std::abs(plan.phases[i]) - Real(1)) > Real(1e-12))
                    throw ConstraintError("PairingPlan: phases must have unit modulus");
            }
        }
    }

    template <typename Real>
    CheckedChannels<Real> checked_channels(const ChannelSet<Real> &cs, const H0Svd<Real> &svd, Real beta)
    {
        validate(cs);
        const Index M = cs.dims.M;
        const Index K = cs.dims.K;
        const Feasibility f = check_feasibility(cs.dims, beta, svd);
        if (!f.feasible())
            throw InfeasibleError("checked_channels: " + f.reason());

        const CMatrix<Real> H1inv = checked_inverse(cs.H1, "checked_channels: H1");
        const CMatrix<Real> H2pinv = left_pseudo_inverse(cs.H2, "checked_channels: H2");

        RVector<Real> gain(K);
        for (Index i = 0; i < K; ++i)
            gain(i) = std::sqrt(std::max(beta - svd.lambda0(i), Real(0)));

        CheckedChannels<Real> cc;
        cc.Hcheck1 = H1inv * svd.U0.rightCols(M - K);
        cc.Hcheck2 = gain.asDiagonal() * svd.V0.adjoint() * H2pinv;
        cc.Gcheck1 = cc.Hcheck1.adjoint() * cc.Hcheck1;
        cc.Gcheck2 = cc.Hcheck2 * cc.Hcheck2.adjoint();
        detail::hermitian_eigen(cc.Gcheck1, cc.eigs1, cc.Ucheck1);
        detail::hermitian_eigen(cc.Gcheck2, cc.eigs2, cc.Ucheck2);
        return cc;
    }

    // Distinct-eigenvalue check for both Gram matrices.
    template <typename Real>
    bool has_degenerate_eigenvalues(const CheckedChannels<Real> &cc)
    {
        return detail::has_close_pair(cc.eigs1) || detail::has_close_pair(cc.eigs2);
    }

    template <typename Real>
    PairingPlan<Real> optimal_pairing(const RVector<Real> &eigs1, const RVector<Real> &eigs2)
    {
        const Index K = eigs2.size();
        require_dims(K >= 1 && eigs1.size() >= K, "optimal_pairing: need len(eigs1) >= len(eigs2) >= 1");

        const std::vector<Index> order1 = detail::stable_argsort(eigs1);
        const std::vector<Index> order2 = detail::stable_argsort(eigs2);

        PairingPlan<Real> plan;
        plan.pi1.assign(order1.begin(), order1.begin() + K);
        plan.pi2.resize(static_cast<std::size_t>(K));
        for (Index i = 0; i < K; ++i)
            plan.pi2[static_cast<std::size_t>(i)] = order2[static_cast<std::size_t>(K - 1 - i)];
        plan.phases.assign(static_cast<std::size_t>(K), Complex<Real>(1));
        return plan;
    }

    template <typename Real>
    Real pairing_power(const RVector<Real> &eigs1, const RVector<Real> &eigs2, const PairingPlan<Real> &plan)
    {
        detail::validate_plan(plan, eigs1.size(), eigs2.size());
        Real sum = Real(0);
        for (std::size_t i = 0; i < plan.pi1.size(); ++i)
            sum += eigs1(plan.pi1[i]) * eigs2(plan.pi2[i]);
        return sum;
    }

    // Column-wise realization of Uc1 P1 [diag(phases); 0] P2 Uc2^H.
    template <typename Real>
    CMatrix<Real> assemble_utilde(const CheckedChannels<Real> &cc, const PairingPlan<Real> &plan)
    {
        detail::validate_plan(plan, cc.eigs1.size(), cc.eigs2.size());
        const Index n = cc.Ucheck1.rows();
        const Index K = cc.Ucheck2.rows();
        CMatrix<Real> U = CMatrix<Real>::Zero(n, K);
        for (std::size_t i = 0; i < plan.pi1.size(); ++i)
            U.noalias() += plan.phases[i] * cc.Ucheck1.col(plan.pi1[i]) * cc.Ucheck2.col(plan.pi2[i]).adjoint();
        return U;
    }

    // tr(Gc1 U~ Gc2 U~^H), equal to ||Theta(U~)||_F^2.
    template <typename Real>
    Real power_objective(const CMatrix<Real> &Gcheck1, const CMatrix<Real> &Gcheck2, const CMatrix<Real> &Utilde)
    {
        return (Gcheck1 * Utilde * Gcheck2 * Utilde.adjoint()).trace().real();
    }

    template <typename Real>
    Real power_objective(const CheckedChannels<Real> &cc, const CMatrix<Real> &Utilde)
    {
        return power_objective(cc.Gcheck1, cc.Gcheck2, Utilde);
    }

    template <typename Real>
    RrtxSolution<Real> minimize_power(const ChannelSet<Real> &cs, Real beta)
    {
        validate(cs);
        const H0Svd<Real> svd = decompose_h0(cs.H0);
        const CheckedChannels<Real> cc = checked_channels(cs, svd, beta);
        const PairingPlan<Real> plan = optimal_pairing(cc.eigs1, cc.eigs2);
        RrtxSolution<Real> sol = orthogonalize(cs, beta, assemble_utilde(cc, plan), svd);
        sol.degenerate_eigenvalues = has_degenerate_eigenvalues(cc);
        return sol;
    }

    // beta at its minimum feasible value.
    template <typename Real>
    RrtxSolution<Real> minimize_power(const ChannelSet<Real> &cs)
    {
        validate(cs);
        return minimize_power(cs, min_beta(decompose_h0(cs.H0)));
    }

    // Exhaustive minimum of sum_i eigs1[s_i] eigs2[p_i] over every K-subset s of eigs1 and
    // every ordering p of eigs2.
    template <typename Real>
    Real brute_force_min(const RVector<Real> &eigs1, const RVector<Real> &eigs2)
    {
        const Index K = eigs2.size();
        const Index n = eigs1.size();
        require_dims(K >= 1 && n >= K, "brute_force_min: need len(eigs1) >= len(eigs2) >= 1");
        if (K > 8)
            throw BudgetError("brute_force_min: K > 8 exceeds the factorial budget");
        double subsets = 1.0;
        for (Index i = 0; i < K; ++i)
            subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (subsets > 1e4)
            throw BudgetError("brute_force_min: more than 1e4 eigenvalue subsets");

        Real best = std::numeric_limits<Real>::infinity();
        std::vector<bool> pick(static_cast<std::size_t>(n), false);
        std::fill(pick.begin(), pick.begin() + K, true);
        std::vector<Index> subset(static_cast<std::size_t>(K));
        std::vector<Index> perm(static_cast<std::size_t>(K));
        do
        {
            for (Index i = 0, j = 0; i < n; ++i)
                if (pick[static_cast<std::size_t>(i)])
                    subset[static_cast<std::size_t>(j++)] = i;
            std::iota(perm.begin(), perm.end(), Index(0));
            do
            {
                Real sum = Real(0);
                for (std::size_t i = 0; i < subset.size(); ++i)
                    sum += eigs1(subset[i]) * eigs2(perm[i]);
                best = std::min(best, sum);
            } while (std::next_permutation(perm.begin(), perm.end()));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        return best;
    }

    template <typename Real>
    Real brute_force_min(const CheckedChannels<Real> &cc)
    {
        return brute_force_min(cc.eigs1, cc.eigs2);
    }

    // dJ/dU~* for J = tr(Gc1 U~ Gc2 U~^H).
    template <typename Real>
    CMatrix<Real> euclidean_gradient(const CMatrix<Real> &Utilde, const CMatrix<Real> &Gcheck1, const CMatrix<Real> &Gcheck2)
    {
        require_dims(Gcheck1.rows() == Utilde.rows() && Gcheck2.rows() == Utilde.cols(),
                     "euclidean_gradient: dimension mismatch");
        return Gcheck1 * Utilde * Gcheck2;
    }

    // Gradient on the unitary group under the bi-invariant metric: Gamma - U Gamma^H U.
    template <typename Real>
    CMatrix<Real> riemannian_gradient(const CMatrix<Real> &U, const CMatrix<Real> &Gamma_full)
    {
        require_dims(U.rows() == U.cols() && Gamma_full.rows() == U.rows() && Gamma_full.cols() == U.cols(),
                     "riemannian_gradient: U and Gamma must be square of equal size");
        return Gamma_full - U * Gamma_full.adjoint() * U;
    }

    // Euclidean gradient of J(U [I_K; 0]) with respect to the full unitary U.
    template <typename Real>
    CMatrix<Real> full_gradient(const CMatrix<Real> &U, const CMatrix<Real> &Gcheck1, const CMatrix<Real> &Gcheck2)
    {
        const Index K = Gcheck2.rows();
        CMatrix<Real> gamma = CMatrix<Real>::Zero(U.rows(), U.cols());
        gamma.leftCols(K) = euclidean_gradient<Real>(U.leftCols(K), Gcheck1, Gcheck2);
        return gamma;
    }

    // Unitary matrix whose leading columns are the given semi-unitary matrix.
    template <typename Real>
    CMatrix<Real> complete_unitary(const CMatrix<Real> &Utilde)
    {
        const Index n = Utilde.rows();
        const Index K = Utilde.cols();
        Eigen::HouseholderQR<CMatrix<Real>> qr(Utilde);
        const CMatrix<Real> Q = qr.householderQ();
        CMatrix<Real> U(n, n);
        U.leftCols(K) = Utilde;
        U.rightCols(n - K) = Q.rightCols(n - K);
        return U;
    }

    // ||Gc1 U~ Gc2 U~^H - U~ Gc2^H U~^H Gc1^H||_F
    template <typename Real>
    Real stationarity_residual(const CheckedChannels<Real> &cc, const CMatrix<Real> &Utilde)
    {
        const CMatrix<Real> lhs = cc.Gcheck1 * Utilde * cc.Gcheck2 * Utilde.adjoint();
        return (lhs - lhs.adjoint()).norm();
    }

    struct DescentOptions
    {
        int max_steps = 500;
        double step_size = 0.1;
    };

    template <typename Real>
    struct DescentResult
    {
        Real objective = Real(0);
        Real initial_objective = Real(0);
        Real gradient_norm = Real(0);
        int iterations = 0;
        CMatrix<Real> U;
    };

    // Geodesic steepest descent on the unitary group, U <- U exp(-mu U^H grad), with an Armijo
    // step rule: mu is doubled while the doubled step still gives sufficient decrease and halved
    // until the step does. Along this geodesic dJ/dmu = -||grad||_F^2 at mu = 0.
    // Works on Gram matrices scaled to unit spectral norm; the reported objective is in the
    // original scale.
    template <typename Real>
    DescentResult<Real> geodesic_descent(const CheckedChannels<Real> &cc, CMatrix<Real> U, const DescentOptions &opt = {})
    {
        const Index n = cc.Gcheck1.rows();
        require_dims(U.rows() == n && U.cols() == n, "geodesic_descent: start must be (M-K) x (M-K) unitary");
        if (opt.max_steps <= 0 || !(opt.step_size > 0))
            throw ParameterError("geodesic_descent: budgets must be positive");

        const Index K = cc.Gcheck2.rows();
        const Real s1 = std::max(cc.eigs1.cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
        const Real s2 = std::max(cc.eigs2.cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
        const CMatrix<Real> G1 = cc.Gcheck1 / s1;
        const CMatrix<Real> G2 = cc.Gcheck2 / s2;
        const Complex<Real> I(Real(0), Real(1));

        auto J = [&](const CMatrix<Real> &V) { return power_objective<Real>(G1, G2, V.leftCols(K)); };

        DescentResult<Real> res;
        Real current = J(U);
        res.initial_objective = current * s1 * s2;
        Real mu = static_cast<Real>(opt.step_size);
        int it = 0;
        for (; it < opt.max_steps; ++it)
        {
            const CMatrix<Real> grad = riemannian_gradient<Real>(U, full_gradient<Real>(U, G1, G2));
            const Real g2 = grad.squaredNorm();
            res.gradient_norm = std::sqrt(g2) * s1 * s2;
            if (std::sqrt(g2) <= Real(1e-14))
                break;
            // U^H grad is skew-Hermitian, so i U^H grad is Hermitian and
            // exp(-mu U^H grad) = W exp(i mu D) W^H.
            CMatrix<Real> herm = I * (U.adjoint() * grad);
            herm = (herm + herm.adjoint()).eval() / Real(2);
            Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm);
            const auto &W = es.eigenvectors();
            auto step = [&](Real m) {
                CVector<Real> rot(n);
                for (Index i = 0; i < n; ++i)
                    rot(i) = std::exp(I * m * es.eigenvalues()(i));
                return CMatrix<Real>(U * (W * rot.asDiagonal() * W.adjoint()));
            };
            auto sufficient = [&](Real m, Real value) { return current - value >= Real(0.5) * m * g2; };

            CMatrix<Real> candidate = step(mu);
            Real value = J(candidate);
            for (int k = 0; k < 60 && sufficient(mu, value); ++k)
            {
                CMatrix<Real> longer = step(2 * mu);
                const Real v2 = J(longer);
                if (!sufficient(2 * mu, v2))
                    break;
                mu *= 2;
                candidate = std::move(longer);
                value = v2;
            }
            while (!sufficient(mu, value) && mu > Real(1e-18))
            {
                mu /= 2;
                candidate = step(mu);
                value = J(candidate);
            }
            if (!(value < current))
                break;
            U = std::move(candidate);
            current = value;
        }
        res.iterations = it;
        res.objective = current * s1 * s2;
        res.U = std::move(U);
        return res;
    }

    // Independent one-sided optimality probe from a Haar-random unitary start.
    template <typename Real>
    DescentResult<Real> descent_verifier(const CheckedChannels<Real> &cc, std::uint64_t seed, const DescentOptions &opt = {})
    {
        const Index n = cc.Gcheck1.rows();
        return geodesic_descent(cc, random_semi_unitary<Real>(n, n, seed), opt);
    }
}

#endif
