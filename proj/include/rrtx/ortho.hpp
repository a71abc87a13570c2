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

// Receive-and-retransmit processing that makes the one-slot ISI channel
// orthogonal in space and time:
//
//   H~ = U0 [0; B],   B = U~ (beta I - Lambda0)^{1/2} V0^H,   Theta = H1^{-1} H~ H2^+
//
// with H0 = U0 [Lambda0^{1/2}; 0] V0^H and U~ any (M-K) x K semi-unitary matrix.

#ifndef RRTX_ORTHO_HPP
#define RRTX_ORTHO_HPP

#include "rrtx/channel.hpp"
#include "rrtx/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rrtx
{
    // Full SVD of the direct channel, H0 = U0 [diag(sqrt(lambda0)); 0] V0^H.
    template <typename Real>
    struct H0Svd
    {
        CMatrix<Real> U0;     // M x M unitary
        RVector<Real> lambda0; // K eigenvalues of H0^H H0, descending
        CMatrix<Real> V0;     // K x K unitary

        Index M() const { return U0.rows(); }
        Index K() const { return V0.rows(); }

        CMatrix<Real> reconstruct() const
        {
            CMatrix<Real> sigma = CMatrix<Real>::Zero(M(), K());
            for (Index i = 0; i < K(); ++i)
                sigma(i, i) = std::sqrt(lambda0(i));
            return U0 * sigma * V0.adjoint();
        }
    };

    template <typename Real>
    struct RrtxSolution
    {
        CMatrix<Real> Utilde; // (M-K) x K semi-unitary degrees of freedom
        CMatrix<Real> B;      // (M-K) x K
        CMatrix<Real> Htilde; // M x K aggregate RRTx channel H1 Theta H2
        CMatrix<Real> Theta;  // M x M RRTx processing
        Real beta = Real(0);
        Real power = Real(0); // ||Theta||_F^2
        // Set by minimize_power when the checked Gram matrices have (near-)repeated eigenvalues.
        bool degenerate_eigenvalues = false;
    };

    struct Feasibility
    {
        bool rank_ok = false; // M >= 2K
        bool gain_ok = false; // beta >= lambda0_max
        bool feasible() const { return rank_ok && gain_ok; }
        std::string reason() const
        {
            if (!rank_ok)
                return "rank condition violated: M < 2K";
            if (!gain_ok)
                return "gain condition violated: beta < largest eigenvalue of H0^H H0";
            return "feasible";
        }
    };

    template <typename Real>
    struct GramBlocks
    {
        CMatrix<Real> G; // H0^H H0 + H~^H H~
        CMatrix<Real> Z; // H0^H H~
    };

    template <typename Real>
    H0Svd<Real> decompose_h0(const CMatrix<Real> &H0)
    {
        const Index M = H0.rows();
        const Index K = H0.cols();
        require_dims(K >= 1 && M >= K, "decompose_h0: H0 must be M x K with M >= K >= 1");

        Eigen::JacobiSVD<CMatrix<Real>> svd(H0, Eigen::ComputeFullU | Eigen::ComputeFullV);
        H0Svd<Real> out;
        out.U0 = svd.matrixU();
        out.V0 = svd.matrixV();
        out.lambda0 = svd.singularValues().array().square().matrix();

        // Phase convention: first non-negligible entry of every right singular vector is real-positive.
        // The matching left singular vector absorbs the same phase, so the product is unchanged.
        for (Index j = 0; j < K; ++j)
        {
            for (Index i = 0; i < K; ++i)
            {
                const auto v = out.V0(i, j);
                const Real mag = std::abs(v);
                if (mag > Real(1e-12))
                {
                    const auto unphase = std::conj(v) / mag;
                    out.V0.col(j) *= unphase;
                    out.U0.col(j) *= unphase;
                    break;
                }
            }
        }
        return out;
    }

    template <typename Real>
    Real min_beta(const H0Svd<Real> &svd)
    {
        return svd.lambda0.size() > 0 ? svd.lambda0.maxCoeff() : Real(0);
    }

    template <typename Real>
    Feasibility check_feasibility(const Dimensions &dims, Real beta, const H0Svd<Real> &svd)
    {
        Feasibility f;
        f.rank_ok = dims.M >= 2 * dims.K;
        const Real lmax = min_beta(svd);
        f.gain_ok = beta >= lmax - Real(Tolerance::beta_slack) * lmax;
        return f;
    }

    template <typename Real>
    Real semi_unitarity_residual(const CMatrix<Real> &U)
    {
        return (U.adjoint() * U - CMatrix<Real>::Identity(U.cols(), U.cols())).norm();
    }

    template <typename Real>
    CMatrix<Real> build_b(const H0Svd<Real> &svd, Real beta, const CMatrix<Real> &Utilde)
    {
        const Index M = svd.M();
        const Index K = svd.K();
        require_dims(Utilde.rows() == M - K && Utilde.cols() == K, "build_b: Utilde must be (M-K) x K");
        const Real lmax = min_beta(svd);
        if (beta < lmax - Real(Tolerance::beta_slack) * lmax)
            throw InfeasibleError("build_b: beta below the minimum channel gain " + std::to_string(lmax));
        if (semi_unitarity_residual(Utilde) > Real(Tolerance::semi_unitary_input))
            throw ConstraintError("build_b: Utilde is not semi-unitary");

        RVector<Real> gain(K);
        for (Index i = 0; i < K; ++i)
            gain(i) = std::sqrt(std::max(beta - svd.lambda0(i), Real(0)));
        return Utilde * gain.asDiagonal() * svd.V0.adjoint();
    }

    template <typename Real>
    CMatrix<Real> build_htilde(const H0Svd<Real> &svd, const CMatrix<Real> &B)
    {
        const Index M = svd.M();
        const Index K = svd.K();
        require_dims(B.rows() == M - K && B.cols() == K, "build_htilde: B must be (M-K) x K");
        return svd.U0.rightCols(M - K) * B;
    }

    // sigma_max / sigma_min; +inf for rank-deficient input.
    template <typename Real>
    Real condition_number(const CMatrix<Real> &A)
    {
        Eigen::JacobiSVD<CMatrix<Real>> svd(A);
        const auto &s = svd.singularValues();
        if (s.size() == 0)
            return std::numeric_limits<Real>::infinity();
        const Real smin = s(s.size() - 1);
        return smin > Real(0) ? s(0) / smin : std::numeric_limits<Real>::infinity();
    }

    // Moore-Penrose inverse of a tall full-column-rank matrix; throws ConditioningError otherwise.
    template <typename Real>
    CMatrix<Real> left_pseudo_inverse(const CMatrix<Real> &A, const char *who = "pseudo-inverse")
    {
        require_dims(A.rows() >= A.cols(), std::string(who) + ": matrix must be tall");
        Eigen::JacobiSVD<CMatrix<Real>> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto &s = svd.singularValues();
        const Real smin = s(s.size() - 1);
        const Real cond = smin > Real(0) ? s(0) / smin : std::numeric_limits<Real>::infinity();
        if (!(cond < Real(Tolerance::max_condition)))
            throw ConditioningError(std::string(who) + ": matrix is rank deficient", static_cast<double>(cond));
        return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    }

    template <typename Real>
    CMatrix<Real> checked_inverse(const CMatrix<Real> &A, const char *who = "inverse")
    {
        require_dims(A.rows() == A.cols(), std::string(who) + ": matrix must be square");
        const Real cond = condition_number(A);
        if (!(cond < Real(Tolerance::max_condition)))
            throw ConditioningError(std::string(who) + ": matrix is singular or ill-conditioned", static_cast<double>(cond));
        return A.fullPivLu().inverse();
    }

    template <typename Real>
    CMatrix<Real> solve_theta(const CMatrix<Real> &Htilde, const CMatrix<Real> &H1, const CMatrix<Real> &H2)
    {
        require_dims(H1.rows() == H1.cols(), "solve_theta: H1 must be square");
        require_dims(Htilde.rows() == H1.rows() && Htilde.cols() == H2.cols() && H2.rows() == H1.rows(),
                     "solve_theta: dimension mismatch");
        const CMatrix<Real> H1inv = checked_inverse(H1, "solve_theta: H1");
        const CMatrix<Real> H2pinv = left_pseudo_inverse(H2, "solve_theta: H2");
        return H1inv * Htilde * H2pinv;
    }

    template <typename Real>
    GramBlocks<Real> gram_blocks(const CMatrix<Real> &H0, const CMatrix<Real> &Htilde)
    {
        require_dims(H0.rows() == Htilde.rows() && H0.cols() == Htilde.cols(), "gram_blocks: dimension mismatch");
        return {H0.adjoint() * H0 + Htilde.adjoint() * Htilde, H0.adjoint() * Htilde};
    }

    template <typename Real>
    RrtxSolution<Real> orthogonalize(const ChannelSet<Real> &cs, Real beta, const CMatrix<Real> &Utilde,
                                     const H0Svd<Real> &svd)
    {
        validate(cs);
        const Feasibility f = check_feasibility(cs.dims, beta, svd);
        if (!f.feasible())
            throw InfeasibleError("orthogonalize: " + f.reason());

        RrtxSolution<Real> sol;
        sol.Utilde = Utilde;
        sol.beta = beta;
        sol.B = build_b(svd, beta, Utilde);
        sol.Htilde = build_htilde(svd, sol.B);
        sol.Theta = solve_theta(sol.Htilde, cs.H1, cs.H2);
        sol.power = sol.Theta.squaredNorm();
        return sol;
    }

    template <typename Real>
    RrtxSolution<Real> orthogonalize(const ChannelSet<Real> &cs, Real beta, const CMatrix<Real> &Utilde)
    {
        validate(cs);
        return orthogonalize(cs, beta, Utilde, decompose_h0(cs.H0));
    }
}

#endif
