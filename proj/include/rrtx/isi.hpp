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

#ifndef RRTX_ISI_HPP
#define RRTX_ISI_HPP

#include "rrtx/channel.hpp"
#include "rrtx/common.hpp"
#include "rrtx/ortho.hpp"
#include "rrtx/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rrtx
{
    // Stacked space-time channel over T symbol slots and T+1 receive slots:
    // block (t, t) = H0, block (t+1, t) = H~, zero elsewhere.
    template <typename Real>
    struct IsiChannel
    {
        CMatrix<Real> matrix; // (T+1)M x TK
        Real beta = Real(0);
        Dimensions dims;
    };

    template <typename Real>
    struct CapacityReport
    {
        std::vector<Real> per_ue; // bits/s/Hz
        Real best = Real(0);
        Real worst = Real(0);
        bool assumption1 = false; // white-noise approximation used
    };

    template <typename Real>
    CapacityReport<Real> make_capacity_report(std::vector<Real> per_ue, bool assumption1)
    {
        CapacityReport<Real> r;
        r.per_ue = std::move(per_ue);
        r.assumption1 = assumption1;
        if (!r.per_ue.empty())
        {
            const auto [lo, hi] = std::minmax_element(r.per_ue.begin(), r.per_ue.end());
            r.worst = *lo;
            r.best = *hi;
        }
        return r;
    }

    template <typename Real>
    IsiChannel<Real> build_isi_matrix(const CMatrix<Real> &H0, const CMatrix<Real> &Htilde, Index T, Real beta)
    {
        require_dims(T >= 1, "build_isi_matrix: T must be >= 1");
        require_dims(H0.rows() == Htilde.rows() && H0.cols() == Htilde.cols(), "build_isi_matrix: H0 and H~ must both be M x K");
        const Index M = H0.rows();
        const Index K = H0.cols();

        IsiChannel<Real> ch;
        ch.beta = beta;
        ch.dims = {M, K, T};
        ch.matrix = CMatrix<Real>::Zero((T + 1) * M, T * K);
        for (Index t = 0; t < T; ++t)
        {
            ch.matrix.block(t * M, t * K, M, K) = H0;
            ch.matrix.block((t + 1) * M, t * K, M, K) = Htilde;
        }
        return ch;
    }

    // ||H^H H - beta I||_F / (beta sqrt(TK))
    template <typename Real>
    Real orthogonality_residual(const IsiChannel<Real> &ch)
    {
        const Index n = ch.matrix.cols();
        const CMatrix<Real> gram = ch.matrix.adjoint() * ch.matrix;
        const Real err = (gram - ch.beta * CMatrix<Real>::Identity(n, n)).norm();
        return err / (ch.beta * std::sqrt(static_cast<Real>(n)));
    }

    // Slot-by-slot uplink recursion:
    //   y[t] = H0 s[t] + H1 Theta r[t-1] + n[t]
    //   r[t] = H2 s[t] + H12 r[t-1] + n~[t]
    // for t = 1..T+1 with r[0] = 0 and s[T+1] = 0. Returns y[1..T+1] stacked.
    template <typename Real>
    CVector<Real> simulate_uplink(const ChannelSet<Real> &cs, const CMatrix<Real> &Theta, const CVector<Real> &symbols,
                                  std::uint64_t seed, bool include_rrtx_noise)
    {
        validate(cs);
        const Index M = cs.dims.M;
        const Index K = cs.dims.K;
        const Index T = cs.dims.T;
        require_dims(Theta.rows() == M && Theta.cols() == M, "simulate_uplink: Theta must be M x M");
        require_dims(symbols.size() == T * K, "simulate_uplink: need T*K symbols");

        GaussianSource active_noise(derive_seed(seed, stream::active_noise));
        GaussianSource rrtx_noise(derive_seed(seed, stream::rrtx_noise));
        const CMatrix<Real> retransmit = cs.H1 * Theta;

        CVector<Real> received((T + 1) * M);
        CVector<Real> r_prev = CVector<Real>::Zero(M);
        CVector<Real> s(K);
        for (Index t = 0; t <= T; ++t)
        {
            if (t < T)
                s = symbols.segment(t * K, K);
            else
                s.setZero();

            CVector<Real> y = cs.H0 * s + retransmit * r_prev;
            if (cs.N0 > Real(0))
                for (Index i = 0; i < M; ++i)
                    y(i) += active_noise.complex_normal<Real>(cs.N0);
            received.segment(t * M, M) = y;

            CVector<Real> r = cs.H2 * s;
            if (cs.H12)
                r += *cs.H12 * r_prev;
            if (include_rrtx_noise && cs.Ntilde0 > Real(0))
                for (Index i = 0; i < M; ++i)
                    r(i) += rrtx_noise.complex_normal<Real>(cs.Ntilde0);
            r_prev = std::move(r);
        }
        return received;
    }

    template <typename Real>
    CVector<Real> mrc_combine(const IsiChannel<Real> &ch, const CVector<Real> &received)
    {
        if (!(ch.beta > Real(0)))
            throw ParameterError("mrc_combine: beta must be positive");
        require_dims(received.size() == ch.matrix.rows(), "mrc_combine: received length must be (T+1)M");
        return ch.matrix.adjoint() * received / ch.beta;
    }

    // Every stream is an AWGN channel with SNR beta / N0.
    template <typename Real>
    CapacityReport<Real> capacity_white(Real beta, Real N0, Index K = 1)
    {
        if (!(beta > Real(0)) || !(N0 > Real(0)))
            throw ParameterError("capacity_white: beta and N0 must be positive");
        require_dims(K >= 1, "capacity_white: K must be >= 1");
        const Real c = std::log2(Real(1) + beta / N0);
        return make_capacity_report(std::vector<Real>(static_cast<std::size_t>(K), c), true);
    }

    // Noise covariance of the stacked receive vector when the LP-Rx noise is forwarded
    // through H1 Theta: N0 I on every slot plus Ntilde0 (H1 Theta)(H1 Theta)^H on slots 2..T+1.
    template <typename Real>
    CMatrix<Real> stacked_noise_covariance(const ChannelSet<Real> &cs, const CMatrix<Real> &Theta, Index T)
    {
        validate(cs);
        const Index M = cs.dims.M;
        const CMatrix<Real> A = cs.H1 * Theta;
        const CMatrix<Real> forwarded = cs.Ntilde0 * (A * A.adjoint());
        CMatrix<Real> C = cs.N0 * CMatrix<Real>::Identity((T + 1) * M, (T + 1) * M);
        for (Index t = 1; t <= T; ++t)
            C.block(t * M, t * M, M, M) += forwarded;
        return C;
    }

    // Post-MRC capacity with the forwarded RRTx noise kept: SINR_j = beta^2 / [H^H C H]_jj.
    // The quadratic form is evaluated block by block; C is block diagonal.
    template <typename Real>
    CapacityReport<Real> capacity_exact(const ChannelSet<Real> &cs, const RrtxSolution<Real> &sol, Index T)
    {
        validate(cs);
        require_dims(T >= 1, "capacity_exact: T must be >= 1");
        if (!(sol.beta > Real(0)) || !(cs.N0 > Real(0)))
            throw ParameterError("capacity_exact: beta and N0 must be positive");
        const Index K = cs.dims.K;

        const CMatrix<Real> A = cs.H1 * sol.Theta;
        const CMatrix<Real> realized = A * cs.H2;
        const CMatrix<Real> fwd_direct = A.adjoint() * cs.H0;
        const CMatrix<Real> fwd_rrtx = A.adjoint() * realized;
        const Real beta2 = sol.beta * sol.beta;

        std::vector<Real> per_ue(static_cast<std::size_t>(K), Real(0));
        for (Index k = 0; k < K; ++k)
        {
            const Real white = cs.N0 * (cs.H0.col(k).squaredNorm() + realized.col(k).squaredNorm());
            const Real colored_direct = cs.Ntilde0 * fwd_direct.col(k).squaredNorm();
            const Real colored_rrtx = cs.Ntilde0 * fwd_rrtx.col(k).squaredNorm();
            Real sum = Real(0);
            for (Index t = 0; t < T; ++t)
            {
                // slot t+1 (1-based) carries forwarded noise only from the second slot on
                const Real q = white + colored_rrtx + (t >= 1 ? colored_direct : Real(0));
                sum += std::log2(Real(1) + beta2 / q);
            }
            per_ue[static_cast<std::size_t>(k)] = sum / static_cast<Real>(T);
        }
        return make_capacity_report(std::move(per_ue), false);
    }
}

#endif
