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

// Fully-active three-panel reference receivers (joint ZF and joint MRC).

#ifndef RRTX_BASELINE_HPP
#define RRTX_BASELINE_HPP

#include "rrtx/channel.hpp"
#include "rrtx/common.hpp"
#include "rrtx/isi.hpp"
#include "rrtx/random.hpp"

#include <cmath>
#include <vector>

namespace rrtx
{
    template <typename Real>
    struct StackedActiveChannel
    {
        CMatrix<Real> H_all; // 3M x K, rows [H0; H2; H3]
        Real N0 = Real(1);
    };

    // H0 and H2 are taken from cs; H3 is a fresh unit-variance draw. fairness_scale multiplies
    // the power gain of the H2 and H3 blocks.
    template <typename Real>
    StackedActiveChannel<Real> stack_active(const ChannelSet<Real> &cs, std::uint64_t seed, Real fairness_scale = Real(1))
    {
        validate(cs);
        if (!(fairness_scale >= Real(0)))
            throw ParameterError("stack_active: fairness_scale must be nonnegative");
        const Index M = cs.dims.M;
        const Index K = cs.dims.K;
        const CMatrix<Real> H3 = complex_gaussian<Real>(M, K, derive_seed(seed, stream::h3));

        StackedActiveChannel<Real> sc;
        sc.N0 = cs.N0;
        sc.H_all.resize(3 * M, K);
        sc.H_all.topRows(M) = cs.H0;
        if (fairness_scale == Real(1))
        {
            sc.H_all.middleRows(M, M) = cs.H2;
            sc.H_all.bottomRows(M) = H3;
        }
        else
        {
            const Real amp = std::sqrt(fairness_scale);
            sc.H_all.middleRows(M, M) = amp * cs.H2;
            sc.H_all.bottomRows(M) = amp * H3;
        }
        return sc;
    }

    // SINR_k = 1 / (N0 [(H^H H)^{-1}]_kk)
    template <typename Real>
    CapacityReport<Real> zf_capacity(const StackedActiveChannel<Real> &sc)
    {
        if (!(sc.N0 > Real(0)))
            throw ParameterError("zf_capacity: N0 must be positive");
        const Index K = sc.H_all.cols();
        const CMatrix<Real> gram = sc.H_all.adjoint() * sc.H_all;
        const Real cond = condition_number(gram);
        if (!(cond < Real(Tolerance::max_condition)))
            throw ConditioningError("zf_capacity: stacked channel is rank deficient", static_cast<double>(cond));
        const CMatrix<Real> inv = gram.ldlt().solve(CMatrix<Real>::Identity(K, K));

        std::vector<Real> per_ue(static_cast<std::size_t>(K));
        for (Index k = 0; k < K; ++k)
            per_ue[static_cast<std::size_t>(k)] = std::log2(Real(1) + Real(1) / (sc.N0 * inv(k, k).real()));
        return make_capacity_report(std::move(per_ue), false);
    }

    // SINR_k = |h_k|^4 / (N0 |h_k|^2 + sum_{j != k} |h_k^H h_j|^2)
    template <typename Real>
    CapacityReport<Real> mrc_capacity(const StackedActiveChannel<Real> &sc)
    {
        if (!(sc.N0 > Real(0)))
            throw ParameterError("mrc_capacity: N0 must be positive");
        const Index K = sc.H_all.cols();
        const CMatrix<Real> gram = sc.H_all.adjoint() * sc.H_all;

        std::vector<Real> per_ue(static_cast<std::size_t>(K));
        for (Index k = 0; k < K; ++k)
        {
            const Real energy = gram(k, k).real();
            if (!(energy > Real(0)))
                throw ParameterError("mrc_capacity: channel column " + std::to_string(k) + " is zero");
            Real interference = Real(0);
            for (Index j = 0; j < K; ++j)
                if (j != k)
                    interference += std::norm(gram(k, j));
            const Real sinr = energy * energy / (sc.N0 * energy + interference);
            per_ue[static_cast<std::size_t>(k)] = std::log2(Real(1) + sinr);
        }
        return make_capacity_report(std::move(per_ue), false);
    }
}

#endif
