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

#ifndef RRTX_CHANNEL_HPP
#define RRTX_CHANNEL_HPP

#include "rrtx/common.hpp"
#include "rrtx/random.hpp"

#include <optional>

namespace rrtx
{
    // One realization of the three-panel uplink.
    //   H0  : UEs    -> active panel   (M x K), entry variance eta
    //   H1  : LP-Tx  -> active panel   (M x M), unit entry variance
    //   H2  : UEs    -> LP-Rx panel    (M x K), unit entry variance
    //   H12 : LP-Tx  -> LP-Rx panel    (M x M), absent unless added with with_h12()
    template <typename Real>
    struct ChannelSet
    {
        Dimensions dims;
        CMatrix<Real> H0;
        CMatrix<Real> H1;
        CMatrix<Real> H2;
        std::optional<CMatrix<Real>> H12;
        Real eta = Real(1);
        Real N0 = Real(1);
        Real Ntilde0 = Real(1);
    };

    using ChannelSetd = ChannelSet<double>;

    template <typename Real>
    void validate(const ChannelSet<Real> &cs)
    {
        const auto &d = cs.dims;
        require_dims(d.valid(), "ChannelSet: invalid dimensions");
        require_dims(cs.H0.rows() == d.M && cs.H0.cols() == d.K, "ChannelSet: H0 must be M x K");
        require_dims(cs.H1.rows() == d.M && cs.H1.cols() == d.M, "ChannelSet: H1 must be M x M");
        require_dims(cs.H2.rows() == d.M && cs.H2.cols() == d.K, "ChannelSet: H2 must be M x K");
        if (cs.H12)
            require_dims(cs.H12->rows() == d.M && cs.H12->cols() == d.M, "ChannelSet: H12 must be M x M");
    }

    // IID Rayleigh realization. H1, H2 have unit entry variance; H0 is sqrt(eta) times a
    // unit-variance draw, so the same seed with a different eta gives an exactly scaled H0.
    template <typename Real = double>
    ChannelSet<Real> sample_channel_set(const Dimensions &dims, Real eta, Real N0, Real Ntilde0, std::uint64_t seed)
    {
        require_dims(dims.valid(), "sample_channel_set: M, K, T must all be >= 1");
        if (!(eta > Real(0)))
            throw ParameterError("sample_channel_set: eta must be positive");
        if (!(N0 >= Real(0)) || !(Ntilde0 >= Real(0)))
            throw ParameterError("sample_channel_set: noise powers must be nonnegative");

        ChannelSet<Real> cs;
        cs.dims = dims;
        cs.eta = eta;
        cs.N0 = N0;
        cs.Ntilde0 = Ntilde0;
        cs.H0 = std::sqrt(eta) * complex_gaussian<Real>(dims.M, dims.K, derive_seed(seed, stream::h0));
        cs.H1 = complex_gaussian<Real>(dims.M, dims.M, derive_seed(seed, stream::h1));
        cs.H2 = complex_gaussian<Real>(dims.M, dims.K, derive_seed(seed, stream::h2));
        return cs;
    }

    // Copy of cs with an LP-Tx -> LP-Rx channel of entry variance `gain`.
    template <typename Real>
    ChannelSet<Real> with_h12(const ChannelSet<Real> &cs, Real gain, std::uint64_t seed)
    {
        validate(cs);
        if (!(gain >= Real(0)))
            throw ParameterError("with_h12: gain must be nonnegative");
        ChannelSet<Real> out = cs;
        out.H12 = std::sqrt(gain) * complex_gaussian<Real>(cs.dims.M, cs.dims.M, derive_seed(seed, stream::h12));
        return out;
    }
}

#endif
