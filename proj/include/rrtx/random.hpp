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

#ifndef RRTX_RANDOM_HPP
#define RRTX_RANDOM_HPP

#include "rrtx/common.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rrtx
{
    // SplitMix64 finalizer.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Sub-seed for an independent stream of a parent seed.
    constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
    {
        return mix64(seed ^ mix64(stream * 0xD1B54A32D192ED03ull + 0x632BE59BD9B4E019ull));
    }

    // Fixed stream identifiers. Each random matrix or noise sequence owns one.
    namespace stream
    {
        inline constexpr std::uint64_t h0 = 1;
        inline constexpr std::uint64_t h1 = 2;
        inline constexpr std::uint64_t h2 = 3;
        inline constexpr std::uint64_t h12 = 4;
        inline constexpr std::uint64_t h3 = 5;
        inline constexpr std::uint64_t active_noise = 6;
        inline constexpr std::uint64_t rrtx_noise = 7;
    }

    // Portable standard-normal source: mt19937_64 bits, 53-bit uniforms, Box-Muller.
    // std::normal_distribution is implementation-defined, so it is not used here.
    class GaussianSource
    {
    public:
        explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

        double uniform()
        {
            // (0, 1]
            return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        }

        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double phi = 2.0 * std::numbers::pi * uniform();
            spare_ = r * std::sin(phi);
            has_spare_ = true;
            return r * std::cos(phi);
        }

        // CN(0, variance)
        template <typename Real = double>
        Complex<Real> complex_normal(Real variance = Real(1))
        {
            const double s = std::sqrt(static_cast<double>(variance) / 2.0);
            const double re = normal();
            const double im = normal();
            return {static_cast<Real>(s * re), static_cast<Real>(s * im)};
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };

    // rows x cols matrix of IID CN(0, variance) entries, filled column-major.
    template <typename Real>
    CMatrix<Real> complex_gaussian(Index rows, Index cols, GaussianSource &src, Real variance = Real(1))
    {
        CMatrix<Real> out(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i)
                out(i, j) = src.complex_normal<Real>(variance);
        return out;
    }

    template <typename Real>
    CMatrix<Real> complex_gaussian(Index rows, Index cols, std::uint64_t seed, Real variance = Real(1))
    {
        GaussianSource src(seed);
        return complex_gaussian<Real>(rows, cols, src, variance);
    }

    // Haar-distributed semi-unitary matrix: QR of a Gaussian matrix with the
    // R-factor diagonal phases pushed back into Q.
    template <typename Real>
    CMatrix<Real> random_semi_unitary(Index rows, Index cols, GaussianSource &src)
    {
        require_dims(rows >= cols && cols >= 1, "random_semi_unitary: need rows >= cols >= 1");
        const CMatrix<Real> g = complex_gaussian<Real>(rows, cols, src);
        Eigen::HouseholderQR<CMatrix<Real>> qr(g);
        CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(rows, cols);
        const CMatrix<Real> &r = qr.matrixQR();
        for (Index j = 0; j < cols; ++j)
        {
            const auto d = r(j, j);
            const Real mag = std::abs(d);
            if (mag > Real(0))
                q.col(j) *= d / mag;
        }
        return q;
    }

    template <typename Real>
    CMatrix<Real> random_semi_unitary(Index rows, Index cols, std::uint64_t seed)
    {
        GaussianSource src(seed);
        return random_semi_unitary<Real>(rows, cols, src);
    }
}

#endif
