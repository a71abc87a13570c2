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

#include <catch_amalgamated.hpp>

#include "rrtx/isi.hpp"
#include "rrtx/powmin.hpp"

using namespace rrtx;
using CMat = CMatrix<double>;
using CVec = CVector<double>;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    struct Instance
    {
        ChannelSetd cs;
        RrtxSolution<double> sol;
    };

    Instance solved(Index M, Index K, Index T, std::uint64_t seed, double eta = 1.0, double N0 = 0.01, double Nt = 0.01)
    {
        Instance in{sample_channel_set<double>({M, K, T}, eta, N0, Nt, seed), {}};
        in.sol = minimize_power(in.cs);
        return in;
    }
}

TEST_CASE("build_isi_matrix - shape and block structure")
{
    const CMat H0 = complex_gaussian<double>(4, 2, 1);
    const CMat Ht = complex_gaussian<double>(4, 2, 2);

    const auto one = build_isi_matrix(H0, Ht, 1, 1.0);
    CHECK(one.matrix.rows() == 8);
    CHECK(one.matrix.cols() == 2);
    CHECK(one.matrix.topRows(4) == H0);
    CHECK(one.matrix.bottomRows(4) == Ht);

    const auto three = build_isi_matrix(H0, Ht, 3, 1.0);
    CHECK(three.matrix.rows() == 16);
    CHECK(three.matrix.cols() == 6);
    for (Index r = 0; r < 4; ++r)
        for (Index c = 0; c < 3; ++c)
        {
            const CMat blk = three.matrix.block(r * 4, c * 2, 4, 2);
            if (r == c)
                CHECK(blk == H0);
            else if (r == c + 1)
                CHECK(blk == Ht);
            else
                CHECK(blk.isZero(0.0));
        }

    CHECK_THROWS_AS(build_isi_matrix(H0, Ht, 0, 1.0), DimensionError);
    CHECK_THROWS_AS(build_isi_matrix<double>(H0, CMat::Zero(4, 3), 2, 1.0), DimensionError);
}

TEST_CASE("stacked Gram is block tri-diagonal with the per-slot blocks")
{
    const CMat H0 = complex_gaussian<double>(5, 2, 3);
    const CMat Ht = complex_gaussian<double>(5, 2, 4);
    const auto ch = build_isi_matrix(H0, Ht, 4, 1.0);
    const CMat gram = ch.matrix.adjoint() * ch.matrix;
    const auto g = gram_blocks(H0, Ht);
    for (Index r = 0; r < 4; ++r)
        for (Index c = 0; c < 4; ++c)
        {
            const CMat blk = gram.block(r * 2, c * 2, 2, 2);
            if (r == c)
                CHECK((blk - g.G).norm() < 1e-12);
            else if (r == c + 1)
                CHECK((blk - g.Z).norm() < 1e-12);
            else if (c == r + 1)
                CHECK((blk - g.Z.adjoint()).norm() < 1e-12);
            else
                CHECK(blk.isZero(0.0));
        }
}

TEST_CASE("optimized channel gives a scaled-identity stacked Gram")
{
    for (Index T : {1, 4, 16})
    {
        const auto in = solved(8, 2, T, 10 + static_cast<std::uint64_t>(T));
        CHECK(orthogonality_residual(build_isi_matrix(in.cs.H0, in.sol.Htilde, T, in.sol.beta)) < 1e-9);
    }
    // an arbitrary channel does not
    const CMat H0 = complex_gaussian<double>(8, 2, 1);
    CHECK(orthogonality_residual(build_isi_matrix(H0, complex_gaussian<double>(8, 2, 2), 4, 1.0)) > 0.1);
}

TEST_CASE("simulate_uplink - recursion equals the stacked product")
{
    for (Index T : {1, 2, 8, 16})
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const auto in = solved(8, 2, T, seed + 100 * static_cast<std::uint64_t>(T), 1.0, 0.0, 0.0);
            const CVec s = complex_gaussian<double>(T * 2, 1, seed + 7);
            const CVec y = simulate_uplink(in.cs, in.sol.Theta, s, seed, true);
            const auto ch = build_isi_matrix(in.cs.H0, (in.cs.H1 * in.sol.Theta * in.cs.H2).eval(), T, in.sol.beta);
            const CVec ref = ch.matrix * s;
            CHECK((y - ref).norm() <= 1e-10 * ref.norm());
        }
    }
}

TEST_CASE("simulate_uplink - edge cases")
{
    const auto in = solved(8, 2, 3, 5, 1.0, 0.0, 0.0);
    CHECK(simulate_uplink(in.cs, in.sol.Theta, CVec::Zero(6).eval(), 1, true).isZero(0.0));
    CHECK_THROWS_AS(simulate_uplink(in.cs, in.sol.Theta, CVec::Zero(5).eval(), 1, true), DimensionError);

    SECTION("weak LP-Rx coupling only perturbs by its own scale")
    {
        const CVec s = complex_gaussian<double>(6, 1, 8);
        const CVec base = simulate_uplink(in.cs, in.sol.Theta, s, 1, false);
        const auto c1 = with_h12(in.cs, 1e-2, 9);
        const auto c2 = with_h12(in.cs, 1e-4, 9);
        const double d1 = (simulate_uplink(c1, in.sol.Theta, s, 1, false) - base).norm();
        const double d2 = (simulate_uplink(c2, in.sol.Theta, s, 1, false) - base).norm();
        // amplitude scales with sqrt(gain): ratio 10 expected, power ratio 1e2
        const double power_ratio = (d1 * d1) / (d2 * d2);
        CHECK(power_ratio > 1e2 / 3.0);
        CHECK(power_ratio < 1e2 * 3.0);
    }
}

TEST_CASE("mrc_combine")
{
    SECTION("noiseless combining returns the symbols")
    {
        const auto in = solved(8, 2, 4, 21, 1.0, 0.0, 0.0);
        const CVec s = complex_gaussian<double>(8, 1, 22);
        const auto ch = build_isi_matrix(in.cs.H0, in.sol.Htilde, 4, in.sol.beta);
        const CVec y = simulate_uplink(in.cs, in.sol.Theta, s, 3, false);
        CHECK((mrc_combine(ch, y) - s).norm() < 1e-9 * s.norm());
    }
    SECTION("post-combining noise variance is N0 / beta")
    {
        const double N0 = 0.5;
        const auto in = solved(8, 2, 2, 23, 1.0, N0, 0.0);
        const auto ch = build_isi_matrix(in.cs.H0, in.sol.Htilde, 2, in.sol.beta);
        const CVec s = CVec::Zero(4);
        double acc = 0.0;
        const int trials = 10000;
        for (int i = 0; i < trials; ++i)
            acc += mrc_combine(ch, simulate_uplink(in.cs, in.sol.Theta, s, 5000 + static_cast<std::uint64_t>(i), false))
                       .squaredNorm();
        CHECK_THAT(acc / (trials * 4.0), WithinRel(N0 / in.sol.beta, 0.05));
    }
    SECTION("errors")
    {
        IsiChannel<double> ch;
        ch.matrix = CMat::Zero(8, 2);
        ch.beta = 0.0;
        CHECK_THROWS_AS(mrc_combine(ch, CVec::Zero(8).eval()), ParameterError);
        ch.beta = 1.0;
        CHECK_THROWS_AS(mrc_combine(ch, CVec::Zero(7).eval()), DimensionError);
    }
}

TEST_CASE("capacity_white")
{
    CHECK(capacity_white(1.0, 1.0).best == 1.0);
    const auto r = capacity_white(3.0, 1.0, 2);
    CHECK(r.per_ue.size() == 2);
    CHECK(r.best == 2.0);
    CHECK(r.worst == r.best);
    CHECK(r.assumption1);
    CHECK_THROWS_AS(capacity_white(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(capacity_white(1.0, 0.0), ParameterError);
}

TEST_CASE("capacity_exact")
{
    SECTION("no forwarded noise reduces to the white result")
    {
        const auto in = solved(8, 2, 16, 31, 1.0, 0.01, 0.0);
        const auto exact = capacity_exact(in.cs, in.sol, 16);
        const auto white = capacity_white(in.sol.beta, 0.01, 2);
        for (std::size_t k = 0; k < 2; ++k)
            CHECK_THAT(exact.per_ue[k], WithinAbs(white.per_ue[k], 1e-12));
        CHECK_FALSE(exact.assumption1);
    }
    SECTION("agrees with the explicit stacked covariance")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const Index T = 3;
            const auto in = solved(6, 2, T, seed + 40, 0.5, 0.02, 0.05);
            const auto exact = capacity_exact(in.cs, in.sol, T);
            const auto ch = build_isi_matrix(in.cs.H0, (in.cs.H1 * in.sol.Theta * in.cs.H2).eval(), T, in.sol.beta);
            const CMat C = stacked_noise_covariance(in.cs, in.sol.Theta, T);
            const CMat Q = ch.matrix.adjoint() * C * ch.matrix;
            for (Index k = 0; k < 2; ++k)
            {
                double sum = 0.0;
                for (Index t = 0; t < T; ++t)
                    sum += std::log2(1.0 + in.sol.beta * in.sol.beta / Q(t * 2 + k, t * 2 + k).real());
                CHECK_THAT(exact.per_ue[static_cast<std::size_t>(k)], WithinRel(sum / T, 1e-10));
            }
        }
    }
    SECTION("forwarded noise never helps")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            const auto in = solved(8, 2, 16, seed + 60, 1.0, 0.01, 0.01);
            const auto exact = capacity_exact(in.cs, in.sol, 16);
            const auto white = capacity_white(in.sol.beta, 0.01, 2);
            CHECK(exact.best <= white.best + 1e-12);
            CHECK(exact.worst <= exact.best);
        }
    }
}
