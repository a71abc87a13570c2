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

#ifndef RRTX_COMMON_HPP
#define RRTX_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rrtx
{
    template <typename Real>
    using Complex = std::complex<Real>;

    template <typename Real>
    using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Real>
    using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

    template <typename Real>
    using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    using Index = Eigen::Index;

    // Numerical thresholds shared by the construction and its checks.
    struct Tolerance
    {
        static constexpr double unitarity = 1e-10;
        static constexpr double construction = 1e-9;
        static constexpr double semi_unitary_input = 1e-8;
        static constexpr double max_condition = 1e12;
        static constexpr double beta_slack = 1e-12;
        static constexpr double eigen_clamp = 1e-12;
        static constexpr double degenerate_gap = 1e-8;
    };

    // Panel geometry of one coherence block.
    struct Dimensions
    {
        Index M = 8;  // antennas per panel
        Index K = 2;  // UEs
        Index T = 16; // transmission slots

        bool valid() const { return M >= 1 && K >= 1 && T >= 1; }
        bool orthogonalizable() const { return M >= 2 * K; }
    };

    // ---- errors ----

    class DimensionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class ParameterError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class InfeasibleError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ConstraintError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class BudgetError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Raised for singular / ill-conditioned channels; carries the offending condition number.
    class ConditioningError : public std::runtime_error
    {
    public:
        ConditioningError(const std::string &what, double condition)
            : std::runtime_error(what + " (condition number " + std::to_string(condition) + ")"),
              condition_(condition) {}

        double condition() const noexcept { return condition_; }

    private:
        double condition_;
    };

    inline void require_dims(bool ok, const std::string &msg)
    {
        if (!ok)
            throw DimensionError(msg);
    }

    // Relative Frobenius residual ||a - b|| / ||b||, falling back to absolute when b vanishes.
    template <typename DerivedA, typename DerivedB>
    auto relative_residual(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b)
    {
        const auto diff = (a - b).norm();
        const auto ref = b.norm();
        return ref > 0 ? diff / ref : diff;
    }
}

#endif
