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

#ifndef RRTX_EXPERIMENT_VERIFY_HPP
#define RRTX_EXPERIMENT_VERIFY_HPP

#include "rrtx/experiment/config.hpp"

#include <string>
#include <vector>

namespace rrtx::experiment
{
    struct PropertyResult
    {
        std::string name;
        bool passed = false;
        double max_residual = 0.0;
        double threshold = 0.0;
        int instances = 0;
        std::string note;
    };

    struct VerifyReport
    {
        std::vector<PropertyResult> properties;

        bool passed() const;
        const PropertyResult *find(const std::string &name) const;
        std::string to_text() const;
    };

    // Runs the invariant suite on cfg.verify_instances random channel realizations at cfg.dims.
    // When M < 2K only the rejection of infeasible dimensions is checked (an expected outcome).
    // A positive cfg.inject_theta_perturbation corrupts Theta before the orthogonality check.
    VerifyReport run_verify(const ExperimentConfig &cfg);
}

#endif
