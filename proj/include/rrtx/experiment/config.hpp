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

#ifndef RRTX_EXPERIMENT_CONFIG_HPP
#define RRTX_EXPERIMENT_CONFIG_HPP

#include "rrtx/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrtx::experiment
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class BetaPolicy
    {
        minimum, // beta = largest eigenvalue of H0^H H0, per trial
        fixed,
    };

    // How the H2/H3 power gain of the fully-active baselines is set.
    enum class FairnessMode
    {
        fixed,       // gain = fairness_scale
        theta_power, // gain = fairness_scale * ||Theta||_F^2 of the trial's optimized processing
    };

    struct ExperimentConfig
    {
        Dimensions dims{8, 2, 16};
        std::vector<double> eta_grid_db;
        int trials = 1000;
        std::uint64_t master_seed = 1;
        BetaPolicy beta_policy = BetaPolicy::minimum;
        double beta_value = 0.0; // used when beta_policy == fixed
        double N0 = 0.01;
        double Ntilde0 = 0.01;
        double fairness_scale = 1.0;
        FairnessMode fairness_mode = FairnessMode::fixed;
        std::string output; // empty: stdout
        unsigned threads = 0; // 0: hardware concurrency

        // verify subcommand
        int verify_instances = 50;
        double inject_theta_perturbation = 0.0;
    };

    // -10, -8, ..., 20 dB
    std::vector<double> default_eta_grid_db();

    ExperimentConfig default_config();

    // Missing fields keep their defaults; unknown fields and invalid values raise ConfigError.
    ExperimentConfig config_from_json(const nlohmann::json &j);
    ExperimentConfig load_config(const std::string &path);
    nlohmann::json to_json(const ExperimentConfig &cfg);

    void validate(const ExperimentConfig &cfg);
}

#endif
