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

#ifndef RRTX_EXPERIMENT_SWEEP_HPP
#define RRTX_EXPERIMENT_SWEEP_HPP

#include "rrtx/experiment/config.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rrtx::experiment
{
    // Per-purpose salts for trial seeds.
    namespace salt
    {
        inline constexpr std::uint64_t channel = 0x6368616E6E656Cull;
        inline constexpr std::uint64_t random_utilde = 0x72616E645574ull;
        inline constexpr std::uint64_t baseline = 0x626173656C696Eull;
    }

    // hash(master_seed, eta_index, trial_index, salt). Independent of the trial count,
    // so extending a run keeps the earlier trials' draws.
    std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t eta_index, std::uint64_t trial_index, std::uint64_t salt);

    // Columns not meaningful for a method hold NaN and are written as empty CSV fields.
    struct SweepRow
    {
        double eta_db = 0.0;
        std::string method;
        double mean_power_db = 0.0;
        double mean_power_linear = 0.0;
        double mean_min_beta_db = 0.0;
        double mean_capacity_best = 0.0;
        double mean_capacity_worst = 0.0;
        int trials = 0;
    };

    struct PowerTrial
    {
        double optimized_power = 0.0;
        double random_power = 0.0;
        double min_beta = 0.0;
    };

    struct SweepResult
    {
        std::vector<SweepRow> rows;
        // power sweep only: [eta_index][trial_index]
        std::vector<std::vector<PowerTrial>> power_trials;

        const SweepRow &row(double eta_db, const std::string &method) const;
    };

    SweepResult run_power_sweep(const ExperimentConfig &cfg);
    SweepResult run_capacity_sweep(const ExperimentConfig &cfg);

    // RFC-4180 CSV with a header row and 12 significant digits.
    std::string to_csv(const SweepResult &result);

    // Runs fn(i) for i in [0, n) on a worker pool. The first failing index (lowest i) is rethrown.
    void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn);

    // Neumaier-compensated arithmetic mean.
    double compensated_mean(const std::vector<double> &values);
}

#endif
