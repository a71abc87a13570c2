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

// Experiment driver.
//
//   rrtx power-sweep    [--config f.json] [--seed N] [--trials N] [--out f.csv] [--quiet]
//   rrtx capacity-sweep [...]
//   rrtx verify         [...] [--inject-fault]
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 numerical error.

#include "rrtx/experiment/config.hpp"
#include "rrtx/experiment/sweep.hpp"
#include "rrtx/experiment/verify.hpp"
#include "rrtx/common.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_verify_failed = 1,
        exit_config = 2,
        exit_numerical = 3,
    };

    struct Options
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::string out;
        bool quiet = false;
        bool inject_fault = false;
    };

    void add_common(CLI::App *cmd, Options &opt)
    {
        cmd->add_option("--config", opt.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
        cmd->add_option("--seed", opt.seed, "master seed (overrides config)");
        cmd->add_option("--trials", opt.trials, "Monte-Carlo trials per grid point (overrides config)");
        cmd->add_option("--out", opt.out, "output path (overrides config; default stdout)");
        cmd->add_flag("--quiet", opt.quiet, "suppress progress messages on stderr");
    }

    rrtx::experiment::ExperimentConfig resolve(const Options &opt)
    {
        using namespace rrtx::experiment;
        ExperimentConfig cfg = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
        if (opt.seed)
            cfg.master_seed = *opt.seed;
        if (opt.trials)
            cfg.trials = *opt.trials;
        if (!opt.out.empty())
            cfg.output = opt.out;
        validate(cfg);
        return cfg;
    }

    void emit(const std::string &text, const std::string &path)
    {
        if (path.empty())
        {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw rrtx::experiment::ConfigError("cannot write output file '" + path + "'");
        f << text;
    }
}

int main(int argc, char **argv)
{
    using namespace rrtx::experiment;

    CLI::App app{"RRTx channel orthogonalization experiments"};
    app.require_subcommand(1);
    Options opt;
    auto *power = app.add_subcommand("power-sweep", "minimum RRTx processing power vs channel gain ratio");
    auto *capacity = app.add_subcommand("capacity-sweep", "ergodic per-UE capacity vs channel gain ratio");
    auto *verify = app.add_subcommand("verify", "run the invariant suite on random instances");
    for (auto *cmd : {power, capacity, verify})
        add_common(cmd, opt);
    verify->add_flag("--inject-fault", opt.inject_fault, "perturb Theta by 1e-3 before the orthogonality check");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try
    {
        ExperimentConfig cfg = resolve(opt);
        const auto start = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        };

        if (power->parsed() || capacity->parsed())
        {
            const bool is_power = power->parsed();
            if (!opt.quiet)
                std::cerr << (is_power ? "power-sweep" : "capacity-sweep") << ": M=" << cfg.dims.M << " K=" << cfg.dims.K
                          << " T=" << cfg.dims.T << " trials=" << cfg.trials << " grid=" << cfg.eta_grid_db.size()
                          << " points\n";
            const SweepResult result = is_power ? run_power_sweep(cfg) : run_capacity_sweep(cfg);
            emit(to_csv(result), cfg.output);
            if (!opt.quiet)
                std::cerr << "done in " << elapsed() << " s\n";
            return exit_ok;
        }

        if (opt.inject_fault)
            cfg.inject_theta_perturbation = 1e-3;
        const VerifyReport report = run_verify(cfg);
        emit(report.to_text(), cfg.output);
        if (!opt.quiet)
            std::cerr << "verify finished in " << elapsed() << " s\n";
        return report.passed() ? exit_ok : exit_verify_failed;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
}
