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

#include "rrtx/experiment/config.hpp"
#include "rrtx/experiment/sweep.hpp"
#include "rrtx/experiment/verify.hpp"

#include <atomic>
#include <cmath>

using namespace rrtx;
using namespace rrtx::experiment;
using nlohmann::json;

namespace
{
    ExperimentConfig small(int trials = 8)
    {
        ExperimentConfig cfg = default_config();
        cfg.eta_grid_db = {-10.0, 0.0, 10.0};
        cfg.trials = trials;
        cfg.master_seed = 3;
        return cfg;
    }
}

TEST_CASE("config - defaults")
{
    const auto cfg = default_config();
    CHECK(cfg.dims.M == 8);
    CHECK(cfg.dims.K == 2);
    CHECK(cfg.dims.T == 16);
    CHECK(cfg.trials == 1000);
    REQUIRE(cfg.eta_grid_db.size() == 16);
    CHECK(cfg.eta_grid_db.front() == -10.0);
    CHECK(cfg.eta_grid_db.back() == 20.0);
    CHECK(cfg.beta_policy == BetaPolicy::minimum);
    CHECK(cfg.fairness_scale == 1.0);
    CHECK(cfg.fairness_mode == FairnessMode::fixed);
    CHECK_NOTHROW(validate(cfg));
    CHECK(config_from_json(json::object()).trials == 1000);
}

TEST_CASE("config - parsing and round trip")
{
    const json j = json::parse(R"({
        "dims": {"M": 12, "K": 3, "T": 4},
        "eta_grid_db": [0, 5],
        "trials": 7,
        "master_seed": 18446744073709551615,
        "beta_policy": {"fixed": 40.0},
        "noise": {"N0": 0.5, "Ntilde0": 0.25},
        "fairness_scale": 2.0,
        "fairness_mode": "theta_power",
        "outputs": "out.csv",
        "threads": 1,
        "verify": {"instances": 3, "inject_theta_perturbation": 0.001}
    })");
    const auto cfg = config_from_json(j);
    CHECK(cfg.dims.M == 12);
    CHECK(cfg.dims.K == 3);
    CHECK(cfg.dims.T == 4);
    CHECK(cfg.eta_grid_db == std::vector<double>{0.0, 5.0});
    CHECK(cfg.master_seed == 18446744073709551615ull);
    CHECK(cfg.beta_policy == BetaPolicy::fixed);
    CHECK(cfg.beta_value == 40.0);
    CHECK(cfg.N0 == 0.5);
    CHECK(cfg.Ntilde0 == 0.25);
    CHECK(cfg.fairness_mode == FairnessMode::theta_power);
    CHECK(cfg.output == "out.csv");
    CHECK(cfg.verify_instances == 3);
    CHECK(to_json(config_from_json(to_json(cfg))) == to_json(cfg));
}

TEST_CASE("config - rejected inputs")
{
    auto bad = [](const char *text) { return config_from_json(json::parse(text)); };
    CHECK_THROWS_AS(bad(R"({"trails": 3})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"dims": {"N": 3}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"trials": 0})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"trials": "many"})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"eta_grid_db": []})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"beta_policy": "maximum"})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"beta_policy": {"fixed": -1}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"noise": {"N0": 0}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"fairness_mode": "magic"})"), ConfigError);
    CHECK_THROWS_AS(bad(R"([1, 2])"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    CHECK_THROWS_AS(load_config(RRTX_TEST_DATA "/bad_key.json"), ConfigError);
    CHECK(load_config(RRTX_TEST_DATA "/infeasible.json").dims.M == 3);
}

TEST_CASE("trial seeds")
{
    CHECK(trial_seed(1, 0, 0, salt::channel) != trial_seed(1, 0, 0, salt::random_utilde));
    CHECK(trial_seed(1, 0, 0, salt::channel) != trial_seed(1, 1, 0, salt::channel));
    CHECK(trial_seed(1, 0, 0, salt::channel) != trial_seed(1, 0, 1, salt::channel));
    CHECK(trial_seed(1, 0, 0, salt::channel) != trial_seed(2, 0, 0, salt::channel));

    // extending the trial count keeps the earlier trials
    auto a = small(4);
    auto b = small(8);
    a.eta_grid_db = b.eta_grid_db = {0.0};
    const auto ra = run_power_sweep(a), rb = run_power_sweep(b);
    for (std::size_t t = 0; t < 4; ++t)
    {
        CHECK(ra.power_trials[0][t].optimized_power == rb.power_trials[0][t].optimized_power);
        CHECK(ra.power_trials[0][t].random_power == rb.power_trials[0][t].random_power);
    }
}

TEST_CASE("power sweep")
{
    const auto cfg = small(20);
    const auto r = run_power_sweep(cfg);
    REQUIRE(r.rows.size() == 6);
    REQUIRE(r.power_trials.size() == 3);
    for (double eta : cfg.eta_grid_db)
    {
        const auto &opt = r.row(eta, "optimized");
        const auto &rnd = r.row(eta, "random");
        CHECK(opt.trials == 20);
        CHECK(opt.mean_power_db < rnd.mean_power_db);
        CHECK(opt.mean_min_beta_db == rnd.mean_min_beta_db);
        CHECK(std::isnan(opt.mean_capacity_best));
    }
    CHECK(r.row(-10.0, "optimized").mean_min_beta_db < r.row(0.0, "optimized").mean_min_beta_db);
    CHECK(r.row(0.0, "optimized").mean_min_beta_db < r.row(10.0, "optimized").mean_min_beta_db);
    for (const auto &per_eta : r.power_trials)
        for (const auto &t : per_eta)
            CHECK(t.optimized_power <= t.random_power);
    CHECK_THROWS_AS(r.row(1.0, "optimized"), std::out_of_range);

    auto infeasible = cfg;
    infeasible.dims = {3, 2, 4};
    CHECK_THROWS_AS(run_power_sweep(infeasible), InfeasibleError);
}

TEST_CASE("capacity sweep")
{
    auto cfg = small(6);
    const auto r = run_capacity_sweep(cfg);
    REQUIRE(r.rows.size() == 12);
    for (double eta : cfg.eta_grid_db)
    {
        const auto &white = r.row(eta, "proposed-white");
        CHECK(white.mean_capacity_best == white.mean_capacity_worst);
        const auto &exact = r.row(eta, "proposed-exact");
        CHECK(exact.mean_capacity_best <= white.mean_capacity_best + 1e-12);
        for (const char *m : {"zf-3panel", "mrc-3panel"})
        {
            const auto &row = r.row(eta, m);
            CHECK(std::isnan(row.mean_power_db));
            CHECK(row.mean_capacity_worst <= row.mean_capacity_best);
        }
    }
    cfg.fairness_mode = FairnessMode::theta_power;
    const auto t = run_capacity_sweep(cfg);
    CHECK(t.row(0.0, "proposed-white").mean_capacity_best == r.row(0.0, "proposed-white").mean_capacity_best);
    CHECK(t.row(0.0, "zf-3panel").mean_capacity_best != r.row(0.0, "zf-3panel").mean_capacity_best);
}

TEST_CASE("csv output")
{
    const auto cfg = small(3);
    const std::string a = to_csv(run_power_sweep(cfg));
    const std::string b = to_csv(run_power_sweep(cfg));
    CHECK(a == b);
    CHECK(a.rfind("eta_db,method,mean_power_db,mean_power_linear,mean_min_beta_db,mean_capacity_best,"
                  "mean_capacity_worst,trials\r\n",
                  0) == 0);
    CHECK(a.find("-10,optimized,") != std::string::npos);
    // capacity columns of the power sweep are empty
    CHECK(a.find(",,,3\r\n") != std::string::npos);

    auto threaded = cfg;
    threaded.threads = 3;
    CHECK(to_csv(run_power_sweep(threaded)) == a);
}

TEST_CASE("parallel_for and compensated_mean")
{
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

    try
    {
        parallel_for(50, 4, [](std::size_t i) {
            if (i == 7 || i == 30)
                throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    }
    catch (const std::runtime_error &e)
    {
        CHECK(std::string(e.what()) == "7");
    }

    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_mean(v) == 0.5);
    CHECK(std::isnan(compensated_mean({})));
}

TEST_CASE("verify report")
{
    auto cfg = small();
    cfg.verify_instances = 5;
    const auto ok = run_verify(cfg);
    CHECK(ok.passed());
    const auto *orth = ok.find("orthogonality");
    REQUIRE(orth != nullptr);
    CHECK(orth->max_residual < 1e-9);
    CHECK(ok.find("oracle-equivalence") != nullptr);
    CHECK(ok.to_text().find("orthogonality") != std::string::npos);

    auto infeasible = cfg;
    infeasible.dims = {3, 2, 4};
    const auto rej = run_verify(infeasible);
    CHECK(rej.passed());
    CHECK(rej.find("feasibility-rejection") != nullptr);
    CHECK(rej.find("orthogonality") == nullptr);

    auto fault = cfg;
    fault.inject_theta_perturbation = 1e-3;
    const auto bad = run_verify(fault);
    CHECK_FALSE(bad.passed());
    REQUIRE(bad.find("orthogonality") != nullptr);
    CHECK_FALSE(bad.find("orthogonality")->passed);
}
