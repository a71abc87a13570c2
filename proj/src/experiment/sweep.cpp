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

#include "rrtx/experiment/sweep.hpp"

#include "rrtx/rrtx.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace rrtx::experiment
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        double to_db(double linear) { return 10.0 * std::log10(linear); }

        double beta_for(const ExperimentConfig &cfg, double min_beta)
        {
            return cfg.beta_policy == BetaPolicy::minimum ? min_beta : cfg.beta_value;
        }

        void require_orthogonalizable(const ExperimentConfig &cfg)
        {
            validate(cfg);
            if (!cfg.dims.orthogonalizable())
                throw InfeasibleError("orthogonalization needs M >= 2K (M=" + std::to_string(cfg.dims.M) +
                                      ", K=" + std::to_string(cfg.dims.K) + ")");
        }

        ChannelSetd trial_channels(const ExperimentConfig &cfg, std::size_t eta_index, std::size_t trial)
        {
            const double eta = std::pow(10.0, cfg.eta_grid_db[eta_index] / 10.0);
            return sample_channel_set<double>(cfg.dims, eta, cfg.N0, cfg.Ntilde0,
                                              trial_seed(cfg.master_seed, eta_index, trial, salt::channel));
        }

        std::string format_number(double v)
        {
            if (std::isnan(v))
                return {};
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return buf;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\r\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }
    }

    std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t eta_index, std::uint64_t trial_index, std::uint64_t salt)
    {
        std::uint64_t h = mix64(master_seed);
        h = mix64(h ^ mix64(eta_index + 0x1000));
        h = mix64(h ^ mix64(trial_index + 0x2000));
        return mix64(h ^ mix64(salt));
    }

    const SweepRow &SweepResult::row(double eta_db, const std::string &method) const
    {
        for (const auto &r : rows)
            if (r.eta_db == eta_db && r.method == method)
                return r;
        throw std::out_of_range("SweepResult: no row for method " + method);
    }

    void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn)
    {
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

        std::atomic<std::size_t> next{0};
        std::mutex err_mutex;
        std::size_t err_index = std::numeric_limits<std::size_t>::max();
        std::exception_ptr err;

        auto worker = [&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(err_mutex);
                    if (i < err_index)
                    {
                        err_index = i;
                        err = std::current_exception();
                    }
                }
            }
        };

        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        if (err)
            std::rethrow_exception(err);
    }

    double compensated_mean(const std::vector<double> &values)
    {
        if (values.empty())
            return nan;
        double sum = 0.0;
        double c = 0.0;
        for (double v : values)
        {
            const double t = sum + v;
            if (std::abs(sum) >= std::abs(v))
                c += (sum - t) + v;
            else
                c += (v - t) + sum;
            sum = t;
        }
        return (sum + c) / static_cast<double>(values.size());
    }

    SweepResult run_power_sweep(const ExperimentConfig &cfg)
    {
        require_orthogonalizable(cfg);
        const std::size_t n_eta = cfg.eta_grid_db.size();
        const auto trials = static_cast<std::size_t>(cfg.trials);
        const Index M = cfg.dims.M;
        const Index K = cfg.dims.K;

        SweepResult result;
        result.power_trials.assign(n_eta, std::vector<PowerTrial>(trials));

        parallel_for(n_eta * trials, cfg.threads, [&](std::size_t job) {
            const std::size_t e = job / trials;
            const std::size_t t = job % trials;
            const ChannelSetd cs = trial_channels(cfg, e, t);
            const H0Svd<double> svd = decompose_h0(cs.H0);
            const double lmax = min_beta(svd);
            const double beta = beta_for(cfg, lmax);

            const RrtxSolution<double> opt = minimize_power(cs, beta);
            const CMatrix<double> U = random_semi_unitary<double>(M - K, K, trial_seed(cfg.master_seed, e, t, salt::random_utilde));
            const RrtxSolution<double> rnd = orthogonalize(cs, beta, U, svd);
            result.power_trials[e][t] = {opt.power, rnd.power, lmax};
        });

        for (std::size_t e = 0; e < n_eta; ++e)
        {
            std::vector<double> opt_db, opt_lin, rnd_db, rnd_lin, beta_db;
            for (const auto &pt : result.power_trials[e])
            {
                opt_db.push_back(to_db(pt.optimized_power));
                opt_lin.push_back(pt.optimized_power);
                rnd_db.push_back(to_db(pt.random_power));
                rnd_lin.push_back(pt.random_power);
                beta_db.push_back(to_db(pt.min_beta));
            }
            const double mb = compensated_mean(beta_db);
            result.rows.push_back({cfg.eta_grid_db[e], "optimized", compensated_mean(opt_db), compensated_mean(opt_lin), mb,
                                   nan, nan, cfg.trials});
            result.rows.push_back({cfg.eta_grid_db[e], "random", compensated_mean(rnd_db), compensated_mean(rnd_lin), mb,
                                   nan, nan, cfg.trials});
        }
        return result;
    }

    SweepResult run_capacity_sweep(const ExperimentConfig &cfg)
    {
        require_orthogonalizable(cfg);
        const std::size_t n_eta = cfg.eta_grid_db.size();
        const auto trials = static_cast<std::size_t>(cfg.trials);

        struct TrialOut
        {
            double power = 0, beta_db = 0;
            CapacityReport<double> white, exact, zf, mrc;
        };
        std::vector<TrialOut> out(n_eta * trials);

        parallel_for(n_eta * trials, cfg.threads, [&](std::size_t job) {
            const std::size_t e = job / trials;
            const std::size_t t = job % trials;
            const ChannelSetd cs = trial_channels(cfg, e, t);
            const double lmax = min_beta(decompose_h0(cs.H0));
            const double beta = beta_for(cfg, lmax);
            const RrtxSolution<double> sol = minimize_power(cs, beta);

            const double fairness = cfg.fairness_mode == FairnessMode::theta_power ? cfg.fairness_scale * sol.power
                                                                                    : cfg.fairness_scale;
            const auto sc = stack_active(cs, trial_seed(cfg.master_seed, e, t, salt::baseline), fairness);

            TrialOut &o = out[job];
            o.power = sol.power;
            o.beta_db = to_db(lmax);
            o.white = capacity_white(beta, cs.N0, cs.dims.K);
            o.exact = capacity_exact(cs, sol, cs.dims.T);
            o.zf = zf_capacity(sc);
            o.mrc = mrc_capacity(sc);
        });

        SweepResult result;
        for (std::size_t e = 0; e < n_eta; ++e)
        {
            std::vector<double> power_db, power_lin, beta_db;
            std::vector<double> best[4], worst[4];
            for (std::size_t t = 0; t < trials; ++t)
            {
                const TrialOut &o = out[e * trials + t];
                power_db.push_back(to_db(o.power));
                power_lin.push_back(o.power);
                beta_db.push_back(o.beta_db);
                const CapacityReport<double> *reports[4] = {&o.white, &o.exact, &o.zf, &o.mrc};
                for (int m = 0; m < 4; ++m)
                {
                    best[m].push_back(reports[m]->best);
                    worst[m].push_back(reports[m]->worst);
                }
            }
            const double mb = compensated_mean(beta_db);
            const double pdb = compensated_mean(power_db);
            const double plin = compensated_mean(power_lin);
            const char *names[4] = {"proposed-white", "proposed-exact", "zf-3panel", "mrc-3panel"};
            for (int m = 0; m < 4; ++m)
            {
                const bool proposed = m < 2;
                result.rows.push_back({cfg.eta_grid_db[e], names[m], proposed ? pdb : nan, proposed ? plin : nan, mb,
                                       compensated_mean(best[m]), compensated_mean(worst[m]), cfg.trials});
            }
        }
        return result;
    }

    std::string to_csv(const SweepResult &result)
    {
        std::string csv = "eta_db,method,mean_power_db,mean_power_linear,mean_min_beta_db,"
                          "mean_capacity_best,mean_capacity_worst,trials\r\n";
        for (const auto &r : result.rows)
        {
            csv += format_number(r.eta_db) + ',' + csv_field(r.method) + ',' + format_number(r.mean_power_db) + ',' +
                   format_number(r.mean_power_linear) + ',' + format_number(r.mean_min_beta_db) + ',' +
                   format_number(r.mean_capacity_best) + ',' + format_number(r.mean_capacity_worst) + ',' +
                   std::to_string(r.trials) + "\r\n";
        }
        return csv;
    }
}
