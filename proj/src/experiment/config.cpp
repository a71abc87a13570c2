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

#include "rrtx/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace rrtx::experiment
{
    namespace
    {
        void reject_unknown(const nlohmann::json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            for (const auto &[key, value] : j.items())
                if (!allowed.count(key))
                    throw ConfigError("unknown field '" + key + "' in " + where);
        }

        template <typename T>
        T get_as(const nlohmann::json &j, const std::string &key)
        {
            try
            {
                return j.at(key).get<T>();
            }
            catch (const nlohmann::json::exception &e)
            {
                throw ConfigError("field '" + key + "': " + e.what());
            }
        }
    }

    std::vector<double> default_eta_grid_db()
    {
        std::vector<double> grid;
        for (int db = -10; db <= 20; db += 2)
            grid.push_back(static_cast<double>(db));
        return grid;
    }

    ExperimentConfig default_config()
    {
        ExperimentConfig cfg;
        cfg.eta_grid_db = default_eta_grid_db();
        return cfg;
    }

    void validate(const ExperimentConfig &cfg)
    {
        if (!cfg.dims.valid())
            throw ConfigError("dims: M, K and T must all be >= 1");
        if (cfg.trials < 1)
            throw ConfigError("trials must be >= 1");
        if (cfg.eta_grid_db.empty())
            throw ConfigError("eta_grid_db must not be empty");
        for (double v : cfg.eta_grid_db)
            if (!std::isfinite(v))
                throw ConfigError("eta_grid_db entries must be finite");
        if (cfg.beta_policy == BetaPolicy::fixed && !(cfg.beta_value >= 0.0))
            throw ConfigError("beta_policy.fixed must be >= 0");
        if (!(cfg.N0 > 0.0))
            throw ConfigError("noise.N0 must be positive");
        if (!(cfg.Ntilde0 >= 0.0))
            throw ConfigError("noise.Ntilde0 must be nonnegative");
        if (!(cfg.fairness_scale >= 0.0))
            throw ConfigError("fairness_scale must be nonnegative");
        if (cfg.verify_instances < 1)
            throw ConfigError("verify.instances must be >= 1");
        if (!(cfg.inject_theta_perturbation >= 0.0))
            throw ConfigError("verify.inject_theta_perturbation must be nonnegative");
    }

    ExperimentConfig config_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ConfigError("config root must be a JSON object");
        reject_unknown(j, {"dims", "eta_grid_db", "trials", "master_seed", "beta_policy", "noise", "fairness_scale",
                           "fairness_mode", "outputs", "threads", "verify"},
                       "config");

        ExperimentConfig cfg = default_config();
        if (j.contains("dims"))
        {
            const auto &d = j.at("dims");
            if (!d.is_object())
                throw ConfigError("dims must be an object");
            reject_unknown(d, {"M", "K", "T"}, "dims");
            if (d.contains("M"))
                cfg.dims.M = get_as<Index>(d, "M");
            if (d.contains("K"))
                cfg.dims.K = get_as<Index>(d, "K");
            if (d.contains("T"))
                cfg.dims.T = get_as<Index>(d, "T");
        }
        if (j.contains("eta_grid_db"))
            cfg.eta_grid_db = get_as<std::vector<double>>(j, "eta_grid_db");
        if (j.contains("trials"))
            cfg.trials = get_as<int>(j, "trials");
        if (j.contains("master_seed"))
            cfg.master_seed = get_as<std::uint64_t>(j, "master_seed");
        if (j.contains("beta_policy"))
        {
            const auto &b = j.at("beta_policy");
            if (b.is_string() && b.get<std::string>() == "minimum")
                cfg.beta_policy = BetaPolicy::minimum;
            else if (b.is_object() && b.size() == 1 && b.contains("fixed"))
            {
                cfg.beta_policy = BetaPolicy::fixed;
                cfg.beta_value = get_as<double>(b, "fixed");
            }
            else
                throw ConfigError("beta_policy must be \"minimum\" or {\"fixed\": <value>}");
        }
        if (j.contains("noise"))
        {
            const auto &n = j.at("noise");
            if (!n.is_object())
                throw ConfigError("noise must be an object");
            reject_unknown(n, {"N0", "Ntilde0"}, "noise");
            if (n.contains("N0"))
                cfg.N0 = get_as<double>(n, "N0");
            if (n.contains("Ntilde0"))
                cfg.Ntilde0 = get_as<double>(n, "Ntilde0");
        }
        if (j.contains("fairness_scale"))
            cfg.fairness_scale = get_as<double>(j, "fairness_scale");
        if (j.contains("fairness_mode"))
        {
            const auto mode = get_as<std::string>(j, "fairness_mode");
            if (mode == "fixed")
                cfg.fairness_mode = FairnessMode::fixed;
            else if (mode == "theta_power")
                cfg.fairness_mode = FairnessMode::theta_power;
            else
                throw ConfigError("fairness_mode must be \"fixed\" or \"theta_power\"");
        }
        if (j.contains("outputs"))
            cfg.output = get_as<std::string>(j, "outputs");
        if (j.contains("threads"))
            cfg.threads = get_as<unsigned>(j, "threads");
        if (j.contains("verify"))
        {
            const auto &v = j.at("verify");
            if (!v.is_object())
                throw ConfigError("verify must be an object");
            reject_unknown(v, {"instances", "inject_theta_perturbation"}, "verify");
            if (v.contains("instances"))
                cfg.verify_instances = get_as<int>(v, "instances");
            if (v.contains("inject_theta_perturbation"))
                cfg.inject_theta_perturbation = get_as<double>(v, "inject_theta_perturbation");
        }
        validate(cfg);
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        return config_from_json(j);
    }

    nlohmann::json to_json(const ExperimentConfig &cfg)
    {
        nlohmann::json j;
        j["dims"] = {{"M", cfg.dims.M}, {"K", cfg.dims.K}, {"T", cfg.dims.T}};
        j["eta_grid_db"] = cfg.eta_grid_db;
        j["trials"] = cfg.trials;
        j["master_seed"] = cfg.master_seed;
        if (cfg.beta_policy == BetaPolicy::minimum)
            j["beta_policy"] = "minimum";
        else
            j["beta_policy"] = {{"fixed", cfg.beta_value}};
        j["noise"] = {{"N0", cfg.N0}, {"Ntilde0", cfg.Ntilde0}};
        j["fairness_scale"] = cfg.fairness_scale;
        j["fairness_mode"] = cfg.fairness_mode == FairnessMode::fixed ? "fixed" : "theta_power";
        j["outputs"] = cfg.output;
        j["threads"] = cfg.threads;
        j["verify"] = {{"instances", cfg.verify_instances}, {"inject_theta_perturbation", cfg.inject_theta_perturbation}};
        return j;
    }
}
