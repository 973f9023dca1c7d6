#pragma once

#include <nlohmann/json_fwd.hpp>

#include "dagsl/nomad.hpp"

namespace dagsl {

/// Everything a `fit` invocation needs, as parsed from the config JSON
/// document {variant, lambda, schedule:[{mu,s,t_max}...],
/// optimizer:{step,beta1,beta2}, edge_threshold, seed, s, mom:{...}}.
/// Unknown or ill-typed keys raise config_error listing the offenders.
struct FitConfig {
    Variant variant = Variant::ev;
    double lambda = 0.05;
    Schedule schedule = default_schedule();
    SolverConfig solver;
    MomConfig mom;
    double s_nonneg = 0.0;  // 0 = derive from data (default_s_nonneg)
    uint64_t seed = 0;
    int tau_max = 1;        // nomad-svarm only
    double lambda_a = 0.05; // nomad-svarm only
};

FitConfig parse_fit_config(const nlohmann::json& doc);
FitConfig load_fit_config(const std::string& path);
nlohmann::json fit_config_to_json(const FitConfig& cfg);

}  // namespace dagsl
