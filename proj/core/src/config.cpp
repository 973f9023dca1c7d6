#include "dagsl/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace dagsl {

using nlohmann::json;

namespace {

void collect_unknown(const json& obj, const std::vector<std::string>& allowed,
                     const std::string& prefix, std::vector<std::string>& bad) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) bad.push_back(prefix + it.key());
    }
}

template <typename T>
void read_field(const json& obj, const std::string& key, const std::string& prefix,
                T& dst, std::vector<std::string>& bad) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        dst = it->get<T>();
    } catch (const json::exception&) {
        bad.push_back(prefix + key + " (wrong type)");
    }
}

}  // namespace

FitConfig parse_fit_config(const json& doc) {
    if (!doc.is_object())
        throw config_error("config must be a JSON object", {"<root>"});
    std::vector<std::string> bad;
    collect_unknown(doc,
                    {"variant", "lambda", "schedule", "optimizer",
                     "edge_threshold", "seed", "s", "mom", "tau_max", "lambda_a"},
                    "", bad);

    FitConfig cfg;
    std::string variant = "ev";
    read_field(doc, "variant", "", variant, bad);
    if (variant == "ev")
        cfg.variant = Variant::ev;
    else if (variant == "nv")
        cfg.variant = Variant::nv;
    else
        bad.push_back("variant (must be \"ev\" or \"nv\")");

    read_field(doc, "lambda", "", cfg.lambda, bad);
    read_field(doc, "edge_threshold", "", cfg.solver.edge_threshold, bad);
    read_field(doc, "seed", "", cfg.seed, bad);
    read_field(doc, "s", "", cfg.s_nonneg, bad);
    read_field(doc, "tau_max", "", cfg.tau_max, bad);
    read_field(doc, "lambda_a", "", cfg.lambda_a, bad);

    if (doc.contains("schedule")) {
        const json& sched = doc["schedule"];
        if (!sched.is_array()) {
            bad.push_back("schedule (must be an array)");
        } else {
            Schedule s;
            for (size_t k = 0; k < sched.size(); ++k) {
                const std::string prefix = "schedule[" + std::to_string(k) + "].";
                if (!sched[k].is_object()) {
                    bad.push_back("schedule[" + std::to_string(k) + "]");
                    continue;
                }
                collect_unknown(sched[k], {"mu", "s", "t_max"}, prefix, bad);
                Stage st;
                read_field(sched[k], "mu", prefix, st.mu, bad);
                read_field(sched[k], "s", prefix, st.s, bad);
                read_field(sched[k], "t_max", prefix, st.t_max, bad);
                s.push_back(st);
            }
            if (bad.empty()) {
                try {
                    validate_schedule(s);
                    cfg.schedule = std::move(s);
                } catch (const std::invalid_argument& e) {
                    bad.push_back(std::string("schedule (") + e.what() + ")");
                }
            }
        }
    }

    if (doc.contains("optimizer")) {
        const json& opt = doc["optimizer"];
        if (!opt.is_object()) {
            bad.push_back("optimizer (must be an object)");
        } else {
            collect_unknown(opt, {"step", "beta1", "beta2"}, "optimizer.", bad);
            read_field(opt, "step", "optimizer.", cfg.solver.adam.step, bad);
            read_field(opt, "beta1", "optimizer.", cfg.solver.adam.beta1, bad);
            read_field(opt, "beta2", "optimizer.", cfg.solver.adam.beta2, bad);
        }
    }

    if (doc.contains("mom")) {
        const json& mom = doc["mom"];
        if (!mom.is_object()) {
            bad.push_back("mom (must be an object)");
        } else {
            collect_unknown(mom,
                            {"alpha0", "c0", "gamma", "eta", "eps_h", "outer_max",
                             "inner_tol", "inner_max"},
                            "mom.", bad);
            read_field(mom, "alpha0", "mom.", cfg.mom.alpha0, bad);
            read_field(mom, "c0", "mom.", cfg.mom.c0, bad);
            read_field(mom, "gamma", "mom.", cfg.mom.gamma, bad);
            read_field(mom, "eta", "mom.", cfg.mom.eta, bad);
            read_field(mom, "eps_h", "mom.", cfg.mom.eps_h, bad);
            read_field(mom, "outer_max", "mom.", cfg.mom.outer_max, bad);
            read_field(mom, "inner_tol", "mom.", cfg.mom.inner_tol, bad);
            read_field(mom, "inner_max", "mom.", cfg.mom.inner_max, bad);
        }
    }

    if (!bad.empty()) throw config_error("invalid fit config", bad);
    return cfg;
}

FitConfig load_fit_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": JSON parse error: " + e.what());
    }
    return parse_fit_config(doc);
}

json fit_config_to_json(const FitConfig& cfg) {
    json sched = json::array();
    for (const auto& st : cfg.schedule)
        sched.push_back({{"mu", st.mu}, {"s", st.s}, {"t_max", st.t_max}});
    return json{
        {"variant", cfg.variant == Variant::ev ? "ev" : "nv"},
        {"lambda", cfg.lambda},
        {"schedule", std::move(sched)},
        {"optimizer",
         {{"step", cfg.solver.adam.step},
          {"beta1", cfg.solver.adam.beta1},
          {"beta2", cfg.solver.adam.beta2}}},
        {"edge_threshold", cfg.solver.edge_threshold},
        {"seed", cfg.seed},
        {"s", cfg.s_nonneg},
        {"mom",
         {{"alpha0", cfg.mom.alpha0},
          {"c0", cfg.mom.c0},
          {"gamma", cfg.mom.gamma},
          {"eta", cfg.mom.eta},
          {"eps_h", cfg.mom.eps_h},
          {"outer_max", cfg.mom.outer_max}}},
        {"tau_max", cfg.tau_max},
        {"lambda_a", cfg.lambda_a}};
}

}  // namespace dagsl
