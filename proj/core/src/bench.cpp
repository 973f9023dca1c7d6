#include "dagsl/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

namespace dagsl {

using nlohmann::json;

ExperimentGrid parse_grid(const json& doc) {
    if (!doc.is_object()) throw config_error("grid must be a JSON object", {"<root>"});
    std::vector<std::string> bad;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        static const std::vector<std::string> allowed{
            "kind",  "graph", "d",       "n",           "t_max",
            "tau_max", "lag_mean_degree", "burn_in",    "noise",
            "weights", "methods", "seeds", "lag_threshold"};
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            bad.push_back(it.key());
    }
    if (!bad.empty()) throw config_error("invalid grid", bad);

    ExperimentGrid g;
    if (doc.contains("kind")) g.kind = doc["kind"].get<std::string>();
    if (g.kind != "iid" && g.kind != "svarm")
        throw config_error("invalid grid", {"kind (must be iid|svarm)"});
    if (doc.contains("graph")) {
        g.graph_type = doc["graph"].value("type", "er");
        g.mean_degree = doc["graph"].value("mean_degree", 4.0);
        if (g.graph_type != "er" && g.graph_type != "sf")
            throw config_error("invalid grid", {"graph.type (must be er|sf)"});
    }
    if (doc.contains("d")) g.d_list = doc["d"].get<std::vector<int>>();
    if (doc.contains("n")) g.n_list = doc["n"].get<std::vector<long>>();
    if (doc.contains("t_max")) g.n_list = {doc["t_max"].get<long>()};
    if (doc.contains("tau_max")) g.tau_max = doc["tau_max"].get<int>();
    if (doc.contains("lag_mean_degree"))
        g.lag_mean_degree = doc["lag_mean_degree"].get<double>();
    if (doc.contains("burn_in")) g.burn_in = doc["burn_in"].get<long>();
    if (doc.contains("lag_threshold"))
        g.lag_threshold = doc["lag_threshold"].get<double>();
    if (doc.contains("noise")) {
        const json& nz = doc["noise"];
        g.noise.ev = nz.value("mode", "ev") == "ev";
        g.noise.family = noise_family_from_string(nz.value("family", "gaussian"));
        g.noise.sigma2 = nz.value("sigma2", 1.0);
        if (nz.contains("var_range")) {
            g.noise.var_low = nz["var_range"][0].get<double>();
            g.noise.var_high = nz["var_range"][1].get<double>();
        }
    }
    if (doc.contains("weights")) {
        const json& w = doc["weights"];
        g.weight_low = w.value("low", 0.5);
        g.weight_high = w.value("high", 2.0);
        const std::string sgn = w.value("sign", "mixed");
        if (sgn != "mixed" && sgn != "nonneg")
            throw config_error("invalid grid", {"weights.sign (must be mixed|nonneg)"});
        g.weight_sign = sgn == "mixed" ? WeightSign::mixed : WeightSign::nonneg;
    }
    if (doc.contains("methods")) {
        for (const json& m : doc["methods"]) {
            MethodSpec spec;
            spec.name = m.at("name").get<std::string>();
            static const std::vector<std::string> known{
                "colide-ev", "colide-nv", "dagma-ols",
                "nomad",     "nomad-svarm", "svarm-ols"};
            if (std::find(known.begin(), known.end(), spec.name) == known.end())
                throw config_error("invalid grid", {"methods.name: " + spec.name});
            spec.config = m.contains("config") ? parse_fit_config(m["config"])
                                               : FitConfig{};
            g.methods.push_back(std::move(spec));
        }
    }
    if (doc.contains("seeds")) g.seeds = doc["seeds"].get<std::vector<uint64_t>>();
    if (g.methods.empty()) throw config_error("invalid grid", {"methods (empty)"});
    if (g.seeds.empty()) throw config_error("invalid grid", {"seeds (empty)"});
    if (g.d_list.empty()) throw config_error("invalid grid", {"d (empty)"});
    if (g.n_list.empty()) throw config_error("invalid grid", {"n (empty)"});
    return g;
}

ExperimentGrid load_grid(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open grid");
    json doc = json::parse(in);
    return parse_grid(doc);
}

namespace {

BinaryDag draw_graph(const ExperimentGrid& grid, int d, Rng& rng) {
    if (grid.graph_type == "er") return random_er_dag(d, grid.mean_degree, rng);
    int attach = std::max(1, static_cast<int>(std::lround(grid.mean_degree / 2.0)));
    attach = std::min(attach, d - 1);
    return random_sf_dag(d, attach, rng);
}

NoiseSpec draw_noise_spec(const ExperimentGrid& grid, int d, Rng& rng) {
    NoiseSpec spec;
    spec.family = grid.noise.family;
    if (grid.noise.ev) {
        spec.sigmas = Vector::Constant(d, std::sqrt(grid.noise.sigma2));
    } else {
        std::uniform_real_distribution<double> var(grid.noise.var_low,
                                                   grid.noise.var_high);
        spec.sigmas = Vector::NullaryExpr(d, [&](Eigen::Index) {
            return std::sqrt(var(rng));
        });
    }
    return spec;
}

}  // namespace

SimulatedTrial simulate_trial(const ExperimentGrid& grid, int d, long n,
                              uint64_t seed) {
    Rng rng(seed);
    SimulatedTrial out;
    const BinaryDag dag = draw_graph(grid, d, rng);
    out.w_true = assign_weights(dag, grid.weight_low, grid.weight_high,
                                grid.weight_sign, rng);
    out.noise = draw_noise_spec(grid, d, rng);

    if (grid.kind == "iid") {
        out.data = sample_linear_sem(out.w_true, out.noise, n, rng);
        return out;
    }

    // SVARM: draw lag matrices on ER supports, redraw (then shrink) until the
    // companion system is comfortably stable.
    for (int attempt = 0;; ++attempt) {
        std::vector<Matrix> lags;
        for (int tau = 0; tau < grid.tau_max; ++tau) {
            BinaryDag sup = random_er_dag(d, grid.lag_mean_degree, rng);
            Matrix a = assign_weights(sup, grid.weight_low, grid.weight_high,
                                      WeightSign::mixed, rng);
            lags.push_back(std::move(a));
        }
        double rho = svarm_companion_radius(out.w_true, lags);
        if (rho > 0.95 && attempt >= 50) {
            while (rho > 0.95) {
                for (auto& a : lags) a *= 0.9;
                rho = svarm_companion_radius(out.w_true, lags);
            }
        }
        if (rho <= 0.95) {
            out.lags_true = std::move(lags);
            break;
        }
    }
    out.series = sample_svarm(out.w_true, out.lags_true, out.noise, n,
                              grid.burn_in, rng);
    return out;
}

namespace {

double lag_f1(const std::vector<Matrix>& est, const std::vector<Matrix>& truth,
              double tol) {
    long tp = 0, detected = 0, actual = 0;
    for (size_t t = 0; t < truth.size(); ++t) {
        const Matrix& a = truth[t];
        const Matrix b =
            t < est.size() ? est[t] : Matrix(Matrix::Zero(a.rows(), a.cols()));
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) {
                const bool in_truth = a(i, j) != 0.0;
                const bool in_est = std::abs(b(i, j)) > tol;
                actual += in_truth;
                detected += in_est;
                tp += (in_truth && in_est);
            }
    }
    if (actual == 0) return detected == 0 ? 1.0 : 0.0;
    if (detected == 0) return 0.0;
    const double prec = static_cast<double>(tp) / detected;
    const double rec = static_cast<double>(tp) / actual;
    if (prec + rec == 0.0) return 0.0;
    return 2.0 * prec * rec / (prec + rec);
}

long total_iters(const std::vector<StageTrace>& trace) {
    long t = 0;
    for (const auto& st : trace) t += st.iters;
    return t;
}

void run_method(const ExperimentGrid& grid, const MethodSpec& method,
                const SimulatedTrial& sim, TrialRecord& rec) {
    const auto& cfg = method.config;
    if (method.name == "colide-ev" || method.name == "colide-nv" ||
        method.name == "dagma-ols") {
        FitResult fit =
            method.name == "dagma-ols"
                ? fit_dagma_ols(sim.data, cfg.lambda, cfg.schedule, cfg.solver)
                : fit_colide(sim.data,
                             method.name == "colide-ev" ? Variant::ev : Variant::nv,
                             cfg.lambda, cfg.schedule, cfg.solver);
        rec.metrics = evaluate(fit.W, sim.w_true);
        rec.converged = fit.converged;
        rec.iters = total_iters(fit.trace);
        rec.cycle_edges_removed = fit.cycle_edges_removed;
    } else if (method.name == "nomad") {
        const double s =
            cfg.s_nonneg > 0.0 ? cfg.s_nonneg : default_s_nonneg(sim.data);
        FitResult fit = fit_nomad(sim.data, cfg.lambda, s, cfg.mom,
                                  cfg.solver.edge_threshold);
        rec.metrics = evaluate(fit.W, sim.w_true);
        rec.converged = fit.converged;
        rec.iters = total_iters(fit.trace);
        rec.cycle_edges_removed = fit.cycle_edges_removed;
    } else if (method.name == "nomad-svarm" || method.name == "svarm-ols") {
        SvarmFit fit;
        if (method.name == "nomad-svarm") {
            Dataset proxy(sim.series.X);
            const double s =
                cfg.s_nonneg > 0.0 ? cfg.s_nonneg : default_s_nonneg(proxy);
            fit = fit_nomad_svarm(sim.series, grid.tau_max, cfg.lambda,
                                  cfg.lambda_a, s, cfg.mom,
                                  cfg.solver.edge_threshold);
        } else {
            fit = fit_svarm_ols(sim.series, grid.tau_max, cfg.lambda, cfg.lambda_a,
                                cfg.schedule, cfg.solver);
        }
        rec.metrics = evaluate(fit.W, sim.w_true);
        rec.f1_a = lag_f1(fit.lags, sim.lags_true, grid.lag_threshold);
        rec.converged = fit.converged;
        rec.iters = total_iters(fit.trace);
        rec.cycle_edges_removed = fit.cycle_edges_removed;
    } else {
        throw std::invalid_argument("unknown method: " + method.name);
    }
}

}  // namespace

BenchResult run_bench(const ExperimentGrid& grid, int workers) {
    struct Cell {
        int d;
        long n;
        uint64_t seed;
    };
    std::vector<Cell> cells;
    for (int d : grid.d_list)
        for (long n : grid.n_list)
            for (uint64_t seed : grid.seeds) cells.push_back({d, n, seed});

    const size_t m = grid.methods.size();
    std::vector<TrialRecord> rows(cells.size() * m);
    std::vector<double> seconds(cells.size() * m, 0.0);

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t c = next.fetch_add(1);
            if (c >= cells.size()) return;
            const Cell cell = cells[c];

            SimulatedTrial sim;
            std::string sim_error;
            try {
                sim = simulate_trial(grid, cell.d, cell.n, cell.seed);
            } catch (const std::exception& e) {
                sim_error = e.what();
            }

            for (size_t k = 0; k < m; ++k) {
                TrialRecord& rec = rows[c * m + k];
                rec.graph_type = grid.graph_type;
                rec.mean_degree = grid.mean_degree;
                rec.d = cell.d;
                rec.n = cell.n;
                rec.kind = grid.kind;
                rec.noise_mode = grid.noise.ev ? "ev" : "nv";
                rec.noise_family = to_string(grid.noise.family);
                rec.sigma2 = grid.noise.ev ? grid.noise.sigma2 : 0.0;
                rec.var_low = grid.noise.ev ? 0.0 : grid.noise.var_low;
                rec.var_high = grid.noise.ev ? 0.0 : grid.noise.var_high;
                rec.weight_low = grid.weight_low;
                rec.weight_high = grid.weight_high;
                rec.weight_sign =
                    grid.weight_sign == WeightSign::mixed ? "mixed" : "nonneg";
                rec.method = grid.methods[k].name;
                rec.seed = cell.seed;
                if (!sim_error.empty()) {
                    rec.ok = false;
                    rec.error = "simulate: " + sim_error;
                    continue;
                }
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    run_method(grid, grid.methods[k], sim, rec);
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.error = e.what();
                }
                seconds[c * m + k] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0)
                        .count();
            }
        }
    };

    workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers - 1; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    return {std::move(rows), std::move(seconds)};
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_records_csv(const fs::path& path, const std::vector<TrialRecord>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "# schema=1\n";
    out << "graph_type,mean_degree,d,n,kind,noise_mode,noise_family,sigma2,"
           "var_low,var_high,weight_low,weight_high,weight_sign,method,seed,"
           "status,error,shd,shd_c,fdr,tpr,f1,sid,nmse,f1_a,converged,iters,"
           "cycle_edges_removed\n";
    for (const auto& r : rows) {
        out << r.graph_type << ',' << format_double(r.mean_degree) << ',' << r.d
            << ',' << r.n << ',' << r.kind << ',' << r.noise_mode << ','
            << r.noise_family << ',' << format_double(r.sigma2) << ','
            << format_double(r.var_low) << ',' << format_double(r.var_high) << ','
            << format_double(r.weight_low) << ',' << format_double(r.weight_high)
            << ',' << r.weight_sign << ',' << r.method << ',' << r.seed << ','
            << (r.ok ? "ok" : "error") << ',' << csv_escape(r.error) << ',';
        if (r.ok) {
            out << r.metrics.shd << ',' << r.metrics.shd_c << ','
                << format_double(r.metrics.fdr) << ',' << format_double(r.metrics.tpr)
                << ',' << format_double(r.metrics.f1) << ',' << r.metrics.sid << ','
                << format_double(r.metrics.nmse) << ','
                << (r.f1_a >= 0.0 ? format_double(r.f1_a) : "") << ','
                << (r.converged ? 1 : 0) << ',' << r.iters << ','
                << r.cycle_edges_removed;
        } else {
            out << ",,,,,,,,,,";
        }
        out << "\n";
    }
}

void write_timings_csv(const fs::path& path, const std::vector<TrialRecord>& rows,
                       const std::vector<double>& seconds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "method,seed,d,n,wall_seconds\n";
    for (size_t i = 0; i < rows.size(); ++i)
        out << rows[i].method << ',' << rows[i].seed << ',' << rows[i].d << ','
            << rows[i].n << ',' << format_double(seconds[i]) << "\n";
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

json summarize(const std::vector<TrialRecord>& rows) {
    struct Key {
        std::string method, family;
        int d;
        long n;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::vector<const TrialRecord*>> cells;
    for (const auto& r : rows)
        if (r.ok) cells[{r.method, r.noise_family, r.d, r.n}].push_back(&r);

    json out = json::array();
    for (const auto& [key, recs] : cells) {
        auto collect = [&](auto&& get) {
            std::vector<double> v;
            for (const auto* r : recs) v.push_back(get(*r));
            return v;
        };
        auto stats = [&](std::vector<double> v) {
            return json{{"median", quantile(v, 0.5)},
                        {"q25", quantile(v, 0.25)},
                        {"q75", quantile(v, 0.75)}};
        };
        json cell{{"method", key.method},
                  {"noise_family", key.family},
                  {"d", key.d},
                  {"n", key.n},
                  {"trials", recs.size()}};
        cell["shd"] = stats(collect([](const TrialRecord& r) {
            return static_cast<double>(r.metrics.shd);
        }));
        // SHD is reported raw in the records; the summary also carries the
        // per-node normalization.
        cell["shd_per_node"] = stats(collect([](const TrialRecord& r) {
            return static_cast<double>(r.metrics.shd) / r.d;
        }));
        cell["shd_c"] = stats(collect([](const TrialRecord& r) {
            return static_cast<double>(r.metrics.shd_c);
        }));
        cell["fdr"] = stats(collect([](const TrialRecord& r) { return r.metrics.fdr; }));
        cell["tpr"] = stats(collect([](const TrialRecord& r) { return r.metrics.tpr; }));
        cell["f1"] = stats(collect([](const TrialRecord& r) { return r.metrics.f1; }));
        cell["sid"] = stats(collect([](const TrialRecord& r) {
            return static_cast<double>(r.metrics.sid);
        }));
        cell["nmse"] = stats(collect([](const TrialRecord& r) { return r.metrics.nmse; }));
        bool any_lag = false;
        for (const auto* r : recs) any_lag |= r->f1_a >= 0.0;
        if (any_lag)
            cell["f1_a"] = stats(collect([](const TrialRecord& r) { return r.f1_a; }));
        out.push_back(std::move(cell));
    }
    return out;
}

}  // namespace dagsl
