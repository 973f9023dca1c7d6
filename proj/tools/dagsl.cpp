// dagsl command-line front end: synthetic data simulation, solver fits,
// evaluation, benchmark grids, and cell-signaling data ingestion.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

#include "dagsl/bench.hpp"
#include "dagsl/sachs.hpp"

namespace {

using namespace dagsl;
using nlohmann::json;

fs::path out_dir_or_default(const std::string& out) {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("DAGSL_OUT")) return env;
    return ".";
}

int cmd_simulate(const std::string& config_path, uint64_t seed,
                 const std::string& out) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error(config_path + ": cannot open");
    json doc = json::parse(in);
    // A simulate config is a grid document with single-valued d and n.
    if (!doc.contains("methods")) doc["methods"] = json::array({{{"name", "dagma-ols"}}});
    ExperimentGrid grid = parse_grid(doc);
    if (grid.d_list.size() != 1 || grid.n_list.size() != 1)
        throw std::runtime_error("simulate: config must pin a single d and n");

    const fs::path dir = out_dir_or_default(out);
    fs::create_directories(dir);
    SimulatedTrial sim = simulate_trial(grid, grid.d_list[0], grid.n_list[0], seed);

    save_edge_list_tsv(dir / "truth.tsv", sim.w_true);
    save_matrix_csv(dir / "weights.csv", sim.w_true);
    if (grid.kind == "iid")
        save_matrix_csv(dir / "data.csv", sim.data.X);
    else {
        save_matrix_csv(dir / "data.csv", sim.series.X);
        for (size_t t = 0; t < sim.lags_true.size(); ++t)
            save_matrix_csv(dir / ("lag_truth_" + std::to_string(t + 1) + ".csv"),
                            sim.lags_true[t]);
    }

    json manifest{{"seed", seed},
                  {"kind", grid.kind},
                  {"d", grid.d_list[0]},
                  {"n", grid.n_list[0]},
                  {"graph", {{"type", grid.graph_type}, {"mean_degree", grid.mean_degree}}},
                  {"noise",
                   {{"mode", grid.noise.ev ? "ev" : "nv"},
                    {"family", to_string(grid.noise.family)},
                    {"sigma2", grid.noise.sigma2},
                    {"var_range", {grid.noise.var_low, grid.noise.var_high}}}},
                  {"weights",
                   {{"low", grid.weight_low},
                    {"high", grid.weight_high},
                    {"sign", grid.weight_sign == WeightSign::mixed ? "mixed" : "nonneg"}}}};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "simulate: wrote " << (dir / "data.csv").string() << "\n";
    return 0;
}

int cmd_fit(const std::string& data_path, const std::string& method,
            const std::string& config_path, const std::string& out,
            double threshold_override) {
    FitConfig cfg =
        config_path.empty() ? FitConfig{} : load_fit_config(config_path);
    if (threshold_override >= 0.0) cfg.solver.edge_threshold = threshold_override;

    const fs::path dir = out_dir_or_default(out);
    Matrix x = load_matrix_csv(data_path);

    if (method == "nomad-svarm") {
        TimeSeries series{std::move(x), cfg.tau_max};
        Dataset proxy(series.X);
        const double s = cfg.s_nonneg > 0.0 ? cfg.s_nonneg : default_s_nonneg(proxy);
        SvarmFit fit = fit_nomad_svarm(series, cfg.tau_max, cfg.lambda, cfg.lambda_a,
                                       s, cfg.mom, cfg.solver.edge_threshold);
        export_svarm_fit(dir, fit);
        std::cout << "fit: wrote " << (dir / "W.csv").string() << "\n";
        return fit.converged ? 0 : 3;
    }

    Dataset data(std::move(x));
    FitResult fit;
    if (method == "colide-ev")
        fit = fit_colide(data, Variant::ev, cfg.lambda, cfg.schedule, cfg.solver);
    else if (method == "colide-nv")
        fit = fit_colide(data, Variant::nv, cfg.lambda, cfg.schedule, cfg.solver);
    else if (method == "dagma-ols")
        fit = fit_dagma_ols(data, cfg.lambda, cfg.schedule, cfg.solver);
    else if (method == "nomad") {
        const double s = cfg.s_nonneg > 0.0 ? cfg.s_nonneg : default_s_nonneg(data);
        fit = fit_nomad(data, cfg.lambda, s, cfg.mom, cfg.solver.edge_threshold);
    } else {
        throw CLI::ValidationError(
            "method must be one of colide-ev|colide-nv|dagma-ols|nomad|nomad-svarm");
    }
    export_fit(dir, fit);
    std::cout << "fit: wrote " << (dir / "weights.csv").string() << "\n";
    return 0;
}

int cmd_eval(const std::string& est_path, const std::string& truth_path,
             const std::string& out) {
    const Matrix est = load_weights_auto(est_path);
    const Matrix truth = load_weights_auto(truth_path);
    const MetricsReport report = evaluate(est, truth);
    const json doc = metrics_to_json(report);
    if (!out.empty()) {
        write_text_file(out, doc.dump(2) + "\n");
        std::cout << "eval: wrote " << out << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    return 0;
}

int cmd_bench_main(const std::string& grid_path, const std::string& out,
                   int workers) {
    const ExperimentGrid grid = load_grid(grid_path);
    const fs::path dir = out_dir_or_default(out);
    fs::create_directories(dir);
    BenchResult res = run_bench(grid, workers);
    write_records_csv(dir / "results.csv", res.records);
    write_timings_csv(dir / "timings.csv", res.records, res.wall_seconds);
    write_text_file(dir / "summary.json", summarize(res.records).dump(2) + "\n");
    long failures = 0;
    for (const auto& r : res.records) failures += r.ok ? 0 : 1;
    std::cout << "bench: " << res.records.size() << " rows, " << failures
              << " failures -> " << (dir / "results.csv").string() << "\n";
    return 0;
}

int cmd_sachs_main(const std::string& raw_path, const std::string& out,
                   bool standardize) {
    SachsIngestion ing = ingest_sachs_csv(raw_path, standardize);
    const fs::path dir = out_dir_or_default(out);
    export_sachs(dir, ing);
    std::cout << "sachs: " << ing.data.d() << " x " << ing.n << " -> "
              << (dir / "data.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG structure learning via continuous optimization"};
    app.require_subcommand(1);

    std::string config_path, data_path, method, out, est_path, truth_path,
        grid_path, raw_path;
    uint64_t seed = 0;
    int workers = 1;
    double threshold = -1.0;
    bool standardize = false;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic problem instance");
    sim->add_option("--config", config_path, "grid-point JSON spec")->required();
    sim->add_option("--seed", seed, "random seed");
    sim->add_option("--out", out, "output directory (default $DAGSL_OUT or .)");

    auto* fit = app.add_subcommand("fit", "Fit a DAG to a data CSV");
    fit->add_option("--data", data_path, "d x n data CSV")->required();
    fit->add_option("--method", method,
                    "colide-ev|colide-nv|dagma-ols|nomad|nomad-svarm")
        ->required();
    fit->add_option("--config", config_path, "fit config JSON");
    fit->add_option("--out", out, "output directory");
    fit->add_option("--threshold", threshold, "edge threshold override");

    auto* ev = app.add_subcommand("eval", "Compare an estimate against a truth graph");
    ev->add_option("--est", est_path, "estimate (.csv dense or .tsv edge list)")
        ->required();
    ev->add_option("--truth", truth_path, "ground truth (.csv or .tsv)")->required();
    ev->add_option("--out", out, "metrics JSON path (default: stdout)");

    auto* bench = app.add_subcommand("bench", "Run a benchmark grid");
    bench->add_option("--grid", grid_path, "grid JSON")->required();
    bench->add_option("--out", out, "output directory");
    bench->add_option("--workers", workers, "worker threads");

    auto* sachs = app.add_subcommand("sachs", "Ingest the cell-signaling dataset");
    sachs->add_option("--raw", raw_path, "raw csv/tsv with 11 named columns")
        ->required();
    sachs->add_option("--out", out, "output directory");
    sachs->add_flag("--standardize", standardize, "unit-variance scaling");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, seed, out);
        if (fit->parsed())
            return cmd_fit(data_path, method, config_path, out, threshold);
        if (ev->parsed()) return cmd_eval(est_path, truth_path, out);
        if (bench->parsed()) return cmd_bench_main(grid_path, out, workers);
        if (sachs->parsed()) return cmd_sachs_main(raw_path, out, standardize);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
