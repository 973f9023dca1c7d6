#pragma once

#include <nlohmann/json_fwd.hpp>

#include "dagsl/config.hpp"
#include "dagsl/io.hpp"

namespace dagsl {

struct NoiseGridSpec {
    bool ev = true;
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma2 = 1.0;                 // ev
    double var_low = 0.5, var_high = 10; // nv: per-node variances ~ U[lo, hi]
};

struct MethodSpec {
    std::string name;  // colide-ev | colide-nv | dagma-ols | nomad |
                       // nomad-svarm | svarm-ols
    FitConfig config;
};

/// One benchmark campaign: the cartesian product of d_list x n_list x seeds,
/// each cell simulated once and fitted by every method.
struct ExperimentGrid {
    std::string kind = "iid";  // iid | svarm
    std::string graph_type = "er";
    double mean_degree = 4.0;
    std::vector<int> d_list{20};
    std::vector<long> n_list{1000};  // t_max for svarm grids
    int tau_max = 2;
    double lag_mean_degree = 2.0;
    long burn_in = 200;
    NoiseGridSpec noise;
    double weight_low = 0.5, weight_high = 2.0;
    WeightSign weight_sign = WeightSign::mixed;
    double lag_threshold = 0.1;  // support threshold for F1 on lag matrices
    std::vector<MethodSpec> methods;
    std::vector<uint64_t> seeds{1};
};

ExperimentGrid parse_grid(const nlohmann::json& doc);
ExperimentGrid load_grid(const fs::path& path);

struct TrialRecord {
    // Grid coordinates.
    std::string graph_type;
    double mean_degree = 0;
    int d = 0;
    long n = 0;
    std::string kind;
    std::string noise_mode;
    std::string noise_family;
    double sigma2 = 0;
    double var_low = 0, var_high = 0;
    double weight_low = 0, weight_high = 0;
    std::string weight_sign;
    std::string method;
    uint64_t seed = 0;
    // Outcome.
    bool ok = true;
    std::string error;
    MetricsReport metrics;
    double f1_a = -1.0;  // lag-support F1, svarm methods only
    bool converged = false;
    long iters = 0;
    int cycle_edges_removed = 0;
};

struct BenchResult {
    std::vector<TrialRecord> records;          // deterministic order
    std::vector<double> wall_seconds;          // parallel-timing sidecar
};

/// Runs every (grid point x seed) trial across `workers` threads
/// (work-stealing at trial granularity; each trial owns its seed so results
/// are bit-identical for any worker count). Per-trial failures are recorded
/// in the row and the run continues.
BenchResult run_bench(const ExperimentGrid& grid, int workers);

/// results.csv with a `# schema=1` header comment; deterministic fields only.
void write_records_csv(const fs::path& path, const std::vector<TrialRecord>& rows);

/// timings.csv sidecar (non-deterministic wall-clock seconds per row).
void write_timings_csv(const fs::path& path, const std::vector<TrialRecord>& rows,
                       const std::vector<double>& seconds);

/// Per-(method, d, n, noise family) medians and 25th/75th percentiles.
nlohmann::json summarize(const std::vector<TrialRecord>& rows);

/// Everything a single simulated problem instance needs; exposed so the CLI
/// `simulate` subcommand and the harness share one generator.
struct SimulatedTrial {
    Matrix w_true;
    std::vector<Matrix> lags_true;  // svarm only
    Dataset data;                   // iid only
    TimeSeries series;              // svarm only
    NoiseSpec noise;
};

SimulatedTrial simulate_trial(const ExperimentGrid& grid, int d, long n,
                              uint64_t seed);

/// Linear-interpolation quantile of an unsorted sample (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace dagsl
