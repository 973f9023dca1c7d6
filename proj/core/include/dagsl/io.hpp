#pragma once

#include <nlohmann/json_fwd.hpp>

#include <filesystem>

#include "dagsl/colide.hpp"
#include "dagsl/metrics.hpp"
#include "dagsl/nomad.hpp"

namespace dagsl {

namespace fs = std::filesystem;

/// Edge-list TSV: header line `# d=<n>`, then `src<TAB>dst<TAB>weight` with
/// 0-indexed nodes.
void save_edge_list_tsv(const fs::path& path, const Matrix& w);
Matrix load_edge_list_tsv(const fs::path& path);

/// Dense matrix CSV, no header; used for d x d weights and d x n data alike.
void save_matrix_csv(const fs::path& path, const Matrix& m);
Matrix load_matrix_csv(const fs::path& path);

/// Either format, decided by extension (.tsv edge list, .csv dense).
Matrix load_weights_auto(const fs::path& path);

/// Shortest round-trip decimal formatting, stable across runs.
std::string format_double(double x);

nlohmann::json metrics_to_json(const MetricsReport& r);
nlohmann::json fit_to_json(const FitResult& r);

/// weights.csv + weights_raw.csv + fit.json under `dir`.
void export_fit(const fs::path& dir, const FitResult& r);

/// W.csv, A_1.csv ... A_tau.csv + manifest.json under `dir`.
void export_svarm_fit(const fs::path& dir, const SvarmFit& r);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& content);

}  // namespace dagsl
