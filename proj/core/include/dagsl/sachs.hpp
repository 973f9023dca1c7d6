#pragma once

#include "dagsl/io.hpp"
#include "dagsl/sem.hpp"

namespace dagsl {

/// Canonical protein order used for the cell-signaling benchmark:
/// raf, mek, plcg, pip2, pip3, erk, akt, pka, pkc, p38, jnk.
const std::vector<std::string>& sachs_proteins();

/// The 17-edge consensus ground-truth network over the canonical order.
BinaryDag sachs_truth();

struct SachsIngestion {
    Dataset data;          // 11 x n, column order canonicalized, centered
    Matrix truth;          // 11 x 11 binary adjacency
    bool standardized = false;
    long n = 0;
};

/// Reads the raw flow-cytometry table (one header row naming the 11
/// measured proteins in any order, one row per cell), maps the columns to
/// the canonical protein list, transposes to d x n and centers each
/// variable; optional unit-variance standardization. Throws on column
/// mismatch, naming the expected headers.
SachsIngestion ingest_sachs_csv(const fs::path& raw_csv, bool standardize);

/// data.csv (d x n), truth.tsv (17 edges), manifest.json under `dir`.
void export_sachs(const fs::path& dir, const SachsIngestion& ingestion);

}  // namespace dagsl
