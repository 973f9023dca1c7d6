#include "dagsl/sachs.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dagsl {

const std::vector<std::string>& sachs_proteins() {
    static const std::vector<std::string> names{
        "raf", "mek", "plcg", "pip2", "pip3", "erk",
        "akt", "pka", "pkc",  "p38",  "jnk"};
    return names;
}

BinaryDag sachs_truth() {
    // Consensus signaling network: 17 directed edges over 11 proteins.
    static const std::pair<const char*, const char*> kEdges[] = {
        {"pkc", "pka"}, {"pkc", "raf"}, {"pka", "raf"}, {"pkc", "mek"},
        {"pka", "mek"}, {"raf", "mek"}, {"mek", "erk"}, {"pka", "erk"},
        {"erk", "akt"}, {"pka", "akt"}, {"pkc", "p38"}, {"pka", "p38"},
        {"pkc", "jnk"}, {"pka", "jnk"}, {"plcg", "pip3"}, {"plcg", "pip2"},
        {"pip3", "pip2"}};
    const auto& names = sachs_proteins();
    auto index = [&](const std::string& n) {
        return static_cast<int>(
            std::find(names.begin(), names.end(), n) - names.begin());
    };
    BinaryDag g;
    g.d = static_cast<int>(names.size());
    for (const auto& [src, dst] : kEdges) g.edges.insert({index(src), index(dst)});
    return g;
}

namespace {

// Lowercase alphanumerics only: "p44/42" -> "p4442", "PIP2" -> "pip2".
std::string normalize(const std::string& raw) {
    std::string out;
    for (char c : raw)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

// The raw tables circulate with assay-specific column labels.
std::string canonical_name(const std::string& normalized) {
    if (normalized == "praf" || normalized == "raf") return "raf";
    if (normalized == "pmek" || normalized == "mek") return "mek";
    if (normalized == "plcg" || normalized == "plc" || normalized == "plcy")
        return "plcg";
    if (normalized == "pip2") return "pip2";
    if (normalized == "pip3") return "pip3";
    if (normalized == "p4442" || normalized == "erk" || normalized == "perk")
        return "erk";
    if (normalized == "pakts473" || normalized == "akt" || normalized == "pakt")
        return "akt";
    if (normalized == "pka") return "pka";
    if (normalized == "pkc") return "pkc";
    if (normalized == "p38") return "p38";
    if (normalized == "pjnk" || normalized == "jnk") return "jnk";
    return "";
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) cells.push_back(cell);
    return cells;
}

}  // namespace

SachsIngestion ingest_sachs_csv(const fs::path& raw_csv, bool standardize) {
    std::ifstream in(raw_csv);
    if (!in) throw std::runtime_error(raw_csv.string() + ": cannot open");

    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error(raw_csv.string() + ": empty file");
    const char sep = header.find('\t') != std::string::npos ? '\t' : ',';
    const auto raw_names = split(header, sep);

    const auto& canon = sachs_proteins();
    std::vector<int> col_of(canon.size(), -1);
    for (size_t c = 0; c < raw_names.size(); ++c) {
        const std::string name = canonical_name(normalize(raw_names[c]));
        if (name.empty()) continue;
        const auto it = std::find(canon.begin(), canon.end(), name);
        col_of[it - canon.begin()] = static_cast<int>(c);
    }
    std::string missing;
    for (size_t i = 0; i < canon.size(); ++i)
        if (col_of[i] < 0) missing += (missing.empty() ? "" : ", ") + canon[i];
    if (!missing.empty())
        throw std::runtime_error(raw_csv.string() +
                                 ": could not match required columns: " + missing);

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, sep);
        std::vector<double> row(canon.size());
        for (size_t i = 0; i < canon.size(); ++i) {
            if (static_cast<size_t>(col_of[i]) >= cells.size())
                throw std::runtime_error(raw_csv.string() + ": short row");
            row[i] = std::stod(cells[col_of[i]]);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(raw_csv.string() + ": no samples");

    const int d = static_cast<int>(canon.size());
    const long n = static_cast<long>(rows.size());
    Matrix x(d, n);
    for (long t = 0; t < n; ++t)
        for (int i = 0; i < d; ++i) x(i, t) = rows[t][i];

    // The SEM is zero-mean, so each variable is centered.
    for (int i = 0; i < d; ++i) {
        const double mean = x.row(i).mean();
        x.row(i).array() -= mean;
        if (standardize) {
            const double sd = std::sqrt(x.row(i).squaredNorm() / n);
            if (sd > 0.0) x.row(i) /= sd;
        }
    }

    SachsIngestion out;
    out.data = Dataset(std::move(x));
    out.truth = sachs_truth().adjacency();
    out.standardized = standardize;
    out.n = n;
    return out;
}

void export_sachs(const fs::path& dir, const SachsIngestion& ingestion) {
    fs::create_directories(dir);
    save_matrix_csv(dir / "data.csv", ingestion.data.X);
    save_edge_list_tsv(dir / "truth.tsv", ingestion.truth);
    nlohmann::json manifest{{"d", ingestion.data.d()},
                            {"n", ingestion.n},
                            {"proteins", sachs_proteins()},
                            {"centered", true},
                            {"standardized", ingestion.standardized},
                            {"truth_edges", sachs_truth().num_edges()}};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace dagsl
