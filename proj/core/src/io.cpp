#include "dagsl/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dagsl {

using nlohmann::json;

namespace {

[[noreturn]] void io_fail(const fs::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) io_fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) io_fail(path, "cannot open for reading");
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    // %.17g round-trips doubles and never depends on locale here.
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void save_edge_list_tsv(const fs::path& path, const Matrix& w) {
    auto out = open_out(path);
    out << "# d=" << w.rows() << "\n";
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            if (i != j && w(i, j) != 0.0)
                out << i << '\t' << j << '\t' << format_double(w(i, j)) << "\n";
}

Matrix load_edge_list_tsv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) io_fail(path, "empty file");
    int d = -1;
    if (std::sscanf(line.c_str(), "# d=%d", &d) != 1 || d < 1)
        io_fail(path, "expected header line '# d=<n>'");
    Matrix w = Matrix::Zero(d, d);
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        int i, j;
        double v;
        if (!(row >> i >> j >> v))
            io_fail(path, "bad edge at line " + std::to_string(lineno));
        if (i < 0 || j < 0 || i >= d || j >= d)
            io_fail(path, "node index out of range at line " + std::to_string(lineno));
        w(i, j) = v;
    }
    return w;
}

void save_matrix_csv(const fs::path& path, const Matrix& m) {
    auto out = open_out(path);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

Matrix load_matrix_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            io_fail(path, "ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) io_fail(path, "empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

Matrix load_weights_auto(const fs::path& path) {
    if (path.extension() == ".tsv") return load_edge_list_tsv(path);
    return load_matrix_csv(path);
}

json metrics_to_json(const MetricsReport& r) {
    return json{{"shd", r.shd},   {"shd_c", r.shd_c}, {"fdr", r.fdr},
                {"tpr", r.tpr},   {"f1", r.f1},       {"sid", r.sid},
                {"nmse", r.nmse}};
}

namespace {

const char* stop_name(StopReason s) {
    switch (s) {
        case StopReason::cap: return "cap";
        case StopReason::w_tol: return "w_tol";
        case StopReason::obj_plateau: return "obj_plateau";
    }
    return "?";
}

}  // namespace

json fit_to_json(const FitResult& r) {
    json stages = json::array();
    for (const auto& tr : r.trace) {
        json st{{"mu", tr.mu},
                {"s", tr.s},
                {"iters", tr.iters},
                {"objective", tr.objective},
                {"h_value", tr.h_value},
                {"stop", stop_name(tr.stop)}};
        if (tr.alpha != 0.0 || tr.penalty_c != 0.0) {
            st["alpha"] = tr.alpha;
            st["c"] = tr.penalty_c;
        }
        stages.push_back(std::move(st));
    }
    json out{{"stages", std::move(stages)},
             {"converged", r.converged},
             {"cycle_edges_removed", r.cycle_edges_removed}};
    if (r.noise.kind == NoiseKind::ev) {
        out["sigma"] = r.noise.sigma;
        out["sigma0"] = r.noise.floor_ev;
    } else if (r.noise.kind == NoiseKind::nv) {
        out["sigmas"] = std::vector<double>(
            r.noise.sigmas.data(), r.noise.sigmas.data() + r.noise.sigmas.size());
        out["sigma0"] = std::vector<double>(
            r.noise.floor_nv.data(),
            r.noise.floor_nv.data() + r.noise.floor_nv.size());
    }
    return out;
}

void export_fit(const fs::path& dir, const FitResult& r) {
    fs::create_directories(dir);
    save_matrix_csv(dir / "weights.csv", r.W);
    save_matrix_csv(dir / "weights_raw.csv", r.W_raw);
    write_text_file(dir / "fit.json", fit_to_json(r).dump(2) + "\n");
}

void export_svarm_fit(const fs::path& dir, const SvarmFit& r) {
    fs::create_directories(dir);
    save_matrix_csv(dir / "W.csv", r.W);
    save_matrix_csv(dir / "W_raw.csv", r.W_raw);
    json manifest{{"tau_max", r.lags.size()},
                  {"converged", r.converged},
                  {"cycle_edges_removed", r.cycle_edges_removed},
                  {"matrices", json::array({"W.csv"})}};
    for (size_t t = 0; t < r.lags.size(); ++t) {
        const std::string name = "A_" + std::to_string(t + 1) + ".csv";
        save_matrix_csv(dir / name, r.lags[t]);
        manifest["matrices"].push_back(name);
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string read_text_file(const fs::path& path) {
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

}  // namespace dagsl
