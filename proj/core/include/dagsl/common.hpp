#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Thrown when an operation requiring a DAG receives a cyclic graph.
/// `cycle` holds one detected directed cycle as a node sequence
/// (v0 -> v1 -> ... -> v0, first node not repeated).
class cyclic_graph_error : public std::runtime_error {
public:
    explicit cyclic_graph_error(std::vector<int> cycle_nodes)
        : std::runtime_error("graph contains a directed cycle of length " +
                             std::to_string(cycle_nodes.size())),
          cycle(std::move(cycle_nodes)) {}
    std::vector<int> cycle;
};

/// Unstable time-series system (companion spectral radius >= 1).
class stability_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed configuration document; `keys` lists the offending entries.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& msg, std::vector<std::string> offending)
        : std::runtime_error(msg + " [keys: " + join(offending) + "]"),
          keys(std::move(offending)) {}
    std::vector<std::string> keys;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
        return out;
    }
};

/// Solver left the domain of its acyclicity function and backtracking
/// could not recover.
class domain_unrecoverable_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Matrix sign_matrix(const Matrix& w) {
    return w.unaryExpr([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

}  // namespace dagsl
