#pragma once

#include <optional>
#include <set>
#include <utility>

#include "dagsl/common.hpp"

namespace dagsl {

// Edge-direction convention used throughout: W(i, j) != 0  <=>  edge i -> j,
// i.e. column j of W collects the weights of j's parents. Diagonals are
// structurally zero.

/// Unweighted DAG as an explicit edge set (ordered pairs i -> j).
struct BinaryDag {
    int d = 0;
    std::set<std::pair<int, int>> edges;

    bool has_edge(int i, int j) const { return edges.count({i, j}) > 0; }
    int num_edges() const { return static_cast<int>(edges.size()); }
    Matrix adjacency() const;

    /// Support of a weighted matrix: entries with |w| > tol become edges.
    static BinaryDag support_of(const Matrix& w, double tol = 0.0);
};

/// Completed partially directed acyclic graph. Undirected edges are stored
/// once with i < j.
struct Cpdag {
    int d = 0;
    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;

    bool operator==(const Cpdag&) const = default;
};

enum class WeightSign { mixed, nonneg };

/// Outcome of a topological sort attempt. When the graph is cyclic, `order`
/// is empty and `cycle` holds one directed cycle (v0 -> v1 -> ... -> v0).
struct TopoResult {
    std::vector<int> order;
    std::vector<int> cycle;
    bool ok() const { return cycle.empty(); }
};

/// Erdos-Renyi DAG: undirected G(d, p) with p = mean_degree/(d-1), every
/// edge oriented along a uniformly random node permutation.
BinaryDag random_er_dag(int d, double mean_degree, Rng& rng);

/// Scale-free DAG: Barabasi-Albert preferential attachment seeded with a
/// clique of attach_edges+1 nodes. Edges point from the newly attached node
/// to its (older) targets, so hubs accumulate in-links and the result is
/// acyclic by construction.
BinaryDag random_sf_dag(int d, int attach_edges, Rng& rng);

/// Uniform weights with magnitude in [low, high]; sign flipped with
/// probability 1/2 under WeightSign::mixed.
Matrix assign_weights(const BinaryDag& dag, double low, double high,
                      WeightSign sign, Rng& rng);

TopoResult topological_order(const Matrix& w);
TopoResult topological_order(const BinaryDag& g);

bool is_dag(const Matrix& w);
bool is_dag(const BinaryDag& g);

/// Exact number of labeled DAGs on d nodes, as a decimal string
/// (the count exceeds 64 bits near d = 13).
std::string count_dags(int d);

/// CPDAG of the Markov equivalence class of `dag`: skeleton + v-structures,
/// then Meek's orientation rules to closure. Throws cyclic_graph_error on
/// cyclic input.
Cpdag to_cpdag(const BinaryDag& dag);

/// Zero out entries with |w| <= tau.
Matrix threshold_edges(const Matrix& w, double tau);

}  // namespace dagsl
