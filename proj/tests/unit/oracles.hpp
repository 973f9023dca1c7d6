// Test-only oracles, independent of the implementation paths they check:
// exhaustive DAG enumeration, brute-force Markov-equivalence grouping,
// path-enumeration d-separation / intervention-distance, and central finite
// differences.
#pragma once

#include <functional>
#include <map>

#include "dagsl/graph.hpp"

namespace oracles {

using dagsl::BinaryDag;
using dagsl::Matrix;

/// All DAGs on d labeled nodes, by filtering every digraph over the
/// d(d-1) ordered pairs (d <= 4 intended).
std::vector<BinaryDag> enumerate_dags(int d);

/// Every digraph (cyclic or not) on d nodes; used for counting cross-checks.
long count_all_digraphs_brute_force(int d);

/// MEC key: (skeleton, v-structures), both as canonical strings.
std::string mec_key(const BinaryDag& g);

/// Groups DAGs by MEC and builds each class representative the slow way:
/// an edge is directed in the oracle CPDAG iff every member agrees on it.
struct MecClass {
    std::vector<BinaryDag> members;
    dagsl::Cpdag cpdag;
};
std::map<std::string, MecClass> group_by_mec(const std::vector<BinaryDag>& dags);

/// d-separation by explicit enumeration of all vertex-distinct paths with
/// the textbook collider rule.
bool d_separated_paths(const BinaryDag& g, int i, int j, const std::vector<int>& z);

/// Structural intervention distance by brute force: the adjustment
/// criterion checked per ordered pair with path-enumeration d-separation.
long sid_brute_force(const BinaryDag& est, const BinaryDag& truth);

/// Central finite-difference gradient of f at w (step h), entrywise, with
/// the diagonal fixed at zero.
Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& w,
                   double h = 1e-5);

/// Relative disagreement ||a - b||_F / max(1, ||b||_F).
double rel_error(const Matrix& a, const Matrix& b);

}  // namespace oracles
