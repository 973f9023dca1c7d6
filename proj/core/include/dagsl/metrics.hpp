#pragma once

#include "dagsl/graph.hpp"

namespace dagsl {

struct MetricsReport {
    long shd = 0;
    long shd_c = 0;
    double fdr = 0.0;
    double tpr = 0.0;
    double f1 = 0.0;
    long sid = 0;
    double nmse = 0.0;
};

/// Structural Hamming distance over ordered edge sets: per node pair,
/// addition/deletion and reversal each count 1.
long shd(const BinaryDag& est, const BinaryDag& truth);

/// SHD between the CPDAGs of the two (acyclic) inputs; a directed-vs-
/// undirected mismatch on the same skeleton pair counts 1.
long shd_c(const BinaryDag& est, const BinaryDag& truth);

/// A detected edge is correct iff present in truth with matching direction.
/// fdr = 0 when nothing is detected; tpr = 1 when truth is empty; f1 = 0
/// when precision + recall = 0.
double fdr(const BinaryDag& est, const BinaryDag& truth);
double tpr(const BinaryDag& est, const BinaryDag& truth);
double f1(const BinaryDag& est, const BinaryDag& truth);

/// Structural intervention distance (DAG-to-DAG variant): counts ordered
/// pairs (i, j) whose intervention distribution, inferred from est by
/// parent adjustment, is not valid in truth. Throws cyclic_graph_error on
/// cyclic input.
long sid(const BinaryDag& est, const BinaryDag& truth);

/// ||W_est - W_true||_F^2 / ||W_true||_F^2; throws on zero truth.
double nmse(const Matrix& w_est, const Matrix& w_true);

/// Full report for a weighted estimate against a weighted ground truth;
/// supports are taken at exact nonzero.
MetricsReport evaluate(const Matrix& w_est, const Matrix& w_true);

/// d-separation of i and j given Z in a DAG, by the ancestral moral graph
/// construction. Exposed for the SID machinery and its tests.
bool d_separated(const BinaryDag& g, int i, int j, const std::vector<int>& z);

}  // namespace dagsl
