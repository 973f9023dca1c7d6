#include "dagsl/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dagsl {

namespace {

void check_same_d(const BinaryDag& a, const BinaryDag& b) {
    if (a.d != b.d)
        throw std::invalid_argument("metrics: graphs have different node counts");
}

// Pair state: 0 none, 1 i->j, 2 j->i (for i < j).
int pair_state(const BinaryDag& g, int i, int j) {
    if (g.has_edge(i, j)) return 1;
    if (g.has_edge(j, i)) return 2;
    return 0;
}

}  // namespace

long shd(const BinaryDag& est, const BinaryDag& truth) {
    check_same_d(est, truth);
    long dist = 0;
    for (int i = 0; i < est.d; ++i)
        for (int j = i + 1; j < est.d; ++j)
            if (pair_state(est, i, j) != pair_state(truth, i, j)) ++dist;
    return dist;
}

namespace {

// Pair state on a CPDAG: 0 none, 1 i->j, 2 j->i, 3 undirected (i < j).
int cpdag_pair_state(const Cpdag& g, int i, int j) {
    if (g.directed.count({i, j})) return 1;
    if (g.directed.count({j, i})) return 2;
    if (g.undirected.count({i, j})) return 3;
    return 0;
}

}  // namespace

long shd_c(const BinaryDag& est, const BinaryDag& truth) {
    check_same_d(est, truth);
    const Cpdag ce = to_cpdag(est);
    const Cpdag ct = to_cpdag(truth);
    long dist = 0;
    for (int i = 0; i < est.d; ++i)
        for (int j = i + 1; j < est.d; ++j)
            if (cpdag_pair_state(ce, i, j) != cpdag_pair_state(ct, i, j)) ++dist;
    return dist;
}

namespace {

long true_positives(const BinaryDag& est, const BinaryDag& truth) {
    long tp = 0;
    for (const auto& e : est.edges) tp += truth.edges.count(e) ? 1 : 0;
    return tp;
}

}  // namespace

double fdr(const BinaryDag& est, const BinaryDag& truth) {
    check_same_d(est, truth);
    const long detected = est.num_edges();
    if (detected == 0) return 0.0;
    return static_cast<double>(detected - true_positives(est, truth)) / detected;
}

double tpr(const BinaryDag& est, const BinaryDag& truth) {
    check_same_d(est, truth);
    const long total = truth.num_edges();
    if (total == 0) return 1.0;
    return static_cast<double>(true_positives(est, truth)) / total;
}

double f1(const BinaryDag& est, const BinaryDag& truth) {
    const double prec = 1.0 - fdr(est, truth);
    const double rec = tpr(est, truth);
    if (prec + rec == 0.0) return 0.0;
    return 2.0 * prec * rec / (prec + rec);
}

namespace {

struct Reach {
    int d;
    std::vector<uint8_t> desc;  // desc[i*d+j]: j reachable from i (directed)

    explicit Reach(const BinaryDag& g) : d(g.d), desc(g.d * g.d, 0) {
        for (int i = 0; i < d; ++i) {
            std::vector<int> stack{i};
            desc[i * d + i] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int u = 0; u < d; ++u)
                    if (g.has_edge(v, u) && !desc[i * d + u]) {
                        desc[i * d + u] = 1;
                        stack.push_back(u);
                    }
            }
        }
    }
    // j strictly reachable from i (directed path of length >= 1)?
    bool reaches(int i, int j) const { return i != j && desc[i * d + j]; }
};

}  // namespace

bool d_separated(const BinaryDag& g, int i, int j, const std::vector<int>& z) {
    const int d = g.d;
    // Ancestral closure of {i, j} ∪ Z.
    std::vector<uint8_t> anc(d, 0);
    std::vector<int> stack;
    auto push = [&](int v) {
        if (!anc[v]) {
            anc[v] = 1;
            stack.push_back(v);
        }
    };
    push(i);
    push(j);
    for (int v : z) push(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < d; ++u)
            if (g.has_edge(u, v)) push(u);
    }

    // Moralize the induced subgraph and drop directions.
    std::vector<uint8_t> und(d * d, 0);
    for (auto [a, b] : g.edges)
        if (anc[a] && anc[b]) und[a * d + b] = und[b * d + a] = 1;
    for (int k = 0; k < d; ++k) {
        if (!anc[k]) continue;
        std::vector<int> parents;
        for (int p = 0; p < d; ++p)
            if (anc[p] && g.has_edge(p, k)) parents.push_back(p);
        for (size_t a = 0; a < parents.size(); ++a)
            for (size_t b = a + 1; b < parents.size(); ++b)
                und[parents[a] * d + parents[b]] =
                    und[parents[b] * d + parents[a]] = 1;
    }

    // Remove Z, then test i-j connectivity.
    std::vector<uint8_t> blocked(d, 0);
    for (int v : z) blocked[v] = 1;
    if (blocked[i] || blocked[j]) return true;
    std::vector<uint8_t> seen(d, 0);
    stack.assign(1, i);
    seen[i] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == j) return false;
        for (int u = 0; u < d; ++u)
            if (anc[u] && !seen[u] && !blocked[u] && und[v * d + u]) {
                seen[u] = 1;
                stack.push_back(u);
            }
    }
    return true;
}

namespace {

// Is Z = pa_est(i) a valid adjustment set for (i, j) in `truth`?
// Adjustment criterion for a singleton intervention: (a) Z avoids every node
// on a proper causal path i -> ... -> j and their descendants; (b) Z
// d-separates i from j in the proper backdoor graph (truth with the first
// edge of every proper causal path removed).
bool valid_adjustment(const BinaryDag& truth, const Reach& reach, int i, int j,
                      const std::vector<int>& z) {
    const int d = truth.d;
    // cn: nodes other than i on a directed i -> ... -> j path.
    std::vector<uint8_t> cn(d, 0);
    for (int w = 0; w < d; ++w)
        if (w != i && reach.reaches(i, w) && (w == j || reach.reaches(w, j)))
            cn[w] = 1;

    for (int v : z) {
        if (cn[v]) return false;
        for (int w = 0; w < d; ++w)
            if (cn[w] && reach.reaches(w, v)) return false;
    }

    BinaryDag pbd = truth;
    for (int c = 0; c < d; ++c)
        if (cn[c]) pbd.edges.erase({i, c});
    return d_separated(pbd, i, j, z);
}

}  // namespace

long sid(const BinaryDag& est, const BinaryDag& truth) {
    check_same_d(est, truth);
    auto te = topological_order(est);
    if (!te.ok()) throw cyclic_graph_error(te.cycle);
    auto tt = topological_order(truth);
    if (!tt.ok()) throw cyclic_graph_error(tt.cycle);

    const int d = truth.d;
    const Reach reach(truth);
    long count = 0;
    for (int i = 0; i < d; ++i) {
        std::vector<int> pa;
        for (int p = 0; p < d; ++p)
            if (est.has_edge(p, i)) pa.push_back(p);
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            if (est.has_edge(j, i)) {
                // est claims no effect of i on j; wrong iff truth has a
                // directed path i -> ... -> j.
                if (reach.reaches(i, j)) ++count;
            } else {
                if (!valid_adjustment(truth, reach, i, j, pa)) ++count;
            }
        }
    }
    return count;
}

double nmse(const Matrix& w_est, const Matrix& w_true) {
    if (w_est.rows() != w_true.rows() || w_est.cols() != w_true.cols())
        throw std::invalid_argument("nmse: shape mismatch");
    const double denom = w_true.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("nmse: zero ground truth");
    return (w_est - w_true).squaredNorm() / denom;
}

MetricsReport evaluate(const Matrix& w_est, const Matrix& w_true) {
    const BinaryDag est = BinaryDag::support_of(w_est);
    const BinaryDag truth = BinaryDag::support_of(w_true);
    MetricsReport r;
    r.shd = shd(est, truth);
    r.shd_c = shd_c(est, truth);
    r.fdr = fdr(est, truth);
    r.tpr = tpr(est, truth);
    r.f1 = f1(est, truth);
    r.sid = sid(est, truth);
    r.nmse = nmse(w_est, w_true);
    return r;
}

}  // namespace dagsl
