#include "dagsl/graph.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <deque>
#include <numeric>

namespace dagsl {

Matrix BinaryDag::adjacency() const {
    Matrix a = Matrix::Zero(d, d);
    for (auto [i, j] : edges) a(i, j) = 1.0;
    return a;
}

BinaryDag BinaryDag::support_of(const Matrix& w, double tol) {
    BinaryDag g;
    g.d = static_cast<int>(w.rows());
    for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j)
            if (i != j && std::abs(w(i, j)) > tol) g.edges.insert({i, j});
    return g;
}

BinaryDag random_er_dag(int d, double mean_degree, Rng& rng) {
    if (d < 2) throw std::invalid_argument("random_er_dag: d must be >= 2");
    if (mean_degree < 0.0 || mean_degree >= d)
        throw std::invalid_argument("random_er_dag: need 0 <= mean_degree < d");
    const double p = std::min(1.0, mean_degree / static_cast<double>(d - 1));

    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pos(d);
    for (int k = 0; k < d; ++k) pos[perm[k]] = k;

    std::bernoulli_distribution coin(p);
    BinaryDag g;
    g.d = d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (p > 0.0 && coin(rng)) {
                if (pos[i] < pos[j])
                    g.edges.insert({i, j});
                else
                    g.edges.insert({j, i});
            }
    return g;
}

BinaryDag random_sf_dag(int d, int attach_edges, Rng& rng) {
    if (attach_edges < 1 || attach_edges >= d)
        throw std::invalid_argument("random_sf_dag: need 1 <= attach_edges < d");
    const int m = attach_edges;
    BinaryDag g;
    g.d = d;

    // Endpoint urn: each undirected link contributes both endpoints, so
    // sampling the urn is degree-proportional sampling.
    std::vector<int> urn;
    for (int v = 1; v <= m; ++v)
        for (int u = 0; u < v; ++u) {
            g.edges.insert({v, u});
            urn.push_back(u);
            urn.push_back(v);
        }

    for (int t = m + 1; t < d; ++t) {
        std::set<int> targets;
        std::uniform_int_distribution<size_t> pick(0, urn.size() - 1);
        while (static_cast<int>(targets.size()) < m) targets.insert(urn[pick(rng)]);
        for (int u : targets) {
            g.edges.insert({t, u});
            urn.push_back(u);
            urn.push_back(t);
        }
    }
    return g;
}

Matrix assign_weights(const BinaryDag& dag, double low, double high,
                      WeightSign sign, Rng& rng) {
    if (!(0.0 < low && low < high))
        throw std::invalid_argument("assign_weights: need 0 < low < high");
    std::uniform_real_distribution<double> mag(low, high);
    std::bernoulli_distribution flip(0.5);
    Matrix w = Matrix::Zero(dag.d, dag.d);
    for (auto [i, j] : dag.edges) {
        double v = mag(rng);
        if (sign == WeightSign::mixed && flip(rng)) v = -v;
        w(i, j) = v;
    }
    return w;
}

namespace {

TopoResult kahn_sort(int d, const std::vector<std::vector<int>>& out,
                     std::vector<int> indeg) {
    TopoResult res;
    std::deque<int> ready;
    for (int v = 0; v < d; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        res.order.push_back(v);
        for (int u : out[v])
            if (--indeg[u] == 0) ready.push_back(u);
    }
    if (static_cast<int>(res.order.size()) == d) return res;

    // Unprocessed nodes (indeg still > 0) each keep at least one unprocessed
    // predecessor, so a backward walk must revisit a node and close a cycle.
    res.order.clear();
    std::vector<std::vector<int>> pred(d);
    for (int v = 0; v < d; ++v)
        for (int u : out[v])
            if (indeg[v] > 0 && indeg[u] > 0) pred[u].push_back(v);
    std::vector<int> pos_on_stack(d, -1);
    std::vector<int> stack;
    int v = 0;
    while (indeg[v] == 0) ++v;
    while (pos_on_stack[v] < 0) {
        pos_on_stack[v] = static_cast<int>(stack.size());
        stack.push_back(v);
        v = pred[v].front();
    }
    res.cycle.assign(stack.begin() + pos_on_stack[v], stack.end());
    std::reverse(res.cycle.begin(), res.cycle.end());
    return res;
}

}  // namespace

TopoResult topological_order(const Matrix& w) {
    const int d = static_cast<int>(w.rows());
    std::vector<std::vector<int>> out(d);
    std::vector<int> indeg(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && w(i, j) != 0.0) {
                out[i].push_back(j);
                ++indeg[j];
            }
    return kahn_sort(d, out, std::move(indeg));
}

TopoResult topological_order(const BinaryDag& g) {
    std::vector<std::vector<int>> out(g.d);
    std::vector<int> indeg(g.d, 0);
    for (auto [i, j] : g.edges) {
        out[i].push_back(j);
        ++indeg[j];
    }
    return kahn_sort(g.d, out, std::move(indeg));
}

bool is_dag(const Matrix& w) { return topological_order(w).ok(); }
bool is_dag(const BinaryDag& g) { return topological_order(g).ok(); }

std::string count_dags(int d) {
    if (d < 0) throw std::invalid_argument("count_dags: d must be >= 0");
    std::vector<mpz_class> a(d + 1);
    a[0] = 1;
    for (int k = 1; k <= d; ++k) {
        mpz_class total = 0;
        for (int i = 1; i <= k; ++i) {
            mpz_class term;
            mpz_bin_uiui(term.get_mpz_t(), k, i);
            mpz_class pow2;
            mpz_ui_pow_ui(pow2.get_mpz_t(), 2,
                          static_cast<unsigned long>(i) * (k - i));
            term *= pow2;
            term *= a[k - i];
            if (i % 2 == 1)
                total += term;
            else
                total -= term;
        }
        a[k] = total;
    }
    return a[d].get_str();
}

namespace {

struct Pattern {
    int d;
    std::vector<uint8_t> dir;  // dir[i*d+j]: compelled i -> j
    std::vector<uint8_t> und;  // und[i*d+j] == und[j*d+i]: undecided edge
    bool adj(int i, int j) const {
        return dir[i * d + j] || dir[j * d + i] || und[i * d + j];
    }
    void orient(int i, int j) {
        dir[i * d + j] = 1;
        und[i * d + j] = und[j * d + i] = 0;
    }
};

// Meek's orientation rules, applied until fixpoint. Starting from the
// pattern (skeleton + v-structures) only R1-R3 can fire; R4 is included for
// completeness since it is sound regardless.
void meek_closure(Pattern& p) {
    const int d = p.d;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (!p.und[a * d + b]) continue;
                bool orient = false;
                // R1: c -> a, a - b, c and b nonadjacent  =>  a -> b
                for (int c = 0; c < d && !orient; ++c)
                    if (p.dir[c * d + a] && !p.adj(c, b)) orient = true;
                // R2: a -> c -> b and a - b  =>  a -> b
                for (int c = 0; c < d && !orient; ++c)
                    if (p.dir[a * d + c] && p.dir[c * d + b]) orient = true;
                // R3: a - c -> b, a - e -> b, c and e nonadjacent  =>  a -> b
                for (int c = 0; c < d && !orient; ++c) {
                    if (!(p.und[a * d + c] && p.dir[c * d + b])) continue;
                    for (int e = c + 1; e < d && !orient; ++e)
                        if (p.und[a * d + e] && p.dir[e * d + b] && !p.adj(c, e))
                            orient = true;
                }
                // R4: a - c, c -> e, e -> b, c and b nonadjacent  =>  a -> b
                for (int c = 0; c < d && !orient; ++c) {
                    if (!p.und[a * d + c]) continue;
                    for (int e = 0; e < d && !orient; ++e)
                        if (p.dir[c * d + e] && p.dir[e * d + b] && !p.adj(c, b))
                            orient = true;
                }
                if (orient) {
                    p.orient(a, b);
                    changed = true;
                }
            }
    }
}

}  // namespace

Cpdag to_cpdag(const BinaryDag& dag) {
    auto topo = topological_order(dag);
    if (!topo.ok()) throw cyclic_graph_error(topo.cycle);
    const int d = dag.d;

    Pattern p{d, std::vector<uint8_t>(d * d, 0), std::vector<uint8_t>(d * d, 0)};
    for (auto [i, j] : dag.edges) p.und[i * d + j] = p.und[j * d + i] = 1;

    // v-structures i -> k <- j with i, j nonadjacent keep their directions.
    for (int k = 0; k < d; ++k) {
        std::vector<int> parents;
        for (int i = 0; i < d; ++i)
            if (dag.has_edge(i, k)) parents.push_back(i);
        for (size_t a = 0; a < parents.size(); ++a)
            for (size_t b = a + 1; b < parents.size(); ++b) {
                int i = parents[a], j = parents[b];
                if (!dag.has_edge(i, j) && !dag.has_edge(j, i)) {
                    p.orient(i, k);
                    p.orient(j, k);
                }
            }
    }

    meek_closure(p);

    Cpdag out;
    out.d = d;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (p.dir[i * d + j]) out.directed.insert({i, j});
            if (i < j && p.und[i * d + j]) out.undirected.insert({i, j});
        }
    return out;
}

Matrix threshold_edges(const Matrix& w, double tau) {
    if (tau < 0.0) throw std::invalid_argument("threshold_edges: tau must be >= 0");
    return w.unaryExpr([tau](double x) { return std::abs(x) <= tau ? 0.0 : x; });
}

}  // namespace dagsl
