#include "dagsl/colide.hpp"

#include "dagsl/graph.hpp"

#include <cmath>

namespace dagsl {

Schedule default_schedule() {
    return {{1.0, 1.0, 20000}, {0.1, 0.9, 20000}, {0.01, 0.8, 20000},
            {0.001, 0.7, 70000}};
}

void validate_schedule(const Schedule& schedule) {
    if (schedule.empty()) throw std::invalid_argument("schedule: empty");
    for (size_t k = 0; k < schedule.size(); ++k) {
        const auto& st = schedule[k];
        if (!(st.mu > 0.0)) throw std::invalid_argument("schedule: mu must be > 0");
        if (!(st.s > 0.0)) throw std::invalid_argument("schedule: s must be > 0");
        if (st.t_max <= 0) throw std::invalid_argument("schedule: t_max must be > 0");
        if (k > 0 && !(st.mu < schedule[k - 1].mu))
            throw std::invalid_argument("schedule: mu must be strictly decreasing");
    }
}

Matrix threshold_and_break_cycles(const Matrix& w_raw, double threshold,
                                  int* removed_edges) {
    Matrix w = threshold_edges(w_raw, threshold);
    int removed = 0;
    for (;;) {
        auto topo = topological_order(w);
        if (topo.ok()) break;
        // Drop the weakest edge on the detected cycle.
        const auto& cyc = topo.cycle;
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < cyc.size(); ++k) {
            int i = cyc[k], j = cyc[(k + 1) % cyc.size()];
            if (std::abs(w(i, j)) < best) {
                best = std::abs(w(i, j));
                bi = i;
                bj = j;
            }
        }
        w(bi, bj) = 0.0;
        ++removed;
    }
    if (removed_edges) *removed_edges = removed;
    return w;
}

namespace {

enum class ScoreKind { colide_ev, colide_nv, ols };

struct CentralPathProblem {
    const Dataset& data;
    ScoreKind kind;
    double lambda;

    // Concomitant state.
    double sigma0 = 0.0;
    Vector sigma0v;
    double sigma = 0.0;
    Vector sigmas;

    void init() {
        const int d = data.d();
        if (kind == ScoreKind::colide_ev) {
            sigma0 = sigma0_ev(data);
            sigma = std::max(sigma0 * 100.0, 1e-12);
        } else if (kind == ScoreKind::colide_nv) {
            sigma0v = sigma0_nv(data);
            sigmas = (sigma0v * 100.0).cwiseMax(1e-12);
        }
    }

    bool degenerate_floor() const {
        if (kind == ScoreKind::colide_ev) return sigma0 <= 0.0;
        if (kind == ScoreKind::colide_nv) return (sigma0v.array() <= 0.0).any();
        return false;
    }

    ScoreEval eval(const Matrix& w) const {
        switch (kind) {
            case ScoreKind::colide_ev: return score_colide_ev(w, sigma, data, lambda);
            case ScoreKind::colide_nv: return score_colide_nv(w, sigmas, data, lambda);
            case ScoreKind::ols: return score_ols_l1(w, data, lambda);
        }
        return {};
    }

    void update_noise(const Matrix& w) {
        if (kind == ScoreKind::colide_ev)
            sigma = sigma_hat_ev(w, data, sigma0);
        else if (kind == ScoreKind::colide_nv)
            sigmas = sigma_hat_nv(w, data, sigma0v);
    }

    std::vector<double> noise_snapshot() const {
        if (kind == ScoreKind::colide_ev) return {sigma};
        if (kind == ScoreKind::colide_nv)
            return {sigmas.data(), sigmas.data() + sigmas.size()};
        return {};
    }
};

FitResult run_central_path(const Dataset& data, ScoreKind kind, double lambda,
                           const Schedule& schedule, const SolverConfig& cfg) {
    validate_schedule(schedule);
    if (data.n() < 1) throw std::invalid_argument("fit: empty dataset");
    const int d = data.d();

    CentralPathProblem prob{data, kind, lambda};
    prob.init();

    FitResult res;
    res.degenerate_floor = prob.degenerate_floor();
    Matrix w = Matrix::Zero(d, d);

    for (const Stage& stage : schedule) {
        AdamState adam;  // fresh optimizer per stage, DAGMA-lineage practice
        auto h_cur = h_ldet(w, stage.s);
        if (!h_cur)
            throw domain_unrecoverable_error(
                "stage start outside h_ldet domain (s too small for iterate)");

        StageTrace tr;
        tr.mu = stage.mu;
        tr.s = stage.s;
        tr.stop = StopReason::cap;
        double obj_at_check = std::numeric_limits<double>::infinity();

        long t = 0;
        while (t < stage.t_max) {
            ++t;
            const ScoreEval se = prob.eval(w);
            Matrix grad = stage.mu * (se.grad_w + lambda * sign_matrix(w)) +
                          h_cur->gradient;
            grad.diagonal().setZero();

            Matrix w_next = adam_step(w, grad, adam, cfg.adam);
            w_next.diagonal().setZero();

            auto h_next = h_ldet(w_next, stage.s);
            int halvings = 0;
            while (!h_next) {
                if (++halvings > cfg.backtrack_max)
                    throw domain_unrecoverable_error(
                        "h_ldet domain not recovered after " +
                        std::to_string(cfg.backtrack_max) + " halvings");
                w_next = 0.5 * (w + w_next);
                h_next = h_ldet(w_next, stage.s);
            }

            const double rel_change =
                (w_next - w).norm() / std::max(1.0, w.norm());
            w = std::move(w_next);
            h_cur = std::move(h_next);
            prob.update_noise(w);

            if (rel_change < cfg.w_tol) {
                tr.stop = StopReason::w_tol;
                break;
            }
            if (cfg.obj_stop && t % cfg.obj_check_every == 0) {
                const double objective =
                    stage.mu * prob.eval(w).value + h_cur->value;
                if (obj_at_check - objective <
                    cfg.obj_tol * std::max(1.0, std::abs(obj_at_check))) {
                    tr.stop = StopReason::obj_plateau;
                    break;
                }
                obj_at_check = objective;
            }
        }

        tr.iters = t;
        tr.objective = stage.mu * prob.eval(w).value + h_cur->value;
        tr.h_value = h_cur->value;
        tr.sigma = prob.noise_snapshot();
        res.trace.push_back(std::move(tr));
    }

    res.converged = true;
    for (const auto& tr : res.trace)
        if (tr.stop == StopReason::cap) res.converged = false;

    res.W_raw = w;
    res.W = threshold_and_break_cycles(w, cfg.edge_threshold,
                                       &res.cycle_edges_removed);

    if (kind == ScoreKind::colide_ev) {
        res.noise.kind = NoiseKind::ev;
        res.noise.sigma = prob.sigma;
        res.noise.floor_ev = prob.sigma0;
    } else if (kind == ScoreKind::colide_nv) {
        res.noise.kind = NoiseKind::nv;
        res.noise.sigmas = prob.sigmas;
        res.noise.floor_nv = prob.sigma0v;
    }
    return res;
}

}  // namespace

FitResult fit_colide(const Dataset& data, Variant variant, double lambda,
                     const Schedule& schedule, const SolverConfig& cfg) {
    return run_central_path(
        data, variant == Variant::ev ? ScoreKind::colide_ev : ScoreKind::colide_nv,
        lambda, schedule, cfg);
}

FitResult fit_dagma_ols(const Dataset& data, double lambda,
                        const Schedule& schedule, const SolverConfig& cfg) {
    return run_central_path(data, ScoreKind::ols, lambda, schedule, cfg);
}

OnlineResult fit_online(const std::vector<Matrix>& batches, double lambda,
                        const Schedule& schedule, const OnlineConfig& cfg) {
    validate_schedule(schedule);
    if (batches.empty()) throw std::invalid_argument("fit_online: no batches");
    const int d = static_cast<int>(batches.front().rows());
    const long n_b = batches.front().cols();
    for (const auto& b : batches)
        if (b.rows() != d || b.cols() != n_b)
            throw std::invalid_argument("fit_online: batch shape mismatch");

    // sigma_0 from the first batch (all the information available at t=1).
    const Dataset first(batches.front());
    const double sigma0 = sigma0_ev(first);

    OnlineResult out;
    Matrix w = Matrix::Zero(d, d);
    Matrix run_cov = Matrix::Zero(d, d);
    double sigma = std::max(sigma0 * 100.0, 1e-12);
    double e_stat = 0.0;
    long t_global = 0, t_stat = 0;
    size_t next_batch = 0;

    for (const Stage& stage : schedule) {
        AdamState adam;
        if (cfg.mode == OnlineMode::sufficient_stats &&
            cfg.reset_noise_stat_per_stage) {
            e_stat = 0.0;
            t_stat = 0;
        }
        for (long k = 0; k < stage.t_max; ++k) {
            const Matrix& xb = batches[next_batch];
            next_batch = (next_batch + 1) % batches.size();
            ++t_global;

            const double t = static_cast<double>(t_global);
            run_cov = ((t - 1.0) * run_cov +
                       (xb * xb.transpose()) / static_cast<double>(n_b)) /
                      t;

            if (cfg.mode == OnlineMode::sufficient_stats) {
                ++t_stat;
                const Matrix resid =
                    xb - w.transpose() * xb;  // residual under W_{t-1}
                e_stat += resid.squaredNorm() / (static_cast<double>(n_b) * d);
            }

            // One first-order step on W against the running covariance
            // (scores consume only the cached covariance).
            Dataset view;
            view.cov = run_cov;
            const ScoreEval se = score_colide_ev(w, sigma, view, lambda);
            auto h_cur = h_ldet(w, stage.s);
            Matrix grad =
                stage.mu * (se.grad_w + lambda * sign_matrix(w)) + h_cur->gradient;
            grad.diagonal().setZero();
            Matrix w_next = adam_step(w, grad, adam, cfg.solver.adam);
            w_next.diagonal().setZero();
            int halvings = 0;
            while (!h_ldet(w_next, stage.s)) {
                if (++halvings > cfg.solver.backtrack_max)
                    throw domain_unrecoverable_error("fit_online: domain lost");
                w_next = 0.5 * (w + w_next);
            }
            w = std::move(w_next);

            if (cfg.mode == OnlineMode::cov_recursion) {
                sigma = sigma_hat_ev(w, view, sigma0);
            } else {
                sigma = std::max(
                    std::sqrt(e_stat / static_cast<double>(t_stat)), sigma0);
            }

            out.sigma_trajectory.push_back(sigma);
            if (cfg.snapshot_every > 0 && t_global % cfg.snapshot_every == 0)
                out.w_snapshots.push_back(w);
        }
    }

    out.W = w;
    out.sigma = sigma;
    out.batches_consumed = t_global;
    return out;
}

}  // namespace dagsl
