#include "dagsl/nomad.hpp"

#include "dagsl/graph.hpp"

#include <cmath>

namespace dagsl {

std::optional<AugEval> augmented_lagrangian(const Matrix& w, double alpha,
                                            double c, const Dataset& data,
                                            double lambda, double s) {
    auto h = h_ldet_nonneg(w, s);
    if (!h) return std::nullopt;
    const ScoreEval se = score_nonneg(w, data, lambda);
    AugEval out;
    out.value = se.value + alpha * h->value + 0.5 * c * h->value * h->value;
    out.grad = se.grad_w + (alpha + c * h->value) * h->gradient;
    out.grad.diagonal().setZero();
    return out;
}

double default_s_nonneg(const Dataset& data) {
    const int d = data.d();
    Matrix w_ls = Matrix::Zero(d, d);
    const double ridge = 1e-10 * std::max(1.0, data.cov.trace() / d);
    for (int i = 0; i < d; ++i) {
        Matrix sub(d - 1, d - 1);
        Vector rhs(d - 1);
        int r = 0;
        for (int a = 0; a < d; ++a) {
            if (a == i) continue;
            int cidx = 0;
            for (int b = 0; b < d; ++b) {
                if (b == i) continue;
                sub(r, cidx++) = data.cov(a, b);
            }
            rhs[r] = data.cov(a, i);
            ++r;
        }
        sub.diagonal().array() += ridge;
        Vector sol = sub.ldlt().solve(rhs);
        r = 0;
        for (int a = 0; a < d; ++a)
            if (a != i) w_ls(a, i) = sol[r++];
    }
    const Matrix pos = w_ls.cwiseMax(0.0);
    return std::max(1.0, 1.1 * spectral_radius(pos));
}

namespace {

// Stacked non-negative problem shared by fit_nomad (no lags) and
// fit_nomad_svarm. Parameters live in one ((k+1)d) x d matrix
// V = [W; A_1; ...; A_k]; the residual Gram matrix G is precomputed so each
// evaluation costs O((k+1)^2 d^3) independent of the sample count.
struct StackedProblem {
    int d = 0;
    int k = 0;          // number of lag blocks
    Matrix gram;        // (k+1)d x (k+1)d
    double lambda_w = 0.0;
    double lambda_a = 0.0;

    Matrix coeff_stack(const Matrix& v) const {
        Matrix s = -v;
        s.topRows(d) = Matrix::Identity(d, d) - v.topRows(d);
        return s;
    }

    // Smooth LS part: value and gradient w.r.t. V.
    double smooth(const Matrix& v, Matrix* grad) const {
        const Matrix s = coeff_stack(v);
        const Matrix gs = gram * s;
        if (grad) {
            *grad = -gs;
            grad->topRows(d).diagonal().setZero();
        }
        return 0.5 * s.cwiseProduct(gs).sum();
    }

    // Nonsmooth penalties handled by the prox: linear on W (>= 0), l1 on A.
    double penalty(const Matrix& v) const {
        double p = lambda_w * v.topRows(d).sum();
        if (k > 0) p += lambda_a * v.bottomRows(k * d).cwiseAbs().sum();
        return p;
    }

    // prox of eta * (indicator{W >= 0} + lambda_w * sum W + lambda_a |A|_1).
    Matrix prox(const Matrix& v, double eta) const {
        Matrix out = v;
        out.topRows(d) =
            (v.topRows(d).array() - eta * lambda_w).max(0.0).matrix();
        out.topRows(d).diagonal().setZero();
        if (k > 0) {
            auto a = v.bottomRows(k * d).array();
            out.bottomRows(k * d) =
                ((a.abs() - eta * lambda_a).max(0.0) * a.sign()).matrix();
        }
        return out;
    }
};

Matrix prox_step(const StackedProblem& prob, const Matrix& v, const Matrix& grad,
                 double eta) {
    return prob.prox(v - eta * grad, eta);
}

struct InnerResult {
    long iters = 0;
    bool converged = false;
    double step = 1.0;
};

// Projected proximal-gradient minimization of
//   smooth(V) + alpha H_+(W) + (c/2) H_+^2(W) + penalty(V)
// with step backtracking on the h-domain and on the quadratic majorization.
InnerResult minimize_inner(const StackedProblem& prob, Matrix& v, double alpha,
                           double c, double s, const MomConfig& cfg,
                           double step_init) {
    InnerResult res;
    res.step = step_init;
    const int d = prob.d;

    Matrix grad;
    double f_smooth = prob.smooth(v, &grad);
    auto h = h_ldet_nonneg(v.topRows(d), s);
    if (!h)
        throw domain_unrecoverable_error("nomad inner: iterate left the domain");
    double f_total = f_smooth + alpha * h->value + 0.5 * c * h->value * h->value;
    grad.topRows(d) += (alpha + c * h->value) * h->gradient;
    grad.topRows(d).diagonal().setZero();

    for (long it = 1; it <= cfg.inner_max; ++it) {
        res.iters = it;
        double eta = res.step;
        Matrix v_next;
        std::optional<AcyclicityEval> h_next;
        double f_next = 0.0;
        bool accepted = false;
        for (int bt = 0; bt <= cfg.backtrack_max; ++bt) {
            v_next = prox_step(prob, v, grad, eta);
            h_next = h_ldet_nonneg(v_next.topRows(d), s);
            if (h_next) {
                Matrix g_next;
                const double fs = prob.smooth(v_next, &g_next);
                const double df = (v_next - v).squaredNorm();
                // Quadratic majorization of the smooth total around v.
                const double model =
                    f_total + grad.cwiseProduct(v_next - v).sum() +
                    df / (2.0 * eta);
                f_next = fs + alpha * h_next->value +
                         0.5 * c * h_next->value * h_next->value;
                if (f_next <= model + 1e-12 * std::abs(model)) {
                    grad = std::move(g_next);
                    accepted = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // step collapsed to numerical floor
            break;
        }

        const double rel = (v_next - v).norm() / std::max(1.0, v.norm());
        v = std::move(v_next);
        h = std::move(h_next);
        f_total = f_next;
        grad.topRows(d) += (alpha + c * h->value) * h->gradient;
        grad.topRows(d).diagonal().setZero();

        // Grow the step after a clean acceptance, pay back otherwise.
        res.step = (eta == res.step) ? std::min(eta * 1.25, 1e6) : eta;

        if (rel < cfg.inner_tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

FitResult finalize_nonneg(Matrix w_raw, double edge_threshold,
                          std::vector<StageTrace> trace, bool converged) {
    FitResult res;
    res.W_raw = std::move(w_raw);
    res.W = threshold_and_break_cycles(res.W_raw, edge_threshold,
                                       &res.cycle_edges_removed);
    res.trace = std::move(trace);
    res.converged = converged;
    return res;
}

struct MomRun {
    Matrix v;
    std::vector<StageTrace> trace;
    bool converged = false;
    MultiplierState state;
};

MomRun run_mom(const StackedProblem& prob, Matrix v0, double s,
               const MomConfig& cfg) {
    MomRun run;
    run.v = std::move(v0);
    run.state.alpha = cfg.alpha0;
    run.state.c = cfg.c0;

    double h_prev = std::numeric_limits<double>::infinity();
    double step = cfg.step0;
    for (int round = 1; round <= cfg.outer_max; ++round) {
        // Inexact MoM: the inner solve must sharpen as the residual shrinks,
        // otherwise H stalls at the square of the unresolved entry scale.
        MomConfig round_cfg = cfg;
        if (std::isfinite(h_prev))
            round_cfg.inner_tol =
                std::max(1e-12, std::min(cfg.inner_tol, 0.01 * h_prev));
        InnerResult inner = minimize_inner(prob, run.v, run.state.alpha,
                                           run.state.c, s, round_cfg, step);
        step = inner.step;

        const auto h = h_ldet_nonneg(run.v.topRows(prob.d), s);
        const double h_now = h ? h->value : std::numeric_limits<double>::infinity();
        run.state.residual_history.push_back(h_now);

        StageTrace tr;
        tr.s = s;
        tr.iters = inner.iters;
        tr.objective = prob.smooth(run.v, nullptr) + prob.penalty(run.v);
        tr.h_value = h_now;
        tr.alpha = run.state.alpha;
        tr.penalty_c = run.state.c;
        run.trace.push_back(tr);

        if (h_now < cfg.eps_h && inner.converged) {
            run.converged = true;
            break;
        }

        // Dual ascent; the residual is exactly the dual gradient.
        run.state.alpha += run.state.c * h_now;
        // Grow the penalty only when the residual stalled and is still
        // meaningfully violated, and never past c_max.
        if (h_now > cfg.eta * h_prev && h_now > cfg.h_growth_floor)
            run.state.c = std::min(run.state.c * cfg.gamma, cfg.c_max);
        h_prev = h_now;
    }
    return run;
}

}  // namespace

FitResult fit_nomad(const Dataset& data, double lambda, double s,
                    const MomConfig& cfg, double edge_threshold) {
    if (s <= 0.0) throw std::invalid_argument("fit_nomad: s must be > 0");
    if (data.d() == 0) throw std::invalid_argument("fit_nomad: empty dataset");
    const int d = data.d();

    StackedProblem prob;
    prob.d = d;
    prob.k = 0;
    prob.gram = data.cov;
    prob.lambda_w = lambda;
    prob.lambda_a = 0.0;

    MomRun run = run_mom(prob, Matrix::Zero(d, d), s, cfg);
    return finalize_nonneg(run.v, edge_threshold, std::move(run.trace),
                           run.converged);
}

namespace {

// Lagged design: current block X[:, tau..t-1] stacked over delayed copies.
StackedProblem svarm_problem(const TimeSeries& series, int tau_max,
                             double lambda_w, double lambda_a) {
    const int d = static_cast<int>(series.X.rows());
    const long t_total = series.X.cols();
    if (t_total <= tau_max + 1)
        throw std::invalid_argument("svarm fit: series shorter than tau_max + 1");
    const long n_eff = t_total - tau_max;

    Matrix y((tau_max + 1) * d, n_eff);
    for (int tau = 0; tau <= tau_max; ++tau)
        y.middleRows(tau * d, d) = series.X.middleCols(tau_max - tau, n_eff);

    StackedProblem prob;
    prob.d = d;
    prob.k = tau_max;
    prob.gram = (y * y.transpose()) / static_cast<double>(n_eff);
    prob.lambda_w = lambda_w;
    prob.lambda_a = lambda_a;
    return prob;
}

}  // namespace

SvarmFit fit_nomad_svarm(const TimeSeries& series, int tau_max, double lambda_w,
                         double lambda_a, double s, const MomConfig& cfg,
                         double edge_threshold) {
    if (s <= 0.0) throw std::invalid_argument("fit_nomad_svarm: s must be > 0");
    StackedProblem prob = svarm_problem(series, tau_max, lambda_w, lambda_a);
    const int d = prob.d;

    MomRun run = run_mom(prob, Matrix::Zero((tau_max + 1) * d, d), s, cfg);

    SvarmFit fit;
    fit.W_raw = run.v.topRows(d);
    fit.W = threshold_and_break_cycles(fit.W_raw, edge_threshold,
                                       &fit.cycle_edges_removed);
    for (int tau = 0; tau < tau_max; ++tau)
        fit.lags.push_back(run.v.middleRows((tau + 1) * d, d));
    fit.trace = std::move(run.trace);
    fit.converged = run.converged;
    return fit;
}

SvarmFit fit_svarm_ols(const TimeSeries& series, int tau_max, double lambda_w,
                       double lambda_a, const Schedule& schedule,
                       const SolverConfig& cfg) {
    validate_schedule(schedule);
    StackedProblem prob = svarm_problem(series, tau_max, lambda_w, lambda_a);
    const int d = prob.d;

    Matrix v = Matrix::Zero((tau_max + 1) * d, d);
    std::vector<StageTrace> trace;
    bool converged = true;

    for (const Stage& stage : schedule) {
        AdamState adam;
        auto h_cur = h_ldet(v.topRows(d), stage.s);
        if (!h_cur)
            throw domain_unrecoverable_error("svarm-ols: stage start out of domain");
        StageTrace tr;
        tr.mu = stage.mu;
        tr.s = stage.s;
        tr.stop = StopReason::cap;
        double obj_at_check = std::numeric_limits<double>::infinity();

        long t = 0;
        while (t < stage.t_max) {
            ++t;
            Matrix grad;
            prob.smooth(v, &grad);
            grad.topRows(d) += prob.lambda_w * sign_matrix(v.topRows(d));
            if (tau_max > 0)
                grad.bottomRows(tau_max * d) +=
                    prob.lambda_a * sign_matrix(v.bottomRows(tau_max * d));
            grad *= stage.mu;
            grad.topRows(d) += h_cur->gradient;
            grad.topRows(d).diagonal().setZero();

            Matrix v_next = adam_step(v, grad, adam, cfg.adam);
            v_next.topRows(d).diagonal().setZero();
            auto h_next = h_ldet(v_next.topRows(d), stage.s);
            int halvings = 0;
            while (!h_next) {
                if (++halvings > cfg.backtrack_max)
                    throw domain_unrecoverable_error("svarm-ols: domain lost");
                v_next = 0.5 * (v + v_next);
                h_next = h_ldet(v_next.topRows(d), stage.s);
            }

            const double rel = (v_next - v).norm() / std::max(1.0, v.norm());
            v = std::move(v_next);
            h_cur = std::move(h_next);
            if (rel < cfg.w_tol) {
                tr.stop = StopReason::w_tol;
                break;
            }
            if (cfg.obj_stop && t % cfg.obj_check_every == 0) {
                const double obj =
                    stage.mu * (prob.smooth(v, nullptr) + prob.penalty(v)) +
                    h_cur->value;
                if (obj_at_check - obj <
                    cfg.obj_tol * std::max(1.0, std::abs(obj_at_check))) {
                    tr.stop = StopReason::obj_plateau;
                    break;
                }
                obj_at_check = obj;
            }
        }
        tr.iters = t;
        tr.objective = prob.smooth(v, nullptr) + prob.penalty(v);
        tr.h_value = h_cur->value;
        if (tr.stop == StopReason::cap) converged = false;
        trace.push_back(tr);
    }

    SvarmFit fit;
    fit.W_raw = v.topRows(d);
    fit.W = threshold_and_break_cycles(fit.W_raw, cfg.edge_threshold,
                                       &fit.cycle_edges_removed);
    for (int tau = 0; tau < tau_max; ++tau)
        fit.lags.push_back(v.middleRows((tau + 1) * d, d));
    fit.trace = std::move(trace);
    fit.converged = converged;
    return fit;
}

}  // namespace dagsl
