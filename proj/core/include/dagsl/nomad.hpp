#pragma once

#include <optional>

#include "dagsl/colide.hpp"

namespace dagsl {

/// Method-of-multipliers dual state. The penalty c never decreases;
/// residual_history records H_+ after each outer round.
struct MultiplierState {
    double alpha = 0.0;
    double c = 1.0;
    std::vector<double> residual_history;
};

struct MomConfig {
    double alpha0 = 0.0;
    double c0 = 1.0;
    double gamma = 5.0;    // penalty growth factor
    double eta = 0.5;      // required residual-decrease ratio
    double eps_h = 1e-8;   // acyclicity residual tolerance
    int outer_max = 30;
    double inner_tol = 1e-6;
    long inner_max = 5000;
    double step0 = 1.0;    // initial proximal-gradient step, adapted online
    int backtrack_max = 60;
    // Dual-update safeguards: runaway c makes the ascent step c*H overshoot
    // the multiplier and freeze premature DAGs into KKT points.
    double c_max = 1e6;
    double h_growth_floor = 1e-7;  // no penalty growth once H is this small
};

struct AugEval {
    double value = 0.0;  // S_+ + alpha H_+ + (c/2) H_+^2
    Matrix grad;
};

/// Augmented Lagrangian of the non-negative DAG learning problem; nullopt
/// outside the domain (negative entries or rho(W) >= s).
std::optional<AugEval> augmented_lagrangian(const Matrix& w, double alpha,
                                            double c, const Dataset& data,
                                            double lambda, double s);

/// Data-driven default for the log-det parameter: 1.1x the spectral radius
/// of the positive part of the unconstrained least-squares coefficients,
/// clamped to >= 1.
double default_s_nonneg(const Dataset& data);

/// Non-negative DAG learning by the method of multipliers: inner projected
/// proximal-gradient minimization of L_c(., alpha), dual ascent
/// alpha += c * H_+, and conditional penalty growth. Output thresholded and
/// cycle-cleaned as in the central-path solvers.
FitResult fit_nomad(const Dataset& data, double lambda, double s,
                    const MomConfig& cfg, double edge_threshold = 0.3);

struct SvarmFit {
    Matrix W;       // post-threshold, non-negative, acyclic
    Matrix W_raw;
    std::vector<Matrix> lags;  // unconstrained sign, no acyclicity
    std::vector<StageTrace> trace;
    int cycle_edges_removed = 0;
    bool converged = true;
};

/// Joint SVARM estimation: instantaneous W (non-negative, H_+ <= 0) and lag
/// matrices A_tau (l1-penalized, unconstrained) over the lagged regression
/// that drops the first tau_max steps.
SvarmFit fit_nomad_svarm(const TimeSeries& series, int tau_max, double lambda_w,
                         double lambda_a, double s, const MomConfig& cfg,
                         double edge_threshold = 0.3);

/// Non-negativity-agnostic baseline on the same lagged design: mixed-sign W
/// under the Hadamard log-det penalty, Adam central path, OLS + l1 score.
SvarmFit fit_svarm_ols(const TimeSeries& series, int tau_max, double lambda_w,
                       double lambda_a, const Schedule& schedule,
                       const SolverConfig& cfg);

}  // namespace dagsl
