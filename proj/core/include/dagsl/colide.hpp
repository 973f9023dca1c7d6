#pragma once

#include "dagsl/acyclicity.hpp"
#include "dagsl/optim.hpp"
#include "dagsl/scores.hpp"

namespace dagsl {

/// One central-path stage: penalty weight mu, log-det parameter s, and an
/// iteration cap.
struct Stage {
    double mu = 1.0;
    double s = 1.0;
    long t_max = 1000;
};

using Schedule = std::vector<Stage>;

/// mu = [1, .1, .01, .001], s = [1, .9, .8, .7], caps [2e4, 2e4, 2e4, 7e4].
Schedule default_schedule();

/// Throws unless mu is strictly decreasing, every s > 0, every t_max > 0.
void validate_schedule(const Schedule& schedule);

struct SolverConfig {
    AdamConfig adam;
    double edge_threshold = 0.3;
    double w_tol = 1e-6;       // per-step relative W change stopper
    double obj_tol = 1e-6;     // windowed relative objective-decrease stopper
    long obj_check_every = 1000;
    bool obj_stop = true;
    int backtrack_max = 50;
};

enum class StopReason { cap, w_tol, obj_plateau };

struct StageTrace {
    double mu = 0.0;
    double s = 0.0;
    long iters = 0;
    double objective = 0.0;
    double h_value = 0.0;
    StopReason stop = StopReason::cap;
    // Noise state at stage end: 1 entry (ev), d entries (nv), empty (ols).
    std::vector<double> sigma;
    // Method-of-multipliers extras (unused by the central-path solvers).
    double alpha = 0.0;
    double penalty_c = 0.0;
};

struct FitResult {
    Matrix W;       // post-threshold, acyclic by contract
    Matrix W_raw;   // last iterate before thresholding
    NoiseEstimate noise;
    std::vector<StageTrace> trace;
    int cycle_edges_removed = 0;
    bool converged = true;       // false when a hard cap decided the output
    bool degenerate_floor = false;
};

enum class Variant { ev, nv };

/// Inexact BCD over a decreasing-mu schedule: per iteration one Adam step on
/// W for mu * score + h_ldet(W, s), then the closed-form sigma (ev) or Sigma
/// (nv) update. Steps leaving the h_ldet domain are rejected by step-halving
/// backtracking. The final W is thresholded and any residual cycles are
/// broken by removing the smallest-magnitude edge on a detected cycle.
FitResult fit_colide(const Dataset& data, Variant variant, double lambda,
                     const Schedule& schedule, const SolverConfig& cfg);

/// Same loop with the OLS+l1 score and no noise updates (the non-adaptive
/// baseline).
FitResult fit_dagma_ols(const Dataset& data, double lambda,
                        const Schedule& schedule, const SolverConfig& cfg);

enum class OnlineMode { cov_recursion, sufficient_stats };

struct OnlineConfig {
    SolverConfig solver;
    OnlineMode mode = OnlineMode::cov_recursion;
    // Store every k-th W iterate in the trajectory (sigma is always dense).
    long snapshot_every = 1;
    // Restart the residual sufficient statistic e_t at stage boundaries so
    // sigma tracks the current iterate rather than the warm-up transient.
    bool reset_noise_stat_per_stage = true;
};

struct OnlineResult {
    Matrix W;                      // final iterate (not thresholded)
    double sigma = 0.0;            // final noise estimate
    std::vector<double> sigma_trajectory;  // one entry per batch
    std::vector<Matrix> w_snapshots;       // every snapshot_every batches
    long batches_consumed = 0;
};

/// Streaming CoLiDE-EV: per batch, update the running covariance
/// cov_t = ((t-1) cov_{t-1} + (1/n_b) X_t X_t^T) / t, take one Adam step on W
/// against the running covariance, then update sigma either from cov_t
/// (cov_recursion) or from the accumulated batch residuals
/// e_t = e_{t-1} + (1/(n_b d)) ||X_t - W_{t-1}^T X_t||^2,
/// sigma_t = max(sqrt(e_t / t), sigma_0) (sufficient_stats). Stage t_max
/// counts batches; mu decreases on that fixed cadence.
OnlineResult fit_online(const std::vector<Matrix>& batches, double lambda,
                        const Schedule& schedule, const OnlineConfig& cfg);

/// Shared post-processing: zero entries with |w| <= threshold, then while the
/// support is cyclic remove the smallest-|weight| edge on a detected cycle.
Matrix threshold_and_break_cycles(const Matrix& w_raw, double threshold,
                                  int* removed_edges);

}  // namespace dagsl
