#pragma once

#include "dagsl/common.hpp"
#include "dagsl/sem.hpp"

namespace dagsl {

/// Score evaluation: total value (including any nonsmooth penalty) plus the
/// gradient of the smooth part only, with a structurally zero diagonal.
/// Solvers add the l1 subgradient lambda * sign(W) themselves, so either a
/// subgradient or a proximal strategy can be built on top.
struct ScoreEval {
    double value = 0.0;
    Matrix grad_w;
};

enum class NoiseKind { none, ev, nv };

/// Concomitant noise estimate attached to a fit. Entries never fall below
/// their floor.
struct NoiseEstimate {
    NoiseKind kind = NoiseKind::none;
    double sigma = 0.0;   // ev
    Vector sigmas;        // nv
    double floor_ev = 0.0;
    Vector floor_nv;
};

/// (1/2) tr((I-W)^T cov (I-W)) + lambda ||W||_1; smooth gradient -cov (I-W).
ScoreEval score_ols_l1(const Matrix& w, const Dataset& data, double lambda);

/// sigma_0 = ||X||_F / sqrt(d n) * 1e-2, computed from the cached covariance
/// as sqrt(tr(cov)/d) * 1e-2. Returns 0 for all-zero data (degenerate floor;
/// callers treat that as a warning condition).
double sigma0_ev(const Dataset& data);

/// Sigma_0 = sqrt(diag(cov)) * 1e-2, element-wise.
Vector sigma0_nv(const Dataset& data);

/// (1/(2 sigma)) tr((I-W)^T cov (I-W)) + d sigma / 2 + lambda ||W||_1.
ScoreEval score_colide_ev(const Matrix& w, double sigma, const Dataset& data,
                          double lambda);

/// Closed-form block minimizer max(sqrt(tr((I-W)^T cov (I-W)) / d), floor).
double sigma_hat_ev(const Matrix& w, const Dataset& data, double floor);

/// (1/2) tr((I-W)^T cov (I-W) Sigma^{-1}) + (1/2) sum_i sigma_i
/// + lambda ||W||_1, Sigma = diag(sigmas) of standard deviations.
ScoreEval score_colide_nv(const Matrix& w, const Vector& sigmas,
                          const Dataset& data, double lambda);

/// Element-wise max(sqrt(diag((I-W)^T cov (I-W))), floor).
Vector sigma_hat_nv(const Matrix& w, const Dataset& data, const Vector& floor);

/// Non-negative-orthant score: (1/2) tr((I-W)^T cov (I-W)) + lambda sum W_ij,
/// smooth everywhere on the orthant; grad includes the lambda term. Negative
/// entries are a domain error (std::domain_error).
ScoreEval score_nonneg(const Matrix& w, const Dataset& data, double lambda);

}  // namespace dagsl
