#pragma once

#include <optional>

#include "dagsl/common.hpp"

namespace dagsl {

/// Value and gradient of a smooth acyclicity function at W. Inside the
/// declared domain the value is >= 0 and vanishes exactly on DAG supports.
struct AcyclicityEval {
    double value = 0.0;
    Matrix gradient;
};

/// Dense matrix exponential, scaling-and-squaring with Pade approximants.
Matrix expm(const Matrix& a);

/// tr(e^{W∘W}) - d with gradient 2 W ∘ (e^{W∘W})^T. Total on finite input.
AcyclicityEval h_expm(const Matrix& w);

/// tr((I + (1/d) W∘W)^d) - d with gradient 2 W ∘ [(I + (1/d) W∘W)^{d-1}]^T.
/// One binary power chain is shared between value and gradient.
AcyclicityEval h_poly(const Matrix& w);

/// d log s - log det(sI - W∘W) on the domain rho(W∘W) < s; gradient
/// 2 W ∘ (sI - W∘W)^{-T}. Returns nullopt outside the domain (nonpositive
/// determinant or rho(W∘W) >= s); solvers use that for backtracking.
std::optional<AcyclicityEval> h_ldet(const Matrix& w, double s);

/// Non-negativity variant: d log s - log det(sI - W) on
/// {W >= 0 : rho(W) < s}; gradient (sI - W)^{-T} with no Hadamard factor,
/// hence nonvanishing at DAGs. Negative entries are a domain error.
std::optional<AcyclicityEval> h_ldet_nonneg(const Matrix& w, double s);

/// Spectral radius estimate by power iteration on the entrywise absolute
/// value |W| (tolerance 1e-10, capped; returns the best estimate at the
/// cap). For the Hadamard-based domain check call it on W∘W, which is
/// already nonnegative, so the |.| is a no-op and the estimate is exact for
/// both conventions used here.
double spectral_radius(const Matrix& w);

}  // namespace dagsl
