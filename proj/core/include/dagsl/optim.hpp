#pragma once

#include "dagsl/common.hpp"

namespace dagsl {

struct AdamConfig {
    double step = 3e-4;
    double beta1 = 0.99;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adaptive-moment first-order state. Deterministic given the gradient
/// sequence.
struct AdamState {
    Matrix m, v;
    long t = 0;

    void reset(int rows, int cols) {
        m = Matrix::Zero(rows, cols);
        v = Matrix::Zero(rows, cols);
        t = 0;
    }
};

/// One bias-corrected update; returns the new iterate.
Matrix adam_step(const Matrix& w, const Matrix& grad, AdamState& state,
                 const AdamConfig& cfg);

}  // namespace dagsl
