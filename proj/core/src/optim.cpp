#include "dagsl/optim.hpp"

#include <cmath>

namespace dagsl {

Matrix adam_step(const Matrix& w, const Matrix& grad, AdamState& state,
                 const AdamConfig& cfg) {
    if (state.t == 0) state.reset(static_cast<int>(w.rows()), static_cast<int>(w.cols()));
    ++state.t;
    state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
    state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    const Matrix mhat = state.m / c1;
    const Matrix vhat = state.v / c2;
    return w - cfg.step * (mhat.array() / (vhat.array().sqrt() + cfg.eps)).matrix();
}

}  // namespace dagsl
