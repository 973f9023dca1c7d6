#include "dagsl/scores.hpp"

#include <cmath>

namespace dagsl {

namespace {

// Residual second-moment matrix (I-W)^T cov (I-W).
Matrix residual_moment(const Matrix& w, const Matrix& cov) {
    const Matrix b = Matrix::Identity(w.rows(), w.cols()) - w;
    return b.transpose() * cov * b;
}

double l1_offdiag(const Matrix& w) {
    double s = w.cwiseAbs().sum();
    s -= w.diagonal().cwiseAbs().sum();
    return s;
}

}  // namespace

ScoreEval score_ols_l1(const Matrix& w, const Dataset& data, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("score_ols_l1: lambda < 0");
    const Matrix b = Matrix::Identity(w.rows(), w.cols()) - w;
    const Matrix cb = data.cov * b;
    ScoreEval e;
    e.value = 0.5 * b.cwiseProduct(cb).sum() + lambda * l1_offdiag(w);
    e.grad_w = -cb;
    e.grad_w.diagonal().setZero();
    return e;
}

double sigma0_ev(const Dataset& data) {
    const double ms = data.cov.trace() / data.d();
    return std::sqrt(std::max(0.0, ms)) * 1e-2;
}

Vector sigma0_nv(const Dataset& data) {
    return data.cov.diagonal().cwiseMax(0.0).cwiseSqrt() * 1e-2;
}

ScoreEval score_colide_ev(const Matrix& w, double sigma, const Dataset& data,
                          double lambda) {
    if (sigma <= 0.0) throw std::invalid_argument("score_colide_ev: sigma <= 0");
    const Matrix b = Matrix::Identity(w.rows(), w.cols()) - w;
    const Matrix cb = data.cov * b;
    ScoreEval e;
    e.value = 0.5 / sigma * b.cwiseProduct(cb).sum() + 0.5 * data.d() * sigma +
              lambda * l1_offdiag(w);
    e.grad_w = -cb / sigma;
    e.grad_w.diagonal().setZero();
    return e;
}

double sigma_hat_ev(const Matrix& w, const Dataset& data, double floor) {
    const double tr = residual_moment(w, data.cov).trace() / data.d();
    return std::max(std::sqrt(std::max(0.0, tr)), floor);
}

ScoreEval score_colide_nv(const Matrix& w, const Vector& sigmas,
                          const Dataset& data, double lambda) {
    if ((sigmas.array() <= 0.0).any())
        throw std::invalid_argument("score_colide_nv: sigmas must be > 0");
    const Matrix b = Matrix::Identity(w.rows(), w.cols()) - w;
    const Matrix cb = data.cov * b;
    const Vector inv = sigmas.cwiseInverse();
    ScoreEval e;
    // tr(Sigma^{-1} B^T cov B): weight column j of (cov B)∘B by 1/sigma_j.
    e.value = 0.5 * (b.cwiseProduct(cb) * inv.asDiagonal()).sum() +
              0.5 * sigmas.sum() + lambda * l1_offdiag(w);
    e.grad_w = -cb * inv.asDiagonal();
    e.grad_w.diagonal().setZero();
    return e;
}

Vector sigma_hat_nv(const Matrix& w, const Dataset& data, const Vector& floor) {
    Vector diag = residual_moment(w, data.cov).diagonal().cwiseMax(0.0).cwiseSqrt();
    return diag.cwiseMax(floor);
}

ScoreEval score_nonneg(const Matrix& w, const Dataset& data, double lambda) {
    if ((w.array() < 0.0).any())
        throw std::domain_error("score_nonneg: W has negative entries");
    const int d = static_cast<int>(w.rows());
    const Matrix b = Matrix::Identity(d, d) - w;
    const Matrix cb = data.cov * b;
    ScoreEval e;
    double linpen = w.sum() - w.diagonal().sum();
    e.value = 0.5 * b.cwiseProduct(cb).sum() + lambda * linpen;
    e.grad_w = -cb + lambda * Matrix::Ones(d, d);
    e.grad_w.diagonal().setZero();
    return e;
}

}  // namespace dagsl
