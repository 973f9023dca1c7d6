#pragma once

#include "dagsl/common.hpp"
#include "dagsl/graph.hpp"

namespace dagsl {

enum class NoiseFamily { gaussian, exponential, gumbel };

NoiseFamily noise_family_from_string(const std::string& name);
std::string to_string(NoiseFamily f);

/// Exogenous noise description: distribution family plus per-node standard
/// deviations. Non-Gaussian families are shifted to zero mean and scaled to
/// the requested standard deviation.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    Vector sigmas;

    static NoiseSpec equal_variance(NoiseFamily f, double sigma, int d);
    void validate(int d) const;
};

/// d x n sample matrix (columns are samples) with the cached uncentered
/// covariance (1/n) X X^T. Data are modeled zero-mean.
struct Dataset {
    Matrix X;
    Matrix cov;

    Dataset() = default;
    explicit Dataset(Matrix samples);
    int d() const {
        return static_cast<int>(cov.rows() > 0 ? cov.rows() : X.rows());
    }
    long n() const { return static_cast<long>(X.cols()); }
};

struct TimeSeries {
    Matrix X;  // d x t_max, consecutive observations
    int tau_max = 0;
};

/// (1/n) X X^T, no mean-centering.
Matrix sample_cov(const Matrix& X);

/// n i.i.d. samples of the linear SEM x = W^T x + z, generated node-wise in
/// topological order. Throws cyclic_graph_error when W is cyclic.
Dataset sample_linear_sem(const Matrix& w, const NoiseSpec& noise, long n, Rng& rng);

/// Structural VAR: x_t = W^T x_t + sum_tau A_tau^T x_{t-tau} + z_t, iterated
/// from a zero initial state with `burn_in` discarded steps. Rejects cyclic W
/// and unstable systems (companion spectral radius >= 1).
TimeSeries sample_svarm(const Matrix& w, const std::vector<Matrix>& lags,
                        const NoiseSpec& noise, long t_max, long burn_in, Rng& rng);

/// Spectral radius of the companion matrix of the reduced-form VAR induced
/// by (W, A_tau). Exposed for stability screening on the generation side.
double svarm_companion_radius(const Matrix& w, const std::vector<Matrix>& lags);

}  // namespace dagsl
