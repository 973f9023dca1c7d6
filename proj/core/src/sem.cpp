#include "dagsl/sem.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dagsl {

namespace {
constexpr double kEulerGamma = 0.57721566490153286;
const double kGumbelScaleToStd = M_PI / std::sqrt(6.0);
}  // namespace

NoiseFamily noise_family_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseFamily::gaussian;
    if (name == "exponential") return NoiseFamily::exponential;
    if (name == "gumbel") return NoiseFamily::gumbel;
    throw std::invalid_argument("unknown noise family: " + name);
}

std::string to_string(NoiseFamily f) {
    switch (f) {
        case NoiseFamily::gaussian: return "gaussian";
        case NoiseFamily::exponential: return "exponential";
        case NoiseFamily::gumbel: return "gumbel";
    }
    return "?";
}

NoiseSpec NoiseSpec::equal_variance(NoiseFamily f, double sigma, int d) {
    NoiseSpec s;
    s.family = f;
    s.sigmas = Vector::Constant(d, sigma);
    s.validate(d);
    return s;
}

void NoiseSpec::validate(int d) const {
    if (sigmas.size() != d)
        throw std::invalid_argument("NoiseSpec: sigma vector length != d");
    if ((sigmas.array() <= 0.0).any())
        throw std::invalid_argument("NoiseSpec: all sigmas must be > 0");
}

Dataset::Dataset(Matrix samples) : X(std::move(samples)) { cov = sample_cov(X); }

Matrix sample_cov(const Matrix& X) {
    if (X.cols() < 1) throw std::invalid_argument("sample_cov: need n >= 1");
    return (X * X.transpose()) / static_cast<double>(X.cols());
}

namespace {

// One centered draw with standard deviation sigma.
double draw_noise(NoiseFamily f, double sigma, Rng& rng) {
    switch (f) {
        case NoiseFamily::gaussian: {
            std::normal_distribution<double> n(0.0, sigma);
            return n(rng);
        }
        case NoiseFamily::exponential: {
            // Exp(1) has mean = std = 1.
            std::exponential_distribution<double> e(1.0);
            return sigma * (e(rng) - 1.0);
        }
        case NoiseFamily::gumbel: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double g0;
            do {
                double x = u(rng);
                g0 = -std::log(-std::log(x));
            } while (!std::isfinite(g0));
            return sigma / kGumbelScaleToStd * (g0 - kEulerGamma);
        }
    }
    return 0.0;
}

Matrix draw_noise_matrix(const NoiseSpec& noise, int d, long n, Rng& rng) {
    Matrix z(d, n);
    for (int i = 0; i < d; ++i) {
        const double si = noise.sigmas[i];
        for (long t = 0; t < n; ++t) z(i, t) = draw_noise(noise.family, si, rng);
    }
    return z;
}

}  // namespace

Dataset sample_linear_sem(const Matrix& w, const NoiseSpec& noise, long n, Rng& rng) {
    const int d = static_cast<int>(w.rows());
    noise.validate(d);
    if (n < 1) throw std::invalid_argument("sample_linear_sem: need n >= 1");
    auto topo = topological_order(w);
    if (!topo.ok()) throw cyclic_graph_error(topo.cycle);

    Matrix x = draw_noise_matrix(noise, d, n, rng);
    // x_i = w_i^T x + z_i; parents precede i in topological order.
    for (int i : topo.order)
        for (int j = 0; j < d; ++j)
            if (w(j, i) != 0.0) x.row(i) += w(j, i) * x.row(j);
    return Dataset(std::move(x));
}

double svarm_companion_radius(const Matrix& w, const std::vector<Matrix>& lags) {
    const int d = static_cast<int>(w.rows());
    const int k = static_cast<int>(lags.size());
    if (k == 0) return 0.0;
    // Reduced form x_t = sum_tau B_tau x_{t-tau} + e_t with
    // B_tau = (I - W)^{-T} A_tau^T.
    Matrix m = Matrix::Identity(d, d) - w;
    Matrix inv_t = m.transpose().partialPivLu().inverse();
    Matrix comp = Matrix::Zero(d * k, d * k);
    for (int tau = 0; tau < k; ++tau)
        comp.block(0, tau * d, d, d) = inv_t * lags[tau].transpose();
    if (k > 1)
        comp.block(d, 0, d * (k - 1), d * (k - 1)) =
            Matrix::Identity(d * (k - 1), d * (k - 1));
    Eigen::EigenSolver<Matrix> es(comp, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

TimeSeries sample_svarm(const Matrix& w, const std::vector<Matrix>& lags,
                        const NoiseSpec& noise, long t_max, long burn_in, Rng& rng) {
    const int d = static_cast<int>(w.rows());
    const int k = static_cast<int>(lags.size());
    noise.validate(d);
    if (t_max <= k)
        throw std::invalid_argument("sample_svarm: need t_max > tau_max");
    auto topo = topological_order(w);
    if (!topo.ok()) throw cyclic_graph_error(topo.cycle);
    for (const auto& a : lags)
        if (a.rows() != d || a.cols() != d)
            throw std::invalid_argument("sample_svarm: lag matrix shape mismatch");
    const double rho = svarm_companion_radius(w, lags);
    if (rho >= 1.0)
        throw stability_error("sample_svarm: companion spectral radius " +
                              std::to_string(rho) + " >= 1");

    Matrix inv_t = (Matrix::Identity(d, d) - w).transpose().partialPivLu().inverse();
    Matrix hist = Matrix::Zero(d, k > 0 ? k : 1);  // ring buffer of past states
    Matrix out(d, t_max);
    Vector z(d), drive(d);
    for (long t = -burn_in; t < t_max; ++t) {
        for (int i = 0; i < d; ++i) z[i] = draw_noise(noise.family, noise.sigmas[i], rng);
        drive = z;
        for (int tau = 1; tau <= k; ++tau) {
            long idx = t - tau;
            if (idx >= -burn_in)  // earlier states are the zero initial condition
                drive += lags[tau - 1].transpose() *
                         hist.col(((idx % k) + k) % k);
        }
        Vector x = inv_t * drive;
        if (k > 0) hist.col(((t % k) + k) % k) = x;
        if (t >= 0) out.col(t) = x;
    }
    TimeSeries ts;
    ts.X = std::move(out);
    ts.tau_max = k;
    return ts;
}

}  // namespace dagsl
