#include <doctest.h>

#include "dagsl/scores.hpp"
#include "dagsl/graph.hpp"
#include "oracles.hpp"

using namespace dagsl;

namespace {

Dataset dataset_with_cov(const Matrix& cov) {
    Dataset d;
    d.cov = cov;
    return d;
}

Dataset random_dataset(int d, long n, Rng& rng) {
    auto g = random_er_dag(d, 2.0, rng);
    Matrix w = assign_weights(g, 0.5, 2.0, WeightSign::mixed, rng);
    return sample_linear_sem(w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, d),
                             n, rng);
}

Matrix random_w(int d, double scale, Rng& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix w = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) w(i, j) = u(rng);
    return w;
}

}  // namespace

TEST_CASE("score_ols_l1: pinned values") {
    auto data = dataset_with_cov(Matrix::Identity(2, 2));
    CHECK(score_ols_l1(Matrix::Zero(2, 2), data, 0.0).value ==
          doctest::Approx(1.0));

    Rng rng(1);
    auto d5 = random_dataset(5, 200, rng);
    CHECK(score_ols_l1(Matrix::Zero(5, 5), d5, 0.0).value ==
          doctest::Approx(0.5 * d5.cov.trace()));

    // lambda adds the l1 mass exactly.
    Matrix w = random_w(5, 1.0, rng);
    const double base = score_ols_l1(w, d5, 0.0).value;
    CHECK(score_ols_l1(w, d5, 0.3).value ==
          doctest::Approx(base + 0.3 * w.cwiseAbs().sum()));
}

TEST_CASE("score_ols_l1 at the truth approaches sigma^2 d / 2") {
    const double wtrue = 1.1;
    Matrix w = Matrix::Zero(2, 2);
    w(0, 1) = wtrue;
    Rng rng(2);
    auto data = sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, 2), 100000, rng);
    CHECK(score_ols_l1(w, data, 0.0).value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sigma0 floors") {
    Dataset eye(Matrix::Identity(2, 2));
    CHECK(sigma0_ev(eye) == doctest::Approx(std::sqrt(2.0) / 2.0 * 1e-2));
    Dataset zero(Matrix::Zero(3, 4));
    CHECK(sigma0_ev(zero) == 0.0);  // degenerate floor, flagged by solvers

    auto diag = dataset_with_cov(Vector{{4.0, 9.0}}.asDiagonal());
    const Vector f = sigma0_nv(diag);
    CHECK(f[0] == doctest::Approx(0.02));
    CHECK(f[1] == doctest::Approx(0.03));
    CHECK((sigma0_nv(dataset_with_cov(Matrix::Identity(3, 3))).array() == 1e-2)
              .all());

    Rng rng(3);
    auto data = random_dataset(6, 500, rng);
    CHECK(sigma0_ev(data) ==
          doctest::Approx(std::sqrt(data.cov.trace() / 6.0) * 1e-2));
    CHECK((sigma0_nv(data) - (data.cov.diagonal().cwiseSqrt() * 1e-2).eval())
              .norm() < 1e-15);
    // Algebraic identity: ||X||_F / sqrt(dn) == sqrt(tr(cov)/d).
    CHECK(sigma0_ev(data) ==
          doctest::Approx(data.X.norm() / std::sqrt(6.0 * data.n()) * 1e-2));
}

TEST_CASE("score_colide_ev: pinned values and sigma stationarity") {
    auto eye = dataset_with_cov(Matrix::Identity(2, 2));
    CHECK(score_colide_ev(Matrix::Zero(2, 2), 1.0, eye, 0.0).value ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(score_colide_ev(Matrix::Zero(2, 2), 0.0, eye, 0.0),
                    std::invalid_argument);

    // Minimizing over sigma alone returns the unclamped closed form.
    Rng rng(4);
    auto data = random_dataset(4, 300, rng);
    Matrix w = random_w(4, 0.7, rng);
    const double shat = sigma_hat_ev(w, data, 1e-12);
    const double at_hat = score_colide_ev(w, shat, data, 0.0).value;
    for (double mult : {0.6, 0.8, 1.25, 2.0})
        CHECK(at_hat <= score_colide_ev(w, shat * mult, data, 0.0).value + 1e-12);

    // Perfect fit: residual zero at sigma = floor leaves d*sigma0/2.
    Dataset zero;
    zero.cov = Matrix::Zero(3, 3);
    CHECK(score_colide_ev(Matrix::Zero(3, 3), 0.05, zero, 0.0).value ==
          doctest::Approx(3.0 * 0.05 / 2.0));
}

TEST_CASE("sigma_hat_ev: closed form and clamping") {
    auto eye = dataset_with_cov(Matrix::Identity(2, 2));
    CHECK(sigma_hat_ev(Matrix::Zero(2, 2), eye, 1e-4) == doctest::Approx(1.0));

    Dataset zero;
    zero.cov = Matrix::Zero(2, 2);
    CHECK(sigma_hat_ev(Matrix::Zero(2, 2), zero, 0.07) == 0.07);  // clamp active

    Rng rng(5);
    auto data = random_dataset(5, 400, rng);
    Matrix w = random_w(5, 0.5, rng);
    const Matrix b = Matrix::Identity(5, 5) - w;
    const double direct =
        std::sqrt((b.transpose() * data.cov * b).trace() / 5.0);
    CHECK(sigma_hat_ev(w, data, 1e-12) == doctest::Approx(direct));
}

TEST_CASE("score_colide_nv: pinned value, EV compatibility, errors") {
    auto data = dataset_with_cov(Vector{{1.0, 4.0}}.asDiagonal());
    const Vector sig{{1.0, 2.0}};
    CHECK(score_colide_nv(Matrix::Zero(2, 2), sig, data, 0.0).value ==
          doctest::Approx(3.0));

    // Sigma = sigma I collapses to the EV score for every W and lambda.
    Rng rng(6);
    auto d5 = random_dataset(5, 300, rng);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix w = random_w(5, 1.0, rng);
        const double sigma = 0.3 + 1.7 * (rep % 5) / 4.0;
        const double lambda = 0.1 * (rep % 3);
        auto nv = score_colide_nv(w, Vector::Constant(5, sigma), d5, lambda);
        auto ev = score_colide_ev(w, sigma, d5, lambda);
        CHECK(nv.value == doctest::Approx(ev.value).epsilon(1e-12));
        CHECK((nv.grad_w - ev.grad_w).norm() < 1e-12);
    }

    CHECK_THROWS_AS(score_colide_nv(Matrix::Zero(2, 2), Vector{{1.0, 0.0}}, data, 0.0),
                    std::invalid_argument);

    // Perfect fit leaves (1/2) tr(Sigma).
    Dataset zero;
    zero.cov = Matrix::Zero(2, 2);
    CHECK(score_colide_nv(Matrix::Zero(2, 2), sig, zero, 0.0).value ==
          doctest::Approx(0.5 * sig.sum()));
}

TEST_CASE("sigma_hat_nv: closed form and clamping") {
    auto diag = dataset_with_cov(Vector{{4.0, 9.0}}.asDiagonal());
    const Vector floor = Vector::Constant(2, 1e-3);
    const Vector got = sigma_hat_nv(Matrix::Zero(2, 2), diag, floor);
    CHECK(got[0] == doctest::Approx(2.0));
    CHECK(got[1] == doctest::Approx(3.0));

    Dataset zero;
    zero.cov = Matrix::Zero(2, 2);
    CHECK((sigma_hat_nv(Matrix::Zero(2, 2), zero, Vector::Constant(2, 0.4)).array() ==
           0.4)
              .all());

    Rng rng(7);
    auto data = random_dataset(4, 300, rng);
    Matrix w = random_w(4, 0.5, rng);
    const Matrix b = Matrix::Identity(4, 4) - w;
    const Vector direct =
        (b.transpose() * data.cov * b).diagonal().cwiseSqrt();
    CHECK((sigma_hat_nv(w, data, Vector::Constant(4, 1e-12)) - direct).norm() <
          1e-12);
}

TEST_CASE("score_nonneg: identity with OLS on the orthant, domain error") {
    Rng rng(8);
    auto data = random_dataset(5, 300, rng);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix w = random_w(5, 1.0, rng).cwiseAbs();
        w.diagonal().setZero();
        const double lambda = 0.07;
        CHECK(score_nonneg(w, data, lambda).value ==
              doctest::Approx(score_ols_l1(w, data, lambda).value).epsilon(1e-12));
    }
    CHECK(score_nonneg(Matrix::Zero(5, 5), data, 0.0).value ==
          doctest::Approx(0.5 * data.cov.trace()));

    Matrix neg = Matrix::Zero(3, 3);
    neg(0, 1) = -0.2;
    Dataset d3;
    d3.cov = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(score_nonneg(neg, d3, 0.0), std::domain_error);

    // Linear penalty adds exactly lambda * sum(W).
    Matrix w = random_w(5, 1.0, rng).cwiseAbs();
    w.diagonal().setZero();
    CHECK(score_nonneg(w, data, 0.4).value ==
          doctest::Approx(score_nonneg(w, data, 0.0).value + 0.4 * w.sum()));
}

TEST_CASE("smooth-part gradients match finite differences for all scores") {
    Rng rng(9);
    auto data = random_dataset(5, 200, rng);
    const Vector sig = Vector::Constant(5, 0.8);
    int reps = 0;
    while (reps < 25) {
        Matrix w = random_w(5, 1.0, rng);
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [&](const Matrix& m) { return score_ols_l1(m, data, 0.0).value; },
                      w),
                  score_ols_l1(w, data, 0.0).grad_w) <= 1e-5);
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [&](const Matrix& m) {
                          return score_colide_ev(m, 0.7, data, 0.0).value;
                      },
                      w),
                  score_colide_ev(w, 0.7, data, 0.0).grad_w) <= 1e-5);
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [&](const Matrix& m) {
                          return score_colide_nv(m, sig, data, 0.0).value;
                      },
                      w),
                  score_colide_nv(w, sig, data, 0.0).grad_w) <= 1e-5);

        Matrix wpos = w.cwiseAbs() + Matrix::Constant(5, 5, 0.01);
        wpos.diagonal().setZero();
        // score_nonneg's gradient includes the smooth linear term.
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [&](const Matrix& m) { return score_nonneg(m, data, 0.2).value; },
                      wpos),
                  score_nonneg(wpos, data, 0.2).grad_w) <= 1e-5);
        ++reps;
    }
}

TEST_CASE("joint convexity: midpoint tests for EV and NV scores") {
    Rng rng(10);
    auto data = random_dataset(4, 200, rng);
    const double s0 = sigma0_ev(data);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        Matrix w1 = random_w(4, 1.5, rng), w2 = random_w(4, 1.5, rng);
        const double l = 0.05;

        const double sa = s0 + u(rng) * 2.0, sb = s0 + u(rng) * 2.0;
        const double lhs =
            score_colide_ev(0.5 * (w1 + w2), 0.5 * (sa + sb), data, l).value;
        const double rhs = 0.5 * (score_colide_ev(w1, sa, data, l).value +
                                  score_colide_ev(w2, sb, data, l).value);
        CHECK(lhs <= rhs + 1e-9);

        Vector v1 = Vector::NullaryExpr(4, [&](Eigen::Index) { return s0 + u(rng) * 2.0; });
        Vector v2 = Vector::NullaryExpr(4, [&](Eigen::Index) { return s0 + u(rng) * 2.0; });
        const double lhs_nv =
            score_colide_nv(0.5 * (w1 + w2), 0.5 * (v1 + v2), data, l).value;
        const double rhs_nv = 0.5 * (score_colide_nv(w1, v1, data, l).value +
                                     score_colide_nv(w2, v2, data, l).value);
        CHECK(lhs_nv <= rhs_nv + 1e-9);
    }
}

TEST_CASE("noise consistency at the true graph") {
    Rng rng(11);
    auto g = random_er_dag(8, 2.0, rng);
    Matrix w = assign_weights(g, 0.5, 2.0, WeightSign::mixed, rng);

    const double sigma_true = 1.4;
    auto ev = sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, sigma_true, 8), 10000, rng);
    CHECK(sigma_hat_ev(w, ev, 1e-12) ==
          doctest::Approx(sigma_true).epsilon(0.05));

    NoiseSpec nv;
    nv.family = NoiseFamily::gaussian;
    std::uniform_real_distribution<double> var(0.5, 10.0);
    nv.sigmas = Vector::NullaryExpr(8, [&](Eigen::Index) { return std::sqrt(var(rng)); });
    auto nvd = sample_linear_sem(w, nv, 10000, rng);
    const Vector est = sigma_hat_nv(w, nvd, Vector::Constant(8, 1e-12));
    for (int i = 0; i < 8; ++i)
        CHECK(est[i] == doctest::Approx(nv.sigmas[i]).epsilon(0.10));
}

TEST_CASE("data scaling: sigma_hat scales by c, coupling one order below OLS") {
    Rng rng(12);
    auto data = random_dataset(5, 500, rng);
    Matrix w = random_w(5, 0.6, rng);
    const double c = 3.7;
    Dataset scaled;
    scaled.X = data.X * c;
    scaled.cov = data.cov * c * c;

    const double s1 = sigma_hat_ev(w, data, 1e-15);
    const double s2 = sigma_hat_ev(w, scaled, 1e-15);
    CHECK(s2 == doctest::Approx(c * s1).epsilon(1e-12));

    // Profiled CoLiDE gradient -(1/sigma_hat) cov (I-W) is degree-1
    // homogeneous in the data scale; OLS is degree-2. The sigma-normalized
    // gradient -(1/sigma_hat^2) cov (I-W) is exactly invariant.
    const Matrix g1 = score_colide_ev(w, s1, data, 0.0).grad_w;
    const Matrix g2 = score_colide_ev(w, s2, scaled, 0.0).grad_w;
    CHECK((g2 - c * g1).norm() < 1e-9 * g1.norm());
    CHECK((g2 / s2 - g1 / s1).norm() < 1e-9 * (g1 / s1).norm());

    const Matrix o1 = score_ols_l1(w, data, 0.0).grad_w;
    const Matrix o2 = score_ols_l1(w, scaled, 0.0).grad_w;
    CHECK((o2 - c * c * o1).norm() < 1e-9 * o1.norm());
}
