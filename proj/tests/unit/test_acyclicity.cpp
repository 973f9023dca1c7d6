#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dagsl/acyclicity.hpp"
#include "dagsl/graph.hpp"
#include "oracles.hpp"

using namespace dagsl;

namespace {

Matrix binary_cycle(int d) {
    Matrix w = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) w(i, (i + 1) % d) = 1.0;
    return w;
}

Matrix random_matrix(int d, double scale, Rng& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix w = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) w(i, j) = u(rng);
    return w;
}

Matrix random_dag_matrix(int d, Rng& rng) {
    auto g = random_er_dag(d, std::min(3.0, d - 1.0), rng);
    return assign_weights(g, 0.3, 1.5, WeightSign::mixed, rng);
}

}  // namespace

TEST_CASE("expm matches an eigendecomposition oracle on symmetric matrices") {
    Rng rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 7);
        Matrix a = random_matrix(d, 1.5, rng);
        a = ((a + a.transpose()) / 2.0).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        const Matrix oracle = es.eigenvectors() *
                              es.eigenvalues().array().exp().matrix().asDiagonal() *
                              es.eigenvectors().transpose();
        CHECK((expm(a) - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("h_expm: DAG zero set and exact cycle values") {
    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(std::abs(h_expm(random_dag_matrix(8, rng)).value) < 1e-10);

    // 2-cycle: eigenvalues of W∘W are ±1, so tr e^{W∘W} = 2 cosh(1).
    CHECK(h_expm(binary_cycle(2)).value ==
          doctest::Approx(2.0 * std::cosh(1.0) - 2.0).epsilon(1e-10));

    // 3-cycle: cube roots of unity give e + 2 e^{-1/2} cos(sqrt(3)/2) - 3.
    const double exact = std::exp(1.0) +
                         2.0 * std::exp(-0.5) * std::cos(std::sqrt(3.0) / 2.0) - 3.0;
    CHECK(exact == doctest::Approx(0.5043).epsilon(1e-4));
    CHECK(h_expm(binary_cycle(3)).value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("h_poly: DAG zero set and direct expansion oracles") {
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(std::abs(h_poly(random_dag_matrix(8, rng)).value) < 1e-10);

    // d=2 cycle: tr((I + A/2)^2) - 2 = 1/2.
    CHECK(h_poly(binary_cycle(2)).value == doctest::Approx(0.5).epsilon(1e-12));
    // d=3 cycle: tr((I + A/3)^3) - 3 = 1/9.
    CHECK(h_poly(binary_cycle(3)).value ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("h_ldet: domain, value oracle, boundary") {
    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        auto eval = h_ldet(random_dag_matrix(8, rng), 0.5 + 0.5 * (rep % 3));
        REQUIRE(eval.has_value());
        CHECK(std::abs(eval->value) < 1e-10);
    }

    // det(2I - A) = 3 for the binary 2-cycle.
    auto e2 = h_ldet(binary_cycle(2), 2.0);
    REQUIRE(e2.has_value());
    CHECK(e2->value == doctest::Approx(2.0 * std::log(2.0) - std::log(3.0))
                           .epsilon(1e-12));

    CHECK(!h_ldet(binary_cycle(2), 1.0).has_value());  // rho(W∘W) = 1 boundary
    CHECK_THROWS_AS(h_ldet(binary_cycle(2), 0.0), std::invalid_argument);
}

TEST_CASE("h_ldet_nonneg: domain, series identity, sign rejection") {
    auto e2 = h_ldet_nonneg(binary_cycle(2), 2.0);
    REQUIRE(e2.has_value());
    CHECK(e2->value ==
          doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));  // ln(4/3)

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 1) = -0.1;
    CHECK(!h_ldet_nonneg(neg, 2.0).has_value());

    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_er_dag(8, 3.0, rng);
        Matrix w = assign_weights(g, 0.3, 1.0, WeightSign::nonneg, rng);
        auto eval = h_ldet_nonneg(w, 1.0);
        REQUIRE(eval.has_value());
        CHECK(std::abs(eval->value) < 1e-10);
    }
}

TEST_CASE("series identity: h_ldet_nonneg equals the truncated trace series") {
    Rng rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 3 + static_cast<int>(rng() % 6);
        const double s = 0.5 + u(rng);
        Matrix w = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) w(i, j) = u(rng);
        // Scale into rho(W) <= 0.9 s.
        const double rho = spectral_radius(w);
        if (rho > 0.0) w *= 0.9 * s * u(rng) / rho;

        auto eval = h_ldet_nonneg(w, s);
        REQUIRE(eval.has_value());

        double series = 0.0;
        Matrix wk = Matrix::Identity(d, d);
        for (int k = 1; k < 500; ++k) {
            wk = wk * w;
            const double term = wk.trace() / (k * std::pow(s, k));
            series += term;
            if (k > 4 && std::abs(term) < 1e-12) break;
        }
        CHECK(std::abs(eval->value - series) <= 1e-8);
    }
}

TEST_CASE("s-monotonicity: smaller s penalizes cycles harder") {
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Matrix w = binary_cycle(4) * 0.3;
    w(0, 2) = u(rng) * 0.2;
    const double rho = spectral_radius(w);
    const double s1 = rho * 1.5, s2 = rho * 3.0;
    auto a = h_ldet_nonneg(w, s1);
    auto b = h_ldet_nonneg(w, s2);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->value > b->value);
}

TEST_CASE("gradients match central finite differences") {
    Rng rng(8);
    const int d = 6;
    int checked = 0;
    while (checked < 25) {
        Matrix w = random_matrix(d, 0.8, rng);

        auto he = h_expm(w);
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [](const Matrix& m) { return h_expm(m).value; }, w),
                  he.gradient) <= 1e-5);

        auto hp = h_poly(w);
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [](const Matrix& m) { return h_poly(m).value; }, w),
                  hp.gradient) <= 1e-5);

        const double s = spectral_radius(w.cwiseProduct(w)) + 0.5;
        auto hl = h_ldet(w, s);
        REQUIRE(hl.has_value());
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [s](const Matrix& m) { return h_ldet(m, s).value().value; },
                      w),
                  hl->gradient) <= 1e-5);

        // Keep entries well above the finite-difference step so probes stay
        // inside the nonnegative orthant.
        Matrix wpos = w.cwiseAbs() + Matrix::Constant(d, d, 0.01);
        wpos.diagonal().setZero();
        const double sp = spectral_radius(wpos) + 0.5;
        auto hn = h_ldet_nonneg(wpos, sp);
        REQUIRE(hn.has_value());
        Matrix hn_offdiag = hn->gradient;
        hn_offdiag.diagonal().setZero();  // solvers exclude the diagonal
        CHECK(oracles::rel_error(
                  oracles::fd_gradient(
                      [sp](const Matrix& m) {
                          return h_ldet_nonneg(m, sp).value().value;
                      },
                      wpos),
                  hn_offdiag) <= 1e-5);
        ++checked;
    }
}

TEST_CASE("Hadamard gradients vanish at DAGs; the nonneg gradient does not") {
    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_er_dag(8, 3.0, rng);
        Matrix w = assign_weights(g, 0.3, 1.0, WeightSign::nonneg, rng);
        CHECK(h_expm(w).gradient.cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0).epsilon(1e-12));
        auto hl = h_ldet(w, 1.0);
        REQUIRE(hl.has_value());
        CHECK(hl->gradient.cwiseAbs().maxCoeff() < 1e-12);
        auto hn = h_ldet_nonneg(w, 1.0);
        REQUIRE(hn.has_value());
        CHECK(hn->gradient.cwiseAbs().maxCoeff() > 0.1);
    }
}

TEST_CASE("zero-level-set census over random DAGs and cyclic digraphs") {
    Rng rng(10);
    int dags = 0, cyclic = 0;
    while (dags < 120) {
        const int d = 3 + static_cast<int>(rng() % 28);
        Matrix w = random_dag_matrix(d, rng);
        CHECK(std::abs(h_expm(w).value) < 1e-9);
        CHECK(std::abs(h_poly(w).value) < 1e-9);
        auto hl = h_ldet(w, 1.0);
        REQUIRE(hl.has_value());
        CHECK(std::abs(hl->value) < 1e-9);
        auto hn = h_ldet_nonneg(w.cwiseAbs(), 1.0);
        REQUIRE(hn.has_value());
        CHECK(std::abs(hn->value) < 1e-9);
        ++dags;
    }
    while (cyclic < 120) {
        const int d = 3 + static_cast<int>(rng() % 10);
        Matrix w = random_matrix(d, 1.0, rng);
        if (is_dag(w)) continue;
        CHECK(h_expm(w).value > 0.0);
        CHECK(h_poly(w).value > 0.0);
        const double s_had = spectral_radius(w.cwiseProduct(w)) * 1.2 + 0.1;
        auto hl = h_ldet(w, s_had);
        if (hl) CHECK(hl->value > 0.0);
        Matrix wp = w.cwiseAbs();
        auto hn = h_ldet_nonneg(wp, spectral_radius(wp) * 1.2 + 0.1);
        if (hn) CHECK(hn->value > 0.0);
        ++cyclic;
    }
}

TEST_CASE("spectral_radius: pinned values") {
    CHECK(spectral_radius(Matrix::Zero(4, 4)) == 0.0);
    CHECK(spectral_radius(binary_cycle(2)) == doctest::Approx(1.0).epsilon(1e-8));
    Matrix upper = Matrix::Zero(4, 4);
    upper(0, 1) = 3.0;
    upper(1, 3) = -2.0;
    upper(0, 2) = 1.0;
    CHECK(spectral_radius(upper) < 1e-8);

    // Sign-symmetric spectrum (eigenvalues ±1): the shift keeps the
    // iteration from oscillating.
    Matrix osc = Matrix::Zero(2, 2);
    osc(0, 1) = 2.0;
    osc(1, 0) = 0.5;
    CHECK(spectral_radius(osc) == doctest::Approx(1.0).epsilon(1e-8));
}
