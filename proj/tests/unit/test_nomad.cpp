#include <doctest.h>

#include "dagsl/nomad.hpp"
#include "dagsl/graph.hpp"
#include "dagsl/metrics.hpp"
#include "oracles.hpp"

using namespace dagsl;

namespace {

Dataset nonneg_sem_data(int d, double mean_degree, long n, uint64_t seed,
                        Matrix* w_out) {
    Rng rng(seed);
    auto g = random_er_dag(d, mean_degree, rng);
    Matrix w = assign_weights(g, 0.25, 1.0, WeightSign::nonneg, rng);
    if (w_out) *w_out = w;
    return sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, d), n, rng);
}

}  // namespace

TEST_CASE("augmented_lagrangian: degenerate and domain cases") {
    Rng rng(1);
    Matrix w;
    auto data = nonneg_sem_data(5, 2.0, 500, 2, &w);

    // Acyclic W: both penalty terms vanish, L = S_+.
    auto at_dag = augmented_lagrangian(w, 3.0, 7.0, data, 0.1, 1.2);
    REQUIRE(at_dag.has_value());
    CHECK(at_dag->value ==
          doctest::Approx(score_nonneg(w, data, 0.1).value).epsilon(1e-9));

    // alpha = c = 0 collapses to the score for any in-domain W.
    Matrix cyc = Matrix::Zero(5, 5);
    cyc(0, 1) = cyc(1, 0) = 0.4;
    auto plain = augmented_lagrangian(cyc, 0.0, 0.0, data, 0.1, 1.2);
    REQUIRE(plain.has_value());
    CHECK(plain->value ==
          doctest::Approx(score_nonneg(cyc, data, 0.1).value).epsilon(1e-12));

    // Out of domain: negative entry, or rho(W) >= s.
    Matrix neg = Matrix::Zero(5, 5);
    neg(0, 1) = -0.1;
    CHECK(!augmented_lagrangian(neg, 0.0, 1.0, data, 0.1, 1.2).has_value());
    Matrix big = Matrix::Zero(5, 5);
    big(0, 1) = big(1, 0) = 2.0;
    CHECK(!augmented_lagrangian(big, 0.0, 1.0, data, 0.1, 1.2).has_value());
}

TEST_CASE("augmented_lagrangian gradient matches finite differences") {
    Rng rng(3);
    auto data = nonneg_sem_data(5, 2.0, 400, 4, nullptr);
    std::uniform_real_distribution<double> u(0.02, 0.4);
    int reps = 0;
    while (reps < 20) {
        Matrix w = Matrix::Zero(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (i != j) w(i, j) = u(rng);
        const double s = spectral_radius(w) + 0.6;
        const double alpha = u(rng) * 4.0, c = u(rng) * 10.0;
        auto eval = augmented_lagrangian(w, alpha, c, data, 0.1, s);
        REQUIRE(eval.has_value());
        Matrix grad_offdiag = eval->grad;  // fit path zeroes the diagonal
        auto fd = oracles::fd_gradient(
            [&](const Matrix& m) {
                return augmented_lagrangian(m, alpha, c, data, 0.1, s)->value;
            },
            w);
        CHECK(oracles::rel_error(fd, grad_offdiag) <= 1e-5);
        ++reps;
    }
}

TEST_CASE("fit_nomad: two-node exact recovery") {
    Matrix truth = Matrix::Zero(2, 2);
    truth(0, 1) = 1.0;
    Rng rng(5);
    auto data = sample_linear_sem(
        truth, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, 2), 10000, rng);
    MomConfig mom;
    auto fit = fit_nomad(data, 0.01, 1.1, mom, 0.1);
    CHECK(BinaryDag::support_of(fit.W).edges ==
          std::set<std::pair<int, int>>{{0, 1}});
    CHECK(fit.W(0, 1) == doctest::Approx(1.0).epsilon(0.05));

    // Exhaustive 2-node DAG scoring oracle: truth support scores best.
    Matrix fwd = Matrix::Zero(2, 2);
    fwd(0, 1) = std::max(0.0, data.cov(0, 1) / data.cov(0, 0));
    Matrix rev = Matrix::Zero(2, 2);
    rev(1, 0) = std::max(0.0, data.cov(0, 1) / data.cov(1, 1));
    const double sc_fwd = score_nonneg(fwd, data, 0.0).value;
    const double sc_rev = score_nonneg(rev, data, 0.0).value;
    const double sc_empty = score_nonneg(Matrix::Zero(2, 2), data, 0.0).value;
    CHECK(sc_fwd < sc_rev);
    CHECK(sc_fwd < sc_empty);
}

TEST_CASE("fit_nomad: invariants along the outer path") {
    Matrix w;
    auto data = nonneg_sem_data(10, 3.0, 4000, 6, &w);
    MomConfig mom;
    auto fit = fit_nomad(data, 0.01, 1.1, mom, 0.1);

    // Output is nonnegative, zero-diagonal, acyclic.
    CHECK(fit.W_raw.minCoeff() >= 0.0);
    CHECK(fit.W_raw.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(is_dag(fit.W));
    CHECK(spectral_radius(fit.W_raw) < 1.1);

    // Penalty never decreases; dual step direction equals the residual.
    REQUIRE(!fit.trace.empty());
    for (size_t k = 1; k < fit.trace.size(); ++k) {
        CHECK(fit.trace[k].penalty_c >= fit.trace[k - 1].penalty_c);
        const double dual_step =
            fit.trace[k].alpha - fit.trace[k - 1].alpha;
        // alpha_{k+1} - alpha_k = c_k * H_k exactly.
        CHECK(dual_step ==
              doctest::Approx(fit.trace[k - 1].penalty_c *
                              fit.trace[k - 1].h_value)
                  .epsilon(1e-12));
    }
    if (fit.converged)
        CHECK(fit.trace.back().h_value < mom.eps_h);
}

TEST_CASE("KKT nondegeneracy: H_+ gradient alive at DAGs, Hadamard gradient dead") {
    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_er_dag(8, 3.0, rng);
        Matrix w = assign_weights(g, 0.3, 1.0, WeightSign::nonneg, rng);
        auto hn = h_ldet_nonneg(w, 1.5);
        auto hl = h_ldet(w, 1.5);
        REQUIRE(hn.has_value());
        REQUIRE(hl.has_value());
        CHECK(hn->gradient.cwiseAbs().maxCoeff() > 0.05);
        CHECK(hl->gradient.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("default_s_nonneg stays above 1 and admits the LS positive part") {
    auto data = nonneg_sem_data(10, 3.0, 2000, 11, nullptr);
    const double s = default_s_nonneg(data);
    CHECK(s >= 1.0);
    CHECK(s < 10.0);
}

TEST_CASE("fit_nomad_svarm: degenerate zero lags reduce to the iid fit") {
    Matrix w;
    Rng rng(13);
    auto g = random_er_dag(8, 2.0, rng);
    w = assign_weights(g, 0.3, 1.0, WeightSign::nonneg, rng);
    std::vector<Matrix> lags{Matrix::Zero(8, 8), Matrix::Zero(8, 8)};
    auto ts = sample_svarm(w, lags, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, 8),
                           4000, 100, rng);
    MomConfig mom;
    auto sv = fit_nomad_svarm(ts, 2, 0.01, 0.01, 1.1, mom, 0.1);

    // Lag estimates vanish (below the support threshold).
    for (const auto& a : sv.lags) CHECK(a.cwiseAbs().maxCoeff() < 0.1);

    // F1 parity within one edge of the iid fit on the same columns.
    Dataset iid(ts.X);
    auto flat = fit_nomad(iid, 0.01, 1.1, mom, 0.1);
    const double f1_sv = evaluate(sv.W, w).f1;
    const double f1_iid = evaluate(flat.W, w).f1;
    CHECK(std::abs(f1_sv - f1_iid) < 0.15);
    CHECK(f1_sv > 0.85);
}

TEST_CASE("fit_nomad_svarm: scalar AR(1) lag coefficient recovered") {
    const double a = 0.6;
    Matrix w = Matrix::Zero(1, 1);
    std::vector<Matrix> lags{Matrix::Constant(1, 1, a)};
    Rng rng(17);
    auto ts = sample_svarm(w, lags, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, 1),
                           100000, 500, rng);
    MomConfig mom;
    auto sv = fit_nomad_svarm(ts, 1, 0.0, 0.0, 1.1, mom, 0.0);
    REQUIRE(sv.lags.size() == 1);
    CHECK(sv.lags[0](0, 0) == doctest::Approx(a).epsilon(0.05));
}

TEST_CASE("fit_nomad_svarm: too-short series rejected") {
    TimeSeries ts;
    ts.X = Matrix::Zero(4, 3);
    ts.tau_max = 2;
    MomConfig mom;
    CHECK_THROWS_AS(fit_nomad_svarm(ts, 3, 0.01, 0.01, 1.1, mom, 0.1),
                    std::invalid_argument);
}

TEST_CASE("fit_nomad tolerates negative data values (constraint is on W)") {
    // Mixed-sign truth: misspecified for NOMAD but must run and return a DAG.
    Rng rng(19);
    auto g = random_er_dag(6, 2.0, rng);
    Matrix w = assign_weights(g, 0.5, 1.5, WeightSign::mixed, rng);
    auto data = sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, 6), 2000, rng);
    CHECK(data.X.minCoeff() < 0.0);
    MomConfig mom;
    auto fit = fit_nomad(data, 0.01, 1.1, mom, 0.1);
    CHECK(is_dag(fit.W));
    CHECK(fit.W_raw.minCoeff() >= 0.0);
}
