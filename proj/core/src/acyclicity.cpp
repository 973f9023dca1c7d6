#include "dagsl/acyclicity.hpp"

#include "dagsl/graph.hpp"

#include <Eigen/LU>

#include <cmath>

namespace dagsl {

namespace {

// Pade numerator/denominator split: after each helper, the approximant is
// (V + U)^{-1}... solved as (V - U) X = (V + U) below. Coefficients and
// degree thresholds follow Higham's 2005 scaling-and-squaring analysis.
void pade3(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
    static const double b[] = {120., 60., 12., 1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u.noalias() = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
    static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a4 = a2 * a2;
    u.noalias() = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
    static const double b[] = {17297280., 8648640., 1995840., 277200.,
                               25200.,    1512.,    56.,      1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    u.noalias() = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
    static const double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                               30270240.,    2162160.,    110880.,     3960.,
                               90.,          1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix a8 = a6 * a2;
    u.noalias() = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    u.noalias() = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                       b[5] * a4 + b[3] * a2 + b[1] * id);
    v.noalias() = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                  b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& a_in) {
    const double theta3 = 1.495585217958292e-2;
    const double theta5 = 2.539398330063230e-1;
    const double theta7 = 9.504178996162932e-1;
    const double theta9 = 2.097847961257068e0;
    const double theta13 = 5.371920351148152e0;

    Matrix a = a_in;
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = std::max(0, static_cast<int>(
                                    std::ceil(std::log2(norm1 / theta13))));
        a /= std::pow(2.0, squarings);
    }

    Matrix u, v;
    const Matrix a2 = a * a;
    if (norm1 <= theta3)
        pade3(a, a2, u, v);
    else if (norm1 <= theta5)
        pade5(a, a2, u, v);
    else if (norm1 <= theta7)
        pade7(a, a2, u, v);
    else if (norm1 <= theta9)
        pade9(a, a2, u, v);
    else
        pade13(a, a2, u, v);

    Matrix result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

AcyclicityEval h_expm(const Matrix& w) {
    const int d = static_cast<int>(w.rows());
    const Matrix e = expm(w.cwiseProduct(w));
    AcyclicityEval out;
    out.value = e.trace() - d;
    out.gradient = 2.0 * w.cwiseProduct(e.transpose());
    return out;
}

AcyclicityEval h_poly(const Matrix& w) {
    const int d = static_cast<int>(w.rows());
    const Matrix base =
        Matrix::Identity(d, d) + w.cwiseProduct(w) / static_cast<double>(d);

    // base^(d-1) by binary exponentiation; tr(base^d) then needs only an
    // elementwise product with base^T.
    Matrix pow_dm1 = Matrix::Identity(d, d);
    Matrix sq = base;
    int e = d - 1;
    while (e > 0) {
        if (e & 1) pow_dm1 = pow_dm1 * sq;
        e >>= 1;
        if (e > 0) sq = sq * sq;
    }

    AcyclicityEval out;
    out.value = pow_dm1.cwiseProduct(base.transpose()).sum() - d;
    out.gradient = 2.0 * w.cwiseProduct(pow_dm1.transpose());
    return out;
}

namespace {

std::optional<AcyclicityEval> ldet_eval(const Matrix& w, const Matrix& m_arg,
                                        double s, bool hadamard) {
    const int d = static_cast<int>(w.rows());
    if (spectral_radius(m_arg) >= s) return std::nullopt;

    const Matrix m = s * Matrix::Identity(d, d) - m_arg;
    Eigen::PartialPivLU<Matrix> lu(m);
    double logdet = 0.0;
    int sign = lu.permutationP().determinant();
    for (int i = 0; i < d; ++i) {
        const double piv = lu.matrixLU()(i, i);
        if (piv == 0.0) return std::nullopt;
        if (piv < 0.0) sign = -sign;
        logdet += std::log(std::abs(piv));
    }
    if (sign <= 0) return std::nullopt;

    AcyclicityEval out;
    out.value = d * std::log(s) - logdet;
    const Matrix inv_t = lu.inverse().transpose();
    out.gradient = hadamard ? Matrix(2.0 * w.cwiseProduct(inv_t)) : inv_t;
    return out;
}

}  // namespace

std::optional<AcyclicityEval> h_ldet(const Matrix& w, double s) {
    if (s <= 0.0) throw std::invalid_argument("h_ldet: s must be > 0");
    return ldet_eval(w, w.cwiseProduct(w), s, /*hadamard=*/true);
}

std::optional<AcyclicityEval> h_ldet_nonneg(const Matrix& w, double s) {
    if (s <= 0.0) throw std::invalid_argument("h_ldet_nonneg: s must be > 0");
    if ((w.array() < 0.0).any()) return std::nullopt;
    return ldet_eval(w, w, s, /*hadamard=*/false);
}

double spectral_radius(const Matrix& w) {
    const int d = static_cast<int>(w.rows());
    Matrix a = w.cwiseAbs();
    const double norm1 = a.colwise().sum().maxCoeff();
    if (norm1 == 0.0) return 0.0;
    // Acyclic support means |W| is nilpotent, so the radius is exactly zero;
    // the shifted iteration below would only crawl toward it at a 1/t rate.
    if (is_dag(a)) return 0.0;

    // Diagonal shift: for nonnegative A the Perron root obeys
    // rho(A + cI) = rho(A) + c, and the positive diagonal removes
    // periodicity so the norm-growth iteration cannot oscillate.
    const double shift = 0.05 * norm1;
    a.diagonal().array() += shift;

    const double tol = 1e-10;
    const int cap = 1000;
    Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    double lambda = shift;
    for (int it = 0; it < cap; ++it) {
        Vector av = a * v;
        const double nrm = av.norm();
        if (nrm < 1e-300) return 0.0;
        v = av / nrm;
        if (it > 2 && std::abs(nrm - lambda) <= tol * std::max(1.0, nrm))
            return std::max(0.0, nrm - shift);
        lambda = nrm;
    }
    return std::max(0.0, lambda - shift);
}

}  // namespace dagsl
