#include "aqec/operator_core.hpp"

#include <stdexcept>
#include <string>

namespace aqec {

Mat identity(int d) { return Mat::Identity(d, d); }

Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

static void check_bipartite_dims(const Mat& m, int d_a, int d_b) {
    const Eigen::Index d = static_cast<Eigen::Index>(d_a) * d_b;
    if (d_a <= 0 || d_b <= 0 || m.rows() != d || m.cols() != d)
        throw std::invalid_argument("partial trace: operator is " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ", expected " + std::to_string(d) + "x" + std::to_string(d));
}

Mat partial_trace_b(const Mat& m, int d_a, int d_b) {
    check_bipartite_dims(m, d_a, d_b);
    Mat out = Mat::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
        for (int j = 0; j < d_a; ++j)
            for (int k = 0; k < d_b; ++k)
                out(i, j) += m(i * d_b + k, j * d_b + k);
    return out;
}

Mat partial_trace_a(const Mat& m, int d_a, int d_b) {
    check_bipartite_dims(m, d_a, d_b);
    Mat out = Mat::Zero(d_b, d_b);
    for (int i = 0; i < d_b; ++i)
        for (int j = 0; j < d_b; ++j)
            for (int k = 0; k < d_a; ++k)
                out(i, j) += m(k * d_b + i, k * d_b + j);
    return out;
}

bool is_hermitian(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

HermitianEigenSystem hermitian_eig(const Mat& m, double herm_tol) {
    if (!is_hermitian(m, herm_tol))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
    Mat sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    // Eigen returns ascending order; flip to descending.
    const Eigen::Index n = sym.rows();
    HermitianEigenSystem es;
    es.eigenvalues.resize(n);
    es.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        es.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        es.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return es;
}

Mat inv_sqrt_on_support(const Mat& m, double rel_tol) {
    auto es = hermitian_eig(m, 1e-10);
    const double lmax = es.eigenvalues.size() ? es.eigenvalues(0) : 0.0;
    const double cut = rel_tol * std::max(lmax, 0.0);
    Mat out = Mat::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
        const double lam = es.eigenvalues(k);
        if (lam > cut && lam > 0.0)
            out += (1.0 / std::sqrt(lam)) * es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
    }
    return out;
}

Mat sqrt_psd(const Mat& m, double herm_tol) {
    auto es = hermitian_eig(m, herm_tol);
    Mat out = Mat::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
        const double lam = es.eigenvalues(k);
        if (lam > 0.0)
            out += std::sqrt(lam) * es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
    }
    return out;
}

Mat support_projector(const Mat& m, double rel_tol) {
    auto es = hermitian_eig(m, 1e-10);
    const double lmax = es.eigenvalues.size() ? es.eigenvalues(0) : 0.0;
    const double cut = rel_tol * std::max(lmax, 0.0);
    Mat out = Mat::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k)
        if (es.eigenvalues(k) > cut && es.eigenvalues(k) > 0.0)
            out += es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
    return out;
}

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double trace_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

static void check_state(const Mat& rho, const char* name) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument(std::string("fidelity: ") + name + " is not square");
    auto es = hermitian_eig(rho, 1e-9);
    if (es.eigenvalues.minCoeff() < -1e-9)
        throw std::invalid_argument(std::string("fidelity: ") + name +
                                    " has a negative eigenvalue below -1e-9");
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
        throw std::invalid_argument(std::string("fidelity: ") + name + " does not have unit trace");
}

double fidelity_sub(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("fidelity: dimension mismatch");
    Mat s = sqrt_psd(0.5 * (rho + rho.adjoint()));
    Mat inner = s * (0.5 * (sigma + sigma.adjoint())) * s;
    auto es = hermitian_eig(0.5 * (inner + inner.adjoint()), 1e-8);
    double f = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k)
        if (es.eigenvalues(k) > 0.0) f += std::sqrt(es.eigenvalues(k));
    return f;
}

double fidelity(const Mat& rho, const Mat& sigma) {
    check_state(rho, "rho");
    check_state(sigma, "sigma");
    return fidelity_sub(rho, sigma);
}

double fidelity_pure(const Vec& psi, const Mat& sigma) {
    if (psi.size() != sigma.rows() || sigma.rows() != sigma.cols())
        throw std::invalid_argument("fidelity_pure: dimension mismatch");
    const double overlap = std::real(psi.dot(sigma * psi));
    return std::sqrt(std::max(overlap, 0.0));
}

Mat gaussian_matrix(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Cplx(rng.gaussian(), rng.gaussian());
    return m;
}

Vec haar_state(int dim, Rng& rng) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cplx(rng.gaussian(), rng.gaussian());
    return v / v.norm();
}

Mat haar_isometry(int rows, int cols, Rng& rng) {
    if (rows < cols) throw std::invalid_argument("haar_isometry: rows < cols");
    Mat g = gaussian_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(rows, cols);
    // Fix the phase convention so the result is a deterministic function of g.
    Mat r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
    for (int j = 0; j < cols; ++j) {
        Cplx d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

Mat haar_unitary(int d, Rng& rng) { return haar_isometry(d, d, rng); }

Mat random_density(int d, Rng& rng) {
    Mat g = gaussian_matrix(d, d, rng);
    Mat rho = g * g.adjoint();
    return rho / rho.trace();
}

}  // namespace aqec
