#include "aqec/recovery.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aqec {

static void check_noise_domain(const SubsystemCode& code, const KrausChannel& noise) {
    if (noise.dim_in() != code.d_h)
        throw std::invalid_argument("recovery: noise input dimension " +
                                    std::to_string(noise.dim_in()) + " != code d_h " +
                                    std::to_string(code.d_h));
    const double diff = (noise.domain - code_projector(code)).norm();
    if (diff > 1e-8)
        throw std::invalid_argument(
            "recovery: noise domain projector differs from the code projector by " +
            std::to_string(diff) + "; restrict the channel to the code first");
}

KrausChannel transpose_channel(const SubsystemCode& code, const KrausChannel& noise) {
    check_noise_domain(code, noise);
    const Mat proj = code_projector(code);
    const Mat ep = apply_channel(noise, proj);
    if (ep.norm() <= 1e-14)
        throw std::invalid_argument("transpose_channel: E(P) is numerically zero");
    const Mat s = inv_sqrt_on_support(ep);
    KrausChannel rec;
    rec.kraus.reserve(noise.kraus.size());
    for (const Mat& e : noise.kraus) rec.kraus.push_back(proj * e.adjoint() * s);
    rec.domain = support_projector(ep);
    return rec;
}

KrausChannel state_dependent_transpose(const SubsystemCode& code, const KrausChannel& noise,
                                       const Mat& phi_b) {
    check_noise_domain(code, noise);
    if (phi_b.rows() != code.d_b || phi_b.cols() != code.d_b)
        throw std::invalid_argument("state_dependent_transpose: phi_b must be d_b square");
    auto es = hermitian_eig(phi_b, 1e-9);
    if (es.eigenvalues.minCoeff() < -1e-9 || std::abs(phi_b.trace().real() - 1.0) > 1e-9)
        throw std::invalid_argument("state_dependent_transpose: phi_b is not a density matrix");
    const Mat ref = embed_ab(code, tensor(Mat::Identity(code.d_a, code.d_a), phi_b));
    const Mat eref = apply_channel(noise, ref);
    if (eref.norm() <= 1e-14)
        throw std::invalid_argument("state_dependent_transpose: E(P_A (x) phi_B) is numerically zero");
    const Mat s = inv_sqrt_on_support(eref);
    const Mat w = embed_ab(code, tensor(Mat::Identity(code.d_a, code.d_a), sqrt_psd(phi_b)));
    KrausChannel rec;
    rec.kraus.reserve(noise.kraus.size());
    for (const Mat& e : noise.kraus) rec.kraus.push_back(w * e.adjoint() * s);
    rec.domain = support_projector(eref);
    return rec;
}

ResidualDecomposition residuals(const SubsystemCode& code, const KrausChannel& noise,
                                ExecMode mode) {
    check_noise_domain(code, noise);
    const Mat proj = code_projector(code);
    const Mat s = inv_sqrt_on_support(apply_channel(noise, proj));
    const int n = noise.size();
    const int d_a = code.d_a, d_b = code.d_b;
    const Mat& v = code.embedding;

    ResidualDecomposition res;
    res.n = n;
    res.d_a = d_a;
    res.d_b = d_b;

    struct Pair {
        Mat b, delta;
    };
    auto grid = map_index<Pair>(mode, n * n, [&](int idx) {
        const int i = idx / n, j = idx % n;
        const Mat m = v.adjoint() * noise.kraus[i].adjoint() * s * noise.kraus[j] * v;
        Mat b = partial_trace_a(m, d_a, d_b) / static_cast<double>(d_a);
        Mat delta = m - tensor(Mat::Identity(d_a, d_a), b);
        return Pair{std::move(b), std::move(delta)};
    });

    res.b_ops.reserve(grid.size());
    res.deltas.reserve(grid.size());
    Mat sum = Mat::Zero(code.d_ab(), code.d_ab());
    for (auto& pr : grid) {
        sum += pr.delta.adjoint() * pr.delta;
        res.max_delta_fro = std::max(res.max_delta_fro, pr.delta.norm());
        res.b_ops.push_back(std::move(pr.b));
        res.deltas.push_back(std::move(pr.delta));
    }
    res.sum_delta_norm = operator_norm(sum);
    return res;
}

std::pair<bool, ResidualDecomposition> check_perfect_form_a(const SubsystemCode& code,
                                                            const KrausChannel& noise, double tol) {
    ResidualDecomposition res = residuals(code, noise);
    return {res.max_delta_fro <= tol, std::move(res)};
}

FormBResult check_perfect_form_b(const SubsystemCode& code, const KrausChannel& noise, double tol) {
    check_noise_domain(code, noise);
    const int n = noise.size();
    const Mat& v = code.embedding;
    FormBResult out;
    out.n = n;
    out.b_prime.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat m = v.adjoint() * noise.kraus[i].adjoint() * noise.kraus[j] * v;
            Mat b = partial_trace_a(m, code.d_a, code.d_b) / static_cast<double>(code.d_a);
            const double resid = (m - tensor(Mat::Identity(code.d_a, code.d_a), b)).norm();
            out.max_residual_fro = std::max(out.max_residual_fro, resid);
            out.b_prime.push_back(std::move(b));
        }
    out.ok = out.max_residual_fro <= tol;
    return out;
}

CanonicalKraus canonicalize(const SubsystemCode& code, const KrausChannel& noise) {
    FormBResult fb = check_perfect_form_b(code, noise, 1e-8);
    if (!fb.ok)
        throw std::invalid_argument(
            "canonicalize: channel is not perfectly correctable on this code "
            "(max residual " +
            std::to_string(fb.max_residual_fro) + " > 1e-8)");
    const int n = noise.size(), d_a = code.d_a, d_b = code.d_b;
    const int dim = n * d_b;

    // lambda_(is)(jt) = <s| B'_ij |t>, Hermitian and PSD.
    Mat lambda(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < d_b; ++s)
            for (int j = 0; j < n; ++j)
                for (int t = 0; t < d_b; ++t)
                    lambda(i * d_b + s, j * d_b + t) = fb.b(i, j)(s, t);
    auto es = hermitian_eig(lambda, 1e-10);

    // E_(i,s) = E_i V (I_A (x) |s>), a d_h x d_a block.
    std::vector<Mat> e_blocks(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < d_b; ++s) {
            Mat sel = Mat::Zero(code.d_ab(), d_a);  // |a> -> |a>|s>
            for (int a = 0; a < d_a; ++a) sel(a * d_b + s, a) = 1.0;
            e_blocks[static_cast<std::size_t>(i) * d_b + s] = noise.kraus[i] * code.embedding * sel;
        }

    CanonicalKraus out;
    std::vector<double> kept;
    for (int alpha = 0; alpha < dim; ++alpha) {
        const double d_val = es.eigenvalues(alpha);
        if (d_val <= 1e-12) continue;
        Mat f = Mat::Zero(code.d_h, d_a);
        for (int beta = 0; beta < dim; ++beta) f += es.eigenvectors(beta, alpha) * e_blocks[beta];
        // Polar part of F = sqrt(d) V via thin SVD.
        Eigen::JacobiSVD<Mat> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Mat iso = svd.matrixU() * svd.matrixV().adjoint();
        out.isometries.push_back(iso);
        out.projectors.push_back(iso * iso.adjoint());
        kept.push_back(d_val);
    }
    out.d_vals = Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));

    // Internal consistency: the sector sums must reproduce E(P) and its
    // inverse square root.
    const Mat ep = apply_channel(noise, code_projector(code));
    Mat recon = Mat::Zero(code.d_h, code.d_h);
    Mat recon_inv = Mat::Zero(code.d_h, code.d_h);
    for (std::size_t k = 0; k < out.projectors.size(); ++k) {
        recon += out.d_vals(static_cast<Eigen::Index>(k)) * out.projectors[k];
        recon_inv += out.projectors[k] / std::sqrt(out.d_vals(static_cast<Eigen::Index>(k)));
    }
    if ((recon - ep).norm() > 1e-9)
        throw std::runtime_error("canonicalize: sector reconstruction of E(P) failed (defect " +
                                 std::to_string((recon - ep).norm()) + ")");
    if ((recon_inv - inv_sqrt_on_support(ep)).norm() > 1e-8)
        throw std::runtime_error("canonicalize: sector reconstruction of E(P)^{-1/2} failed");
    return out;
}

}  // namespace aqec
