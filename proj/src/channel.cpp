#include "aqec/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aqec {

double tp_defect(const KrausChannel& ch) {
    Mat sum = Mat::Zero(ch.dim_in(), ch.dim_in());
    for (const Mat& e : ch.kraus) sum += e.adjoint() * e;
    return (sum - ch.domain).norm();
}

static void check_kraus_dims(const std::vector<Mat>& kraus, const Mat& domain) {
    if (kraus.empty()) throw std::invalid_argument("channel: empty Kraus list");
    const Eigen::Index r = kraus.front().rows(), c = kraus.front().cols();
    for (const Mat& e : kraus)
        if (e.rows() != r || e.cols() != c)
            throw std::invalid_argument("channel: Kraus operators have mixed dimensions");
    if (domain.rows() != c || domain.cols() != c)
        throw std::invalid_argument("channel: domain projector is " + std::to_string(domain.rows()) +
                                    "x" + std::to_string(domain.cols()) + ", expected " +
                                    std::to_string(c) + "x" + std::to_string(c));
}

KrausChannel make_channel(std::vector<Mat> kraus, Mat domain) {
    check_kraus_dims(kraus, domain);
    KrausChannel ch{std::move(kraus), std::move(domain)};
    const double defect = tp_defect(ch);
    if (defect > 1e-9)
        throw std::invalid_argument(
            "channel: sum_i E_i^dag E_i deviates from the domain projector by " +
            std::to_string(defect) + " (Frobenius)");
    return ch;
}

KrausChannel restrict_to(const KrausChannel& ch, const Mat& projector) {
    std::vector<Mat> kraus;
    kraus.reserve(ch.kraus.size());
    for (const Mat& e : ch.kraus) kraus.push_back(e * projector);
    return make_channel(std::move(kraus), projector);
}

KrausChannel identity_channel(int d) {
    return KrausChannel{{Mat::Identity(d, d)}, Mat::Identity(d, d)};
}

Mat apply_channel(const KrausChannel& ch, const Mat& rho) {
    if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in())
        throw std::invalid_argument("apply: state is " + std::to_string(rho.rows()) + "x" +
                                    std::to_string(rho.cols()) + ", channel input dimension is " +
                                    std::to_string(ch.dim_in()));
    Mat out = Mat::Zero(ch.dim_out(), ch.dim_out());
    for (const Mat& e : ch.kraus) out += e * rho * e.adjoint();
    return out;
}

KrausChannel adjoint(const KrausChannel& ch) {
    KrausChannel out;
    out.kraus.reserve(ch.kraus.size());
    for (const Mat& e : ch.kraus) out.kraus.push_back(e.adjoint());
    out.domain = Mat::Identity(ch.dim_out(), ch.dim_out());
    return out;
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
    if (outer.dim_in() != inner.dim_out())
        throw std::invalid_argument("compose: outer input dimension " +
                                    std::to_string(outer.dim_in()) +
                                    " != inner output dimension " +
                                    std::to_string(inner.dim_out()));
    KrausChannel out;
    out.kraus.reserve(outer.kraus.size() * inner.kraus.size());
    for (const Mat& o : outer.kraus)
        for (const Mat& i : inner.kraus) out.kraus.push_back(o * i);
    out.domain = inner.domain;
    return out;
}

KrausChannel prune(const KrausChannel& ch, double thresh) {
    KrausChannel out;
    out.domain = ch.domain;
    for (const Mat& e : ch.kraus)
        if (operator_norm(e) >= thresh) out.kraus.push_back(e);
    if (out.kraus.empty()) out.kraus.push_back(Mat::Zero(ch.dim_out(), ch.dim_in()));
    return out;
}

KrausChannel product_channel(const KrausChannel& fa, const KrausChannel& fb) {
    KrausChannel out;
    out.kraus.reserve(fa.kraus.size() * fb.kraus.size());
    for (const Mat& a : fa.kraus)
        for (const Mat& b : fb.kraus) out.kraus.push_back(tensor(a, b));
    out.domain = tensor(fa.domain, fb.domain);
    return out;
}

ChoiMatrix choi(const KrausChannel& ch) {
    const int din = ch.dim_in(), dout = ch.dim_out();
    ChoiMatrix j;
    j.dim_in = din;
    j.dim_out = dout;
    j.matrix = Mat::Zero(static_cast<Eigen::Index>(din) * dout, static_cast<Eigen::Index>(din) * dout);
    Vec v(static_cast<Eigen::Index>(din) * dout);
    for (const Mat& e : ch.kraus) {
        for (int k = 0; k < din; ++k)
            for (int m = 0; m < dout; ++m) v(static_cast<Eigen::Index>(k) * dout + m) = std::conj(e(m, k));
        j.matrix += v * v.adjoint();
    }
    return j;
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
    if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
        throw std::invalid_argument("choi_distance: channel dimensions differ");
    return (choi(a).matrix - choi(b).matrix).norm();
}

std::vector<Mat> kraus_from_choi(const ChoiMatrix& j, double cut) {
    auto es = hermitian_eig(j.matrix, 1e-8);
    std::vector<Mat> kraus;
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
        const double lam = es.eigenvalues(k);
        if (lam <= cut) continue;
        Mat e(j.dim_out, j.dim_in);
        for (int kin = 0; kin < j.dim_in; ++kin)
            for (int m = 0; m < j.dim_out; ++m)
                e(m, kin) = std::sqrt(lam) *
                            std::conj(es.eigenvectors(static_cast<Eigen::Index>(kin) * j.dim_out + m, k));
        kraus.push_back(std::move(e));
    }
    if (kraus.empty()) kraus.push_back(Mat::Zero(j.dim_out, j.dim_in));
    return kraus;
}

KrausChannel bit_flip_channel(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bit_flip_channel: p outside [0,1]");
    Mat x(2, 2);
    x << 0, 1, 1, 0;
    return make_channel({std::sqrt(1.0 - p) * Mat::Identity(2, 2), std::sqrt(p) * x},
                        Mat::Identity(2, 2));
}

KrausChannel depolarizing_channel(int d, double s) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("depolarizing_channel: s outside [0,1]");
    // Weyl operators X^a Z^b; uniform weight s/d^2 plus (1-s) on the identity.
    const Cplx omega = std::exp(Cplx(0.0, 2.0 * M_PI / d));
    Mat shift = Mat::Zero(d, d), clock = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        shift((k + 1) % d, k) = 1.0;
        clock(k, k) = std::pow(omega, k);
    }
    std::vector<Mat> kraus;
    for (int a = 0; a < d; ++a) {
        Mat xa = Mat::Identity(d, d);
        for (int t = 0; t < a; ++t) xa = shift * xa;
        for (int b = 0; b < d; ++b) {
            Mat zb = Mat::Identity(d, d);
            for (int t = 0; t < b; ++t) zb = clock * zb;
            double w = s / (d * static_cast<double>(d));
            if (a == 0 && b == 0) w += 1.0 - s;
            kraus.push_back(std::sqrt(w) * xa * zb);
        }
    }
    return make_channel(std::move(kraus), Mat::Identity(d, d));
}

KrausChannel amplitude_damping_channel(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("amplitude_damping_channel: gamma outside [0,1]");
    Mat a0(2, 2), a1(2, 2);
    a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    a1 << 0, std::sqrt(gamma), 0, 0;
    return make_channel({a0, a1}, Mat::Identity(2, 2));
}

KrausChannel erase_to_state_channel(const Mat& tau) {
    if (tau.rows() != tau.cols()) throw std::invalid_argument("erase_to_state_channel: tau not square");
    const int d = static_cast<int>(tau.rows());
    auto es = hermitian_eig(tau, 1e-9);
    std::vector<Mat> kraus;
    for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
        const double mu = es.eigenvalues(m);
        if (mu <= 1e-15) continue;
        for (int s = 0; s < d; ++s) {
            Mat e = Mat::Zero(d, d);
            e.col(s) = std::sqrt(mu) * es.eigenvectors.col(m);
            kraus.push_back(std::move(e));
        }
    }
    return make_channel(std::move(kraus), Mat::Identity(d, d));
}

}  // namespace aqec
