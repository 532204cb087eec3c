#include "aqec/code.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

SubsystemCode make_code(int d_a, int d_b, int d_h, Mat embedding) {
    if (d_a < 2 || d_b < 1 || d_h < d_a * d_b)
        throw std::invalid_argument("code: need d_a >= 2, d_b >= 1, d_h >= d_a*d_b");
    if (embedding.rows() != d_h || embedding.cols() != static_cast<Eigen::Index>(d_a) * d_b)
        throw std::invalid_argument("code: embedding must be d_h x (d_a*d_b)");
    const double defect =
        (embedding.adjoint() * embedding - Mat::Identity(d_a * d_b, d_a * d_b)).norm();
    if (defect > 1e-10)
        throw std::invalid_argument("code: embedding is not an isometry (defect " +
                                    std::to_string(defect) + ")");
    return SubsystemCode{d_a, d_b, d_h, std::move(embedding)};
}

SubsystemCode trivial_code(int d_a, int d_b) {
    return SubsystemCode{d_a, d_b, d_a * d_b, Mat::Identity(d_a * d_b, d_a * d_b)};
}

SubsystemCode random_code(int d_a, int d_b, int d_h, Rng& rng) {
    return make_code(d_a, d_b, d_h, haar_isometry(d_h, d_a * d_b, rng));
}

Mat code_projector(const SubsystemCode& code) {
    return code.embedding * code.embedding.adjoint();
}

static void check_density(const Mat& rho, const char* name) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument(std::string("code state: ") + name + " is not square");
    auto es = hermitian_eig(rho, 1e-10);
    if (es.eigenvalues.minCoeff() < -1e-10)
        throw std::invalid_argument(std::string("code state: ") + name + " is not PSD");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument(std::string("code state: ") + name + " does not have unit trace");
}

CodeState make_code_state(Mat rho_a, Mat rho_b) {
    check_density(rho_a, "rho_a");
    check_density(rho_b, "rho_b");
    return CodeState{std::move(rho_a), std::move(rho_b)};
}

CodeState maximally_mixed_b_state(const SubsystemCode& code, Mat rho_a) {
    return make_code_state(std::move(rho_a),
                           Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b));
}

Mat embed(const SubsystemCode& code, const CodeState& s) {
    if (s.rho_a.rows() != code.d_a || s.rho_b.rows() != code.d_b)
        throw std::invalid_argument("embed: code state dimensions do not match the code");
    return code.embedding * tensor(s.rho_a, s.rho_b) * code.embedding.adjoint();
}

Mat embed_ab(const SubsystemCode& code, const Mat& x_ab) {
    if (x_ab.rows() != code.d_ab() || x_ab.cols() != code.d_ab())
        throw std::invalid_argument("embed_ab: operator must be (d_a*d_b) square");
    return code.embedding * x_ab * code.embedding.adjoint();
}

Mat decode_ab(const SubsystemCode& code, const Mat& y) {
    if (y.rows() != code.d_h || y.cols() != code.d_h)
        throw std::invalid_argument("decode_ab: operator must be d_h square");
    return code.embedding.adjoint() * y * code.embedding;
}

Vec embed_pure(const SubsystemCode& code, const Vec& psi_a, const Vec& phi_b) {
    if (psi_a.size() != code.d_a || phi_b.size() != code.d_b)
        throw std::invalid_argument("embed_pure: state dimensions do not match the code");
    Vec chi(code.d_ab());
    for (int a = 0; a < code.d_a; ++a)
        for (int b = 0; b < code.d_b; ++b) chi(a * code.d_b + b) = psi_a(a) * phi_b(b);
    return code.embedding * chi;
}

Mat logical_state_a(const SubsystemCode& code, const Mat& rho) {
    return partial_trace_b(decode_ab(code, rho), code.d_a, code.d_b);
}

// --- gallery ---------------------------------------------------------------

namespace {

Mat pauli_x() {
    Mat x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Mat pauli_z() {
    Mat z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

// Operator acting as `op` on qubit q (0 = leftmost factor) of n qubits.
Mat on_qubit(const Mat& op, int q, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) out = tensor(out, k == q ? op : Mat::Identity(2, 2));
    return out;
}

GalleryEntry gallery_bitflip3(const GalleryParams& params) {
    const double p = params.p;
    if (p < 0.0 || 3.0 * p > 1.0)
        throw std::invalid_argument("bitflip3: need 0 <= p <= 1/3");
    Mat v = Mat::Zero(8, 2);
    v(0, 0) = 1.0;  // |000>
    v(7, 1) = 1.0;  // |111>
    SubsystemCode code = make_code(2, 1, 8, v);
    Mat proj = code_projector(code);
    std::vector<Mat> kraus;
    kraus.push_back(std::sqrt(1.0 - 3.0 * p) * proj);
    for (int q = 0; q < 3; ++q) kraus.push_back(std::sqrt(p) * on_qubit(pauli_x(), q, 3) * proj);
    return GalleryEntry{"bitflip3", code, make_channel(std::move(kraus), proj), std::nullopt};
}

GalleryEntry gallery_gauge422(const GalleryParams& params) {
    const double p = params.p;
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gauge422: need 0 <= p <= 1");
    const double r = 1.0 / std::sqrt(2.0);
    Mat v = Mat::Zero(16, 4);
    v(0, 0) = r;   // |00>_L = (|0000> + |1111>)/sqrt(2)
    v(15, 0) = r;
    v(12, 1) = r;  // |01>_L = (|1100> + |0011>)/sqrt(2)
    v(3, 1) = r;
    v(10, 2) = r;  // |10>_L = (|1010> + |0101>)/sqrt(2)
    v(5, 2) = r;
    v(6, 3) = r;   // |11>_L = (|0110> + |1001>)/sqrt(2)
    v(9, 3) = r;
    SubsystemCode code = make_code(2, 2, 16, v);
    Mat proj = code_projector(code);
    // X1X2 acts as X on the gauge qubit, Z1Z3 as Z on the gauge qubit.
    Mat xg = on_qubit(pauli_x(), 0, 4) * on_qubit(pauli_x(), 1, 4);
    Mat zg = on_qubit(pauli_z(), 0, 4) * on_qubit(pauli_z(), 2, 4);
    std::vector<Mat> kraus;
    kraus.push_back(std::sqrt(1.0 - p) * proj);
    kraus.push_back(std::sqrt(p / 2.0) * xg * proj);
    kraus.push_back(std::sqrt(p / 2.0) * zg * proj);
    return GalleryEntry{"gauge422", code, make_channel(std::move(kraus), proj), std::nullopt};
}

GalleryEntry gallery_ad4(const GalleryParams& params) {
    const double gamma = params.gamma;
    const double r = 1.0 / std::sqrt(2.0);
    Mat v = Mat::Zero(16, 2);
    v(0, 0) = r;   // |0>_L = (|0000> + |1111>)/sqrt(2)
    v(15, 0) = r;
    v(3, 1) = r;   // |1>_L = (|0011> + |1100>)/sqrt(2)
    v(12, 1) = r;
    SubsystemCode code = make_code(2, 1, 16, v);
    Mat proj = code_projector(code);
    KrausChannel ad1 = amplitude_damping_channel(gamma);
    KrausChannel full = product_channel(product_channel(ad1, ad1), product_channel(ad1, ad1));
    return GalleryEntry{"ad4", code, restrict_to(full, proj), std::nullopt};
}

GalleryEntry gallery_product(const GalleryParams& params) {
    ProductFactors f{trivial_code(2, 1), bit_flip_channel(params.p), trivial_code(2, 1),
                     depolarizing_channel(2, params.depol)};
    // The product pair is a (d_a=2, d_b=2) code on the joint space.
    SubsystemCode code = trivial_code(2, 2);
    KrausChannel noise = product_channel(f.fa, f.fb);
    return GalleryEntry{"product", code, std::move(noise), std::move(f)};
}

GalleryEntry gallery_b_eraser(const GalleryParams&) {
    Mat tau = Mat::Zero(2, 2);
    tau(0, 0) = 1.0;
    ProductFactors f{trivial_code(2, 1), identity_channel(2), trivial_code(2, 1),
                     erase_to_state_channel(tau)};
    SubsystemCode code = trivial_code(2, 2);
    KrausChannel noise = product_channel(f.fa, f.fb);
    return GalleryEntry{"b_eraser", code, std::move(noise), std::move(f)};
}

}  // namespace

GalleryEntry gallery(const std::string& name, const GalleryParams& params) {
    if (name == "bitflip3") return gallery_bitflip3(params);
    if (name == "gauge422") return gallery_gauge422(params);
    if (name == "ad4") return gallery_ad4(params);
    if (name == "product") return gallery_product(params);
    if (name == "b_eraser") return gallery_b_eraser(params);
    throw std::invalid_argument("gallery: unknown name '" + name +
                                "' (known: bitflip3, gauge422, ad4, product, b_eraser)");
}

const std::vector<std::string>& gallery_names() {
    static const std::vector<std::string> names = {"bitflip3", "gauge422", "ad4", "product",
                                                   "b_eraser"};
    return names;
}

}  // namespace aqec
