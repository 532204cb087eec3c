#include <doctest.h>

#include "aqec/json_io.hpp"
#include "aqec/recovery.hpp"
#include "instances.hpp"

using namespace aqec;

namespace {

KrausChannel remix(const KrausChannel& ch, const Mat& u) {
    KrausChannel out;
    out.domain = ch.domain;
    const int n = ch.size();
    for (int j = 0; j < n; ++j) {
        Mat f = Mat::Zero(ch.dim_out(), ch.dim_in());
        for (int i = 0; i < n; ++i) f += u(i, j) * ch.kraus[i];
        out.kraus.push_back(std::move(f));
    }
    return out;
}

}  // namespace

TEST_CASE("transpose_channel reverses unitary noise on the code") {
    Rng rng(83);
    const SubsystemCode code = random_code(2, 1, 6, rng);
    const Mat p = code_projector(code);
    const Mat u = haar_unitary(6, rng);
    const KrausChannel noise = restrict_to(KrausChannel{{u}, identity(6)}, p);
    const KrausChannel rec = transpose_channel(code, noise);

    CHECK((rec.kraus[0] - p * (u * p).adjoint() * support_projector(apply_channel(noise, p))).norm() <= 1e-9);
    for (int it = 0; it < 5; ++it) {
        const CodeState s = make_code_state(random_density(2, rng), identity(1));
        const Mat rho = embed(code, s);
        CHECK((apply_channel(rec, apply_channel(noise, rho)) - rho).norm() <= 1e-10);
    }
}

TEST_CASE("transpose_channel of identity noise is the code projection map") {
    Rng rng(89);
    const SubsystemCode code = random_code(2, 2, 6, rng);
    const Mat p = code_projector(code);
    const KrausChannel noise = restrict_to(identity_channel(6), p);
    const KrausChannel rec = transpose_channel(code, noise);
    const KrausChannel proj_map{{p}, p};
    CHECK(choi_distance(rec, proj_map) <= 1e-9);
}

TEST_CASE("transpose_channel is TP on the support of E(P)") {
    Rng rng(97);
    for (int it = 0; it < 5; ++it) {
        auto inst = instances::random_instance(2, 2, 5, 3, rng);
        const KrausChannel rec = transpose_channel(inst.code, inst.noise);
        CHECK(tp_defect(rec) <= 1e-9);
    }
}

TEST_CASE("transpose_channel requires the noise domain to match the code") {
    Rng rng(101);
    const SubsystemCode code = random_code(2, 1, 4, rng);
    CHECK_THROWS_AS(transpose_channel(code, identity_channel(4)), std::invalid_argument);
}

TEST_CASE("transpose_channel is representation invariant") {
    Rng rng(103);
    for (int it = 0; it < 4; ++it) {
        auto inst = instances::random_instance(2, 2, 5, 3, rng);
        const Mat u = haar_unitary(inst.noise.size(), rng);
        const KrausChannel r1 = transpose_channel(inst.code, inst.noise);
        const KrausChannel r2 = transpose_channel(inst.code, remix(inst.noise, u));
        CHECK(choi_distance(r1, r2) <= 1e-9);
    }
}

TEST_CASE("state_dependent_transpose at phi_B = I/d_B equals the transpose channel") {
    Rng rng(107);
    auto inst = instances::random_instance(2, 2, 6, 3, rng);
    const Mat mixed = identity(2) / 2.0;
    const KrausChannel r_mixed = state_dependent_transpose(inst.code, inst.noise, mixed);
    const KrausChannel r_plain = transpose_channel(inst.code, inst.noise);
    CHECK(choi_distance(r_mixed, r_plain) <= 1e-9);
}

TEST_CASE("state_dependent_transpose with d_b = 1 is the transpose channel") {
    Rng rng(109);
    auto inst = instances::random_instance(2, 1, 5, 3, rng);
    const KrausChannel r1 = state_dependent_transpose(inst.code, inst.noise, identity(1));
    const KrausChannel r2 = transpose_channel(inst.code, inst.noise);
    CHECK(choi_distance(r1, r2) <= 1e-10);
}

TEST_CASE("state_dependent_transpose is TP on the support of E(P_A (x) phi_B)") {
    Rng rng(113);
    auto inst = instances::random_instance(2, 3, 7, 3, rng);
    const Mat phi = random_density(3, rng);
    const KrausChannel rec = state_dependent_transpose(inst.code, inst.noise, phi);
    CHECK(tp_defect(rec) <= 1e-9);
}

TEST_CASE("form checkers: bitflip3 is perfectly correctable, identity noise too") {
    const GalleryEntry g = gallery("bitflip3");
    auto [ok_a, res] = check_perfect_form_a(g.code, g.noise, 1e-10);
    CHECK(ok_a);
    CHECK(res.max_delta_fro <= 1e-10);
    CHECK(check_perfect_form_b(g.code, g.noise, 1e-10).ok);

    Rng rng(127);
    const SubsystemCode code = random_code(2, 2, 6, rng);
    const KrausChannel idn = restrict_to(identity_channel(6), code_projector(code));
    CHECK(check_perfect_form_a(code, idn, 1e-10).first);
}

TEST_CASE("form checkers: ad4 at gamma = 0.1 is only approximately correctable") {
    const GalleryEntry g = gallery("ad4");
    auto [ok_a, res] = check_perfect_form_a(g.code, g.noise, 1e-8);
    CHECK_FALSE(ok_a);
    CHECK(res.max_delta_fro > 1e-3);
    CHECK_FALSE(check_perfect_form_b(g.code, g.noise, 1e-8).ok);
}

TEST_CASE("form A and form B agree on correctable constructions") {
    Rng rng(131);
    for (int it = 0; it < 6; ++it) {
        auto inst = instances::correctable_instance(2, 2, 2, 3, rng, it % 2 ? 2 : 0);
        CHECK(check_perfect_form_a(inst.code, inst.noise, 1e-8).first);
        CHECK(check_perfect_form_b(inst.code, inst.noise, 1e-6).ok);
    }
}

TEST_CASE("form B passing at 1e-8 implies form A at 1e-6 near the correctable set") {
    Rng rng(229);
    for (int it = 0; it < 4; ++it) {
        auto inst = instances::correctable_instance(2, 2, 2, 3, rng);
        // Nudge the Kraus list off the correctable set and restore exact
        // trace preservation with a right normalization factor.
        const Mat& v = inst.code.embedding;
        std::vector<Mat> kraus;
        for (const Mat& e : inst.noise.kraus)
            kraus.push_back(e + 1e-9 * gaussian_matrix(e.rows(), e.cols(), rng) *
                                      code_projector(inst.code));
        Mat d = Mat::Zero(inst.code.d_ab(), inst.code.d_ab());
        for (const Mat& e : kraus) d += v.adjoint() * e.adjoint() * e * v;
        const Mat fix = v * inv_sqrt_on_support(d) * v.adjoint();
        for (Mat& e : kraus) e = e * fix;
        const KrausChannel noise = make_channel(std::move(kraus), code_projector(inst.code));

        const FormBResult fb = check_perfect_form_b(inst.code, noise, 1e-8);
        REQUIRE(fb.ok);
        CHECK(fb.max_residual_fro > 0.0);
        CHECK(check_perfect_form_a(inst.code, noise, 1e-6).first);
    }
}

TEST_CASE("residuals: orthogonality and the trace-preservation relation") {
    Rng rng(137);
    auto inst = instances::random_instance(2, 2, 6, 3, rng);
    const ResidualDecomposition res = residuals(inst.code, inst.noise);
    const int d_a = res.d_a, d_b = res.d_b;

    // <I_A (x) X, Delta_ij> = 0 for random X.
    for (int it = 0; it < 5; ++it) {
        const Mat x = gaussian_matrix(d_b, d_b, rng);
        const Mat ix = tensor(Mat::Identity(d_a, d_a), x);
        for (int i = 0; i < res.n; ++i)
            for (int j = 0; j < res.n; ++j)
                CHECK(std::abs((ix.adjoint() * res.delta(i, j)).trace()) <= 1e-12);
    }

    // P = sum_ij [(I (x) B)^dag (I (x) B) + D^dag D + cross terms], i.e. the
    // reconstruction m_ij = I (x) B_ij + Delta_ij satisfies sum m^dag m = I.
    Mat sum = Mat::Zero(inst.code.d_ab(), inst.code.d_ab());
    for (int i = 0; i < res.n; ++i)
        for (int j = 0; j < res.n; ++j) {
            const Mat ib = tensor(Mat::Identity(d_a, d_a), res.b(i, j));
            const Mat m = ib + res.delta(i, j);
            sum += m.adjoint() * m;
        }
    CHECK((sum - identity(inst.code.d_ab())).norm() <= 1e-9);
}

TEST_CASE("residuals of a perfectly correctable pair vanish") {
    Rng rng(139);
    auto inst = instances::correctable_instance(2, 3, 2, 3, rng);
    const ResidualDecomposition res = residuals(inst.code, inst.noise);
    CHECK(res.max_delta_fro <= 1e-10);
    CHECK(res.sum_delta_norm <= 1e-10);
}

TEST_CASE("canonicalize: unitary noise has a single unit sector") {
    Rng rng(149);
    const SubsystemCode code = random_code(2, 1, 5, rng);
    const Mat p = code_projector(code);
    const Mat u = haar_unitary(5, rng);
    const KrausChannel noise = restrict_to(KrausChannel{{u}, identity(5)}, p);
    const CanonicalKraus canon = canonicalize(code, noise);
    REQUIRE(canon.d_vals.size() == 1);
    CHECK(canon.d_vals(0) == doctest::Approx(1.0).epsilon(1e-10));
    // The sector isometry matches U restricted to the code, up to phase.
    const Mat expected = u * code.embedding;
    const Cplx phase = (canon.isometries[0].adjoint() * expected).trace() /
                       static_cast<double>(code.d_a);
    CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-9);
    CHECK((canon.isometries[0] * phase - expected).norm() <= 1e-9);
}

TEST_CASE("canonicalize bitflip3: sector weights are 1-3p and p") {
    GalleryParams params;
    params.p = 0.07;
    const GalleryEntry g = gallery("bitflip3", params);
    const CanonicalKraus canon = canonicalize(g.code, g.noise);
    REQUIRE(canon.d_vals.size() == 4);
    CHECK(canon.d_vals(0) == doctest::Approx(1.0 - 3 * 0.07).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(canon.d_vals(k) == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(canon.d_vals.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonicalize invariants: orthogonal projectors and E(P) reconstruction") {
    Rng rng(151);
    auto inst = instances::correctable_instance(2, 2, 2, 2, rng);
    const CanonicalKraus canon = canonicalize(inst.code, inst.noise);
    const std::size_t m = canon.projectors.size();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const Mat prod = canon.projectors[a] * canon.projectors[b];
            if (a == b)
                CHECK((prod - canon.projectors[a]).norm() <= 1e-9);
            else
                CHECK(prod.norm() <= 1e-9);
        }
    Mat recon = Mat::Zero(inst.code.d_h, inst.code.d_h);
    for (std::size_t a = 0; a < m; ++a) recon += canon.d_vals(static_cast<Eigen::Index>(a)) * canon.projectors[a];
    CHECK((recon - apply_channel(inst.noise, code_projector(inst.code))).norm() <= 1e-9);
}

TEST_CASE("canonicalize rejects non-correctable noise with the residual in the message") {
    const GalleryEntry g = gallery("ad4");
    CHECK_THROWS_WITH_AS(canonicalize(g.code, g.noise), doctest::Contains("residual"),
                         std::invalid_argument);
}

TEST_CASE("residual decomposition serializes with per-pair norms") {
    const GalleryEntry g = gallery("bitflip3");
    const ResidualDecomposition res = residuals(g.code, g.noise);
    const Json j = residuals_to_json(res, 1e-8);
    CHECK(j["pass"].get<bool>());
    CHECK(j["pairs"].size() == 16);
    CHECK(j["max_delta_fro"].get<double>() <= 1e-10);
}
