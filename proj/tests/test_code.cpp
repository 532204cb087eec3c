#include <doctest.h>

#include "aqec/code.hpp"
#include "aqec/json_io.hpp"

using namespace aqec;

TEST_CASE("embed: trivial code is the plain tensor product") {
    Rng rng(67);
    const SubsystemCode code = trivial_code(2, 3);
    const CodeState s = make_code_state(random_density(2, rng), random_density(3, rng));
    CHECK((embed(code, s) - tensor(s.rho_a, s.rho_b)).norm() <= 1e-14);
}

TEST_CASE("embed lands inside the code projector and preserves trace/positivity") {
    Rng rng(71);
    const SubsystemCode code = random_code(2, 2, 9, rng);
    const Mat p = code_projector(code);
    const CodeState s = make_code_state(random_density(2, rng), random_density(2, rng));
    const Mat rho = embed(code, s);
    CHECK((p * rho * p - rho).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-12);
    auto es = hermitian_eig(rho, 1e-10);
    CHECK(es.eigenvalues.minCoeff() >= -1e-12);
}

TEST_CASE("bitflip3 embeds |0><0| as |000><000|") {
    const GalleryEntry g = gallery("bitflip3");
    Mat zero = Mat::Zero(2, 2);
    zero(0, 0) = 1.0;
    const Mat rho = embed(g.code, make_code_state(zero, Mat::Identity(1, 1)));
    Mat expected = Mat::Zero(8, 8);
    expected(0, 0) = 1.0;
    CHECK((rho - expected).norm() <= 1e-14);
}

TEST_CASE("logical_state_a: round trip, orthogonal states, half-in-half-out") {
    Rng rng(73);
    const SubsystemCode code = random_code(3, 2, 8, rng);
    const CodeState s = make_code_state(random_density(3, rng), random_density(2, rng));
    CHECK((logical_state_a(code, embed(code, s)) - s.rho_a).cwiseAbs().maxCoeff() <= 1e-12);

    // A state supported on the orthocomplement decodes to zero.
    const Mat p = code_projector(code);
    const Mat q = identity(8) - p;
    auto es = hermitian_eig(q, 1e-10);
    const Vec out_vec = es.eigenvectors.col(0);  // eigenvalue 1 of Q
    const Mat rho_out = out_vec * out_vec.adjoint();
    CHECK(logical_state_a(code, rho_out).norm() <= 1e-12);

    // Half inside, half outside: linearity halves the decoded part.
    const Mat mixed = 0.5 * embed(code, s) + 0.5 * rho_out;
    CHECK((logical_state_a(code, mixed) - 0.5 * s.rho_a).norm() <= 1e-12);
}

TEST_CASE("maximally_mixed_b_state fixes rho_b") {
    const SubsystemCode code = trivial_code(2, 2);
    Mat plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const CodeState s = maximally_mixed_b_state(code, plus);
    CHECK((s.rho_b - identity(2) / 2.0).norm() == 0.0);
    CHECK((embed(code, s) - tensor(plus, identity(2) / 2.0)).norm() <= 1e-15);

    // d_b = 1: the B factor is the scalar 1.
    const CodeState s1 = maximally_mixed_b_state(trivial_code(2, 1), plus);
    CHECK(s1.rho_b.rows() == 1);
    CHECK(std::abs(s1.rho_b(0, 0).real() - 1.0) <= 1e-15);
}

TEST_CASE("make_code_state validates density matrices") {
    Mat bad(2, 2);
    bad << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(make_code_state(bad, identity(1)), std::invalid_argument);
    CHECK_THROWS_AS(make_code_state(identity(2), identity(1)), std::invalid_argument);
}

TEST_CASE("gallery pairs: domain equals the code projector, V^dag P V = I") {
    for (const std::string& name : gallery_names()) {
        CAPTURE(name);
        const GalleryEntry g = gallery(name);
        CHECK((g.noise.domain - code_projector(g.code)).norm() <= 1e-10);
        CHECK(tp_defect(g.noise) <= 1e-10);
        const Mat inner = g.code.embedding.adjoint() * code_projector(g.code) * g.code.embedding;
        CHECK((inner - identity(g.code.d_ab())).norm() <= 1e-10);
    }
}

TEST_CASE("gallery bitflip3: dimensions and Kraus count") {
    const GalleryEntry g = gallery("bitflip3");
    CHECK(g.code.d_a == 2);
    CHECK(g.code.d_b == 1);
    CHECK(g.code.d_h == 8);
    CHECK(g.noise.size() == 4);
}

TEST_CASE("gallery product with identity factors is the identity channel") {
    GalleryParams params;
    params.p = 0.0;
    params.depol = 0.0;
    const GalleryEntry g = gallery("product", params);
    CHECK(choi_distance(prune(g.noise), identity_channel(4)) <= 1e-12);
}

TEST_CASE("gallery rejects unknown names") {
    CHECK_THROWS_AS(gallery("nonsense"), std::invalid_argument);
}

TEST_CASE("code JSON round trip") {
    Rng rng(79);
    const SubsystemCode code = random_code(2, 2, 7, rng);
    const SubsystemCode back = code_from_json(code_to_json(code));
    CHECK(back.d_a == code.d_a);
    CHECK(back.d_b == code.d_b);
    CHECK(back.d_h == code.d_h);
    CHECK((back.embedding - code.embedding).norm() <= 1e-15);
}

TEST_CASE("code JSON rejects non-isometries") {
    Json j = code_to_json(trivial_code(2, 1));
    j["embedding"][0][0][0] = 2.0;
    CHECK_THROWS_AS(code_from_json(j), std::invalid_argument);
}
