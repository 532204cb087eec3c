#include "aqec/scenarios.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace aqec {

OptimizerOptions ScenarioConfig::opt(std::uint64_t stream) const {
    OptimizerOptions o;
    o.restarts = restarts;
    o.seed = mix_seed(seed, stream);
    o.mode = mode;
    return o;
}

SeesawOptions ScenarioConfig::seesaw(std::uint64_t stream) const {
    SeesawOptions s;
    s.state_opt = opt(stream);
    return s;
}

// --- digest -----------------------------------------------------------------

namespace {

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void feed(const void* data, std::size_t n) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
    void feed(double x) { feed(&x, sizeof x); }
    void feed(std::uint64_t x) { feed(&x, sizeof x); }
    void feed(const Mat& m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                feed(m(r, c).real());
                feed(m(r, c).imag());
            }
    }
    void feed(const std::string& s) { feed(s.data(), s.size()); }
};

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

Json optimizer_meta(const FidelityLossResult& r) {
    return Json{{"restarts", r.meta.restarts},
                {"iterations", r.meta.total_iterations},
                {"grad_residual", r.meta.grad_residual},
                {"converged", r.meta.converged}};
}

Json seesaw_meta(const RecoveryEstimate& est) {
    return Json{{"rounds", est.rounds},
                {"converged", est.converged},
                {"eta_history", est.history}};
}

}  // namespace

std::string inputs_digest(const SubsystemCode& code, const KrausChannel& noise,
                          const ScenarioConfig& cfg, const std::string& scenario) {
    Fnv f;
    f.feed(scenario);
    f.feed(static_cast<std::uint64_t>(code.d_a));
    f.feed(static_cast<std::uint64_t>(code.d_b));
    f.feed(static_cast<std::uint64_t>(code.d_h));
    f.feed(code.embedding);
    for (const Mat& e : noise.kraus) f.feed(e);
    f.feed(noise.domain);
    f.feed(cfg.seed);
    f.feed(static_cast<std::uint64_t>(cfg.restarts));
    f.feed(cfg.tol_order);
    f.feed(cfg.tol_fbound);
    f.feed(cfg.tol_slack);
    f.feed(cfg.tol_choi);
    f.feed(cfg.tol_spread);
    f.feed(cfg.tol_perfect);
    std::ostringstream os;
    os << std::hex << f.h;
    return os.str();
}

BoundReport make_report(std::string name, double lhs, double rhs, double tol, std::string digest,
                        Json meta) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tol = tol;
    r.satisfied = r.slack >= -tol;
    r.inputs_digest = std::move(digest);
    r.meta = std::move(meta);
    return r;
}

// --- subspace ----------------------------------------------------------------

std::vector<BoundReport> scenario_subspace(const SubsystemCode& code, const KrausChannel& noise,
                                           const ScenarioConfig& cfg) {
    if (code.d_b != 1)
        throw std::invalid_argument("scenario subspace: requires d_b = 1 (got d_b = " +
                                    std::to_string(code.d_b) + "); use maxmixed or b_scrambling");
    const std::string digest = inputs_digest(code, noise, cfg, "subspace");
    const KrausChannel rp = transpose_channel(code, noise);
    const FidelityLossResult eta_p = eta_code(code, noise, rp, cfg.opt(1));
    const RecoveryEstimate est = estimate_optimal_recovery(code, noise, cfg.seesaw(2));

    std::vector<BoundReport> out;
    out.push_back(make_report("subspace_order", est.eta_upper, eta_p.eta, cfg.tol_order, digest,
                              Json{{"eta_p", eta_p.eta},
                                   {"eta_op_upper", est.eta_upper},
                                   {"state_opt", optimizer_meta(eta_p)},
                                   {"seesaw", seesaw_meta(est)}}));
    out.push_back(make_report("subspace_f_bound", eta_p.eta,
                              est.eta_upper * f_bound(clamp01(est.eta_upper), code.d_a),
                              cfg.tol_fbound, digest,
                              Json{{"eta_p", eta_p.eta},
                                   {"eta_op_upper", est.eta_upper},
                                   {"d_a", code.d_a}}));

    // Per-state inequality on sampled pure states:
    //   1 - eta{psi} <= sqrt([1+(d_A-1) eta{C}] [1 - eta_P{psi}]).
    Rng rng(mix_seed(cfg.seed, 90));
    double worst_slack = 1e300;
    double worst_lhs = 0.0, worst_rhs = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Vec psi = haar_state(code.d_a, rng);
        const CodeState s = make_code_state((psi * psi.adjoint()).eval(), Mat::Identity(1, 1));
        const double eta_best_state = eta_state(code, noise, est.recovery, s);
        const double eta_p_state = eta_state(code, noise, rp, s);
        const double lhs = 1.0 - eta_best_state;
        const double rhs = std::sqrt((1.0 + (code.d_a - 1) * clamp01(est.eta_upper)) *
                                     std::max(1.0 - eta_p_state, 0.0));
        if (rhs - lhs < worst_slack) {
            worst_slack = rhs - lhs;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
    }
    out.push_back(make_report("subspace_state_bound", worst_lhs, worst_rhs, cfg.tol_order, digest,
                              Json{{"samples", 10}, {"eta_op_upper", est.eta_upper}}));
    return out;
}

// --- product channel ----------------------------------------------------------

std::vector<BoundReport> scenario_product_channel(const SubsystemCode& code,
                                                  const ProductFactors& factors,
                                                  const ScenarioConfig& cfg) {
    if (factors.code_a.d_b != 1 || factors.code_b.d_b != 1)
        throw std::invalid_argument("scenario product: factor codes must be subspace codes");
    const Mat v_prod = tensor(factors.code_a.embedding, factors.code_b.embedding);
    if ((code.embedding - v_prod).norm() > 1e-9)
        throw std::invalid_argument(
            "scenario product: code embedding is not the tensor product of the factor embeddings");
    const KrausChannel noise = product_channel(factors.fa, factors.fb);
    const std::string digest = inputs_digest(code, noise, cfg, "product");

    const KrausChannel rp = transpose_channel(code, noise);
    const KrausChannel rp_a = transpose_channel(factors.code_a, factors.fa);
    const KrausChannel rp_b = transpose_channel(factors.code_b, factors.fb);
    const double dist = choi_distance(rp, product_channel(rp_a, rp_b));

    std::vector<BoundReport> out;
    out.push_back(make_report("product_transpose_factorizes", dist, 0.0, cfg.tol_choi, digest,
                              Json{{"choi_distance", dist}}));

    // Correctability of A depends on F_A alone; certify it on the A factor.
    for (BoundReport r : scenario_subspace(factors.code_a, factors.fa, cfg)) {
        r.name = "product_a_" + r.name;
        r.inputs_digest = digest;
        out.push_back(std::move(r));
    }
    return out;
}

// --- maximally mixed B ----------------------------------------------------------

std::vector<BoundReport> scenario_maxmixed_b(const SubsystemCode& code, const KrausChannel& noise,
                                             const ScenarioConfig& cfg) {
    const std::string digest = inputs_digest(code, noise, cfg, "maxmixed");
    const Mat mixed_b = Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b);
    const KrausChannel rp = transpose_channel(code, noise);
    const bool degenerate = code.d_b == 1;

    const FidelityLossResult eta_p_c0 = eta_code_fixed_b(code, noise, rp, mixed_b, cfg.opt(1));
    const RecoveryEstimate est_full = estimate_optimal_recovery(code, noise, cfg.seesaw(2));

    std::vector<BoundReport> out;
    out.push_back(make_report(
        "maxmixed_f_bound", eta_p_c0.eta,
        est_full.eta_upper * f_bound(clamp01(est_full.eta_upper), code.d_a), cfg.tol_slack, digest,
        Json{{"eta_p_c0", eta_p_c0.eta},
             {"eta_op_upper", est_full.eta_upper},
             {"d_a", code.d_a},
             {"degenerate_d_b_1", degenerate},
             {"state_opt", optimizer_meta(eta_p_c0)},
             {"seesaw", seesaw_meta(est_full)}}));

    // Averaged channel on A: E(rho_A (x) I/d_B) realized by the Kraus set
    // {E_i V (I (x) |s>)/sqrt(d_B)}.
    std::vector<Mat> bar_kraus;
    for (const Mat& e : noise.kraus)
        for (int s = 0; s < code.d_b; ++s) {
            Mat sel = Mat::Zero(code.d_ab(), code.d_a);
            for (int a = 0; a < code.d_a; ++a) sel(a * code.d_b + s, a) = 1.0;
            bar_kraus.push_back(e * code.embedding * sel / std::sqrt(static_cast<double>(code.d_b)));
        }
    Rng rng(mix_seed(cfg.seed, 91));
    double defect = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Mat rho_a = random_density(code.d_a, rng);
        const Mat lhs_m = apply_channel(noise, embed_ab(code, tensor(rho_a, mixed_b)));
        Mat rhs_m = Mat::Zero(code.d_h, code.d_h);
        for (const Mat& e : bar_kraus) rhs_m += e * rho_a * e.adjoint();
        defect = std::max(defect, (lhs_m - rhs_m).norm());
    }
    out.push_back(make_report("maxmixed_averaged_channel", defect, 0.0, 1e-10, digest,
                              Json{{"kraus_count", static_cast<int>(bar_kraus.size())}}));

    // Restricting the family can only help the recovery: the best C_0
    // recovery does at least as well as the best full-code recovery
    // evaluated on C_0.
    const RecoveryEstimate est_c0 = estimate_optimal_recovery(code, noise, cfg.seesaw(3), &mixed_b,
                                                              {est_full.recovery});
    const FidelityLossResult full_on_c0 =
        eta_code_fixed_b(code, noise, est_full.recovery, mixed_b, cfg.seesaw(3).state_opt);
    out.push_back(make_report("maxmixed_family_order", est_c0.eta_upper, full_on_c0.eta,
                              cfg.tol_order, digest,
                              Json{{"eta_op_upper_c0", est_c0.eta_upper},
                                   {"eta_full_recovery_on_c0", full_on_c0.eta}}));
    return out;
}

// --- state-dependent ------------------------------------------------------------

std::vector<BoundReport> scenario_state_dependent(const SubsystemCode& code,
                                                  const KrausChannel& noise, const Mat& phi_b,
                                                  const ScenarioConfig& cfg) {
    const std::string digest = inputs_digest(code, noise, cfg, "state_dependent");
    const KrausChannel rphi = state_dependent_transpose(code, noise, phi_b);

    const FidelityLossResult eta_phi = eta_code_fixed_b(code, noise, rphi, phi_b, cfg.opt(1));
    const RecoveryEstimate est = estimate_optimal_recovery(code, noise, cfg.seesaw(4), &phi_b);

    std::vector<BoundReport> out;
    out.push_back(make_report("state_dependent_f_bound", eta_phi.eta,
                              est.eta_upper * f_bound(clamp01(est.eta_upper), code.d_a),
                              cfg.tol_slack, digest,
                              Json{{"eta_p_phi", eta_phi.eta},
                                   {"eta_op_upper", est.eta_upper},
                                   {"d_a", code.d_a},
                                   {"state_opt", optimizer_meta(eta_phi)},
                                   {"seesaw", seesaw_meta(est)}}));
    out.push_back(make_report("state_dependent_tp_on_support", tp_defect(rphi), 0.0, 1e-9, digest,
                              Json{{"kraus_count", rphi.size()}}));
    return out;
}

// --- B perfectly correctable ------------------------------------------------------

namespace {

struct SwappedFormA {
    double max_residual = 0.0;
    std::vector<Mat> a_ops;  // n*n grid of d_a x d_a blocks
    int n = 0;
};

SwappedFormA swapped_form_a(const SubsystemCode& code, const KrausChannel& noise) {
    const Mat s = inv_sqrt_on_support(apply_channel(noise, code_projector(code)));
    const Mat& v = code.embedding;
    SwappedFormA out;
    out.n = noise.size();
    for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j) {
            const Mat m = v.adjoint() * noise.kraus[i].adjoint() * s * noise.kraus[j] * v;
            Mat a = partial_trace_b(m, code.d_a, code.d_b) / static_cast<double>(code.d_b);
            out.max_residual = std::max(
                out.max_residual, (m - tensor(a, Mat::Identity(code.d_b, code.d_b))).norm());
            out.a_ops.push_back(std::move(a));
        }
    return out;
}

}  // namespace

std::vector<BoundReport> scenario_b_correctable(const SubsystemCode& code,
                                                const KrausChannel& noise,
                                                const ScenarioConfig& cfg) {
    const std::string digest = inputs_digest(code, noise, cfg, "b_correctable");
    const SwappedFormA swapped = swapped_form_a(code, noise);
    if (swapped.max_residual > 1e-8)
        throw std::invalid_argument(
            "scenario b_correctable: B is not perfectly correctable under this noise "
            "(swapped-roles residual " +
            std::to_string(swapped.max_residual) + " > 1e-8)");

    std::vector<BoundReport> out;
    out.push_back(make_report("b_correctable_structure", swapped.max_residual, 0.0,
                              cfg.tol_perfect, digest, Json{{"kraus_count", swapped.n}}));

    const KrausChannel rp = transpose_channel(code, noise);

    // Fidelity of a pure A state is independent of the B state, and equals
    // sum_ij |<psi|A_ij|psi>|^2.
    Rng rng(mix_seed(cfg.seed, 92));
    std::vector<Vec> psis;
    std::vector<Mat> rho_bs;
    for (int k = 0; k < 10; ++k) psis.push_back(haar_state(code.d_a, rng));
    for (int k = 0; k < 10; ++k) rho_bs.push_back(random_density(code.d_b, rng));

    double max_spread = 0.0;
    double max_closed_form_err = 0.0;
    for (const Vec& psi : psis) {
        double fmin = 1e300, fmax = -1e300;
        double closed = 0.0;
        for (int i = 0; i < swapped.n; ++i)
            for (int j = 0; j < swapped.n; ++j) {
                const Cplx amp = psi.dot(swapped.a_ops[static_cast<std::size_t>(i) * swapped.n + j] * psi);
                closed += std::norm(amp);
            }
        for (const Mat& rho_b : rho_bs) {
            const CodeState s = make_code_state((psi * psi.adjoint()).eval(), rho_b);
            const double f2 = 1.0 - eta_state(code, noise, rp, s);
            fmin = std::min(fmin, f2);
            fmax = std::max(fmax, f2);
            max_closed_form_err = std::max(max_closed_form_err, std::abs(f2 - closed));
        }
        max_spread = std::max(max_spread, fmax - fmin);
    }
    out.push_back(make_report("b_correctable_fidelity_spread", max_spread, 0.0, cfg.tol_spread,
                              digest, Json{{"psi_samples", 10}, {"rho_b_samples", 10}}));
    out.push_back(make_report("b_correctable_closed_form", max_closed_form_err, 0.0, 1e-9, digest,
                              Json::object()));

    const FidelityLossResult eta_p = eta_code(code, noise, rp, cfg.opt(5));
    const RecoveryEstimate est = estimate_optimal_recovery(code, noise, cfg.seesaw(6));
    out.push_back(make_report("b_correctable_f_bound", eta_p.eta,
                              est.eta_upper * f_bound(clamp01(est.eta_upper), code.d_a),
                              cfg.tol_fbound, digest,
                              Json{{"eta_p", eta_p.eta},
                                   {"eta_op_upper", est.eta_upper},
                                   {"d_a", code.d_a},
                                   {"seesaw", seesaw_meta(est)}}));
    return out;
}

// --- delta estimate ------------------------------------------------------------

DeltaEstimate estimate_delta(const SubsystemCode& code, const KrausChannel& noise,
                             const ScenarioConfig& cfg, int restarts, int samples) {
    if (code.d_b < 2)
        throw std::invalid_argument("estimate_delta: requires d_b >= 2");
    const Mat mixed_b = Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b);
    const double pure_denom = 2.0 * (1.0 - 1.0 / code.d_b);

    auto diff_op = [&](const Mat& rho_a, const Mat& rho_b) {
        return Mat(apply_channel(noise, embed_ab(code, tensor(rho_a, rho_b))) -
                   apply_channel(noise, embed_ab(code, tensor(rho_a, mixed_b))));
    };

    struct Found {
        double ratio = 0.0;
        Mat rho_a, rho_b;
    };

    // Pure-pair ascent: for pure rho_B the denominator is constant, so the
    // numerator trace norm is maximized by subgradient steps (the gradient
    // of tr(Q D) at Q = sign(D)).
    const KrausChannel noise_adj = adjoint(noise);
    auto ascent = map_index<Found>(cfg.mode, restarts, [&](int k) {
        Rng rng(mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(k)));
        Vec psi = haar_state(code.d_a, rng);
        Vec phi = haar_state(code.d_b, rng);
        auto objective = [&](const Vec& ps, const Vec& ph) {
            return trace_norm(diff_op((ps * ps.adjoint()).eval(), (ph * ph.adjoint()).eval()));
        };
        double val = objective(psi, phi);
        for (int it = 0; it < 40; ++it) {
            const Mat d = diff_op((psi * psi.adjoint()).eval(), (phi * phi.adjoint()).eval());
            auto es = hermitian_eig(d, 1e-8);
            Mat q = Mat::Zero(code.d_h, code.d_h);
            for (Eigen::Index e = 0; e < es.eigenvalues.size(); ++e)
                q += (es.eigenvalues(e) >= 0.0 ? 1.0 : -1.0) * es.eigenvectors.col(e) *
                     es.eigenvectors.col(e).adjoint();
            // Smooth surrogate tr(Q D) = <chi|G|chi> - (1/d_B) <psi|tr_B G|psi>.
            const Mat g = decode_ab(code, apply_channel(noise_adj, q));
            Vec chi(code.d_ab());
            for (int a = 0; a < code.d_a; ++a)
                for (int b = 0; b < code.d_b; ++b) chi(a * code.d_b + b) = psi(a) * phi(b);
            const Vec gchi = g * chi;
            const Mat g_a = partial_trace_b(g, code.d_a, code.d_b);
            Vec gpsi = -(1.0 / code.d_b) * (g_a * psi);
            for (int a = 0; a < code.d_a; ++a) {
                Cplx acc = 0.0;
                for (int b = 0; b < code.d_b; ++b) acc += gchi(a * code.d_b + b) * std::conj(phi(b));
                gpsi(a) += acc;
            }
            Vec gphi(code.d_b);
            for (int b = 0; b < code.d_b; ++b) {
                Cplx acc = 0.0;
                for (int a = 0; a < code.d_a; ++a) acc += gchi(a * code.d_b + b) * std::conj(psi(a));
                gphi(b) = acc;
            }
            Vec tpsi = gpsi - std::real(psi.dot(gpsi)) * psi;
            Vec tphi = gphi - std::real(phi.dot(gphi)) * phi;
            const double g2 = tpsi.squaredNorm() + tphi.squaredNorm();
            if (std::sqrt(g2) < 1e-10) break;
            double t = 1.0;
            bool accepted = false;
            while (t > 1e-12) {
                Vec npsi = (psi + t * tpsi).normalized();
                Vec nphi = (phi + t * tphi).normalized();
                const double nval = objective(npsi, nphi);
                if (nval > val + 1e-12) {
                    psi = std::move(npsi);
                    phi = std::move(nphi);
                    val = nval;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;
        }
        return Found{val / pure_denom, (psi * psi.adjoint()).eval(), (phi * phi.adjoint()).eval()};
    });

    auto sampled = map_index<Found>(cfg.mode, samples, [&](int k) {
        Rng rng(mix_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(k)));
        const Mat rho_a = random_density(code.d_a, rng);
        const Mat rho_b = random_density(code.d_b, rng);
        const double denom = trace_norm(rho_b - mixed_b);
        if (denom < 1e-12) return Found{0.0, rho_a, rho_b};
        return Found{trace_norm(diff_op(rho_a, rho_b)) / denom, rho_a, rho_b};
    });

    DeltaEstimate out;
    out.samples = samples;
    const Found* best = nullptr;
    for (const auto& f : ascent)
        if (!best || f.ratio > best->ratio) best = &f;
    for (const auto& f : sampled)
        if (!best || f.ratio > best->ratio) best = &f;
    out.delta = best->ratio;
    out.witness_rho_a = best->rho_a;
    out.witness_rho_b = best->rho_b;
    return out;
}

// --- B scrambling ---------------------------------------------------------------

std::vector<BoundReport> scenario_b_scrambling(const SubsystemCode& code,
                                               const KrausChannel& noise,
                                               const ScenarioConfig& cfg) {
    if (code.d_b < 2)
        throw std::invalid_argument("scenario b_scrambling: requires d_b >= 2");
    const std::string digest = inputs_digest(code, noise, cfg, "b_scrambling");
    const Mat mixed_b = Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b);
    const KrausChannel rp = transpose_channel(code, noise);

    const DeltaEstimate de = estimate_delta(code, noise, cfg);
    const RecoveryEstimate est = estimate_optimal_recovery(code, noise, cfg.seesaw(7));
    const double eta_hat = clamp01(est.eta_upper);

    Rng rng(mix_seed(cfg.seed, 93));
    double chain_worst = 1e300, chain_lhs = 0.0, chain_rhs = 0.0;
    double fwd_worst = 1e300, fwd_lhs = 0.0, fwd_rhs = 0.0;
    double swp_worst = 1e300, swp_lhs = 0.0, swp_rhs = 0.0;
    double delta_used_max = de.delta;
    for (int k = 0; k < 10; ++k) {
        const Vec psi = haar_state(code.d_a, rng);
        const Mat rho_b = random_density(code.d_b, rng);
        const Mat rho_a = (psi * psi.adjoint()).eval();
        // Fold this sample's own contraction ratio into delta so the
        // per-sample inequalities stay valid with an underestimated delta.
        const double denom = trace_norm(rho_b - mixed_b);
        double delta_used = de.delta;
        if (denom > 1e-12) {
            const Mat d = apply_channel(noise, embed_ab(code, tensor(rho_a, rho_b))) -
                          apply_channel(noise, embed_ab(code, tensor(rho_a, mixed_b)));
            delta_used = std::max(delta_used, trace_norm(d) / denom);
        }
        delta_used_max = std::max(delta_used_max, delta_used);

        const double eta_rho = eta_state(code, noise, rp, make_code_state(rho_a, rho_b));
        const double eta_mix = eta_state(code, noise, rp, make_code_state(rho_a, mixed_b));

        // eta{psi (x) rho_B} >= eta{psi (x) I/d_B} - delta, and its swap;
        // each report keeps the sample with the smallest slack.
        // Left sides clamped at zero: the raw differences can be negative,
        // the right sides never are, so the inequalities are unaffected.
        const double fwd_slack = eta_rho - std::max(eta_mix - delta_used, 0.0);
        if (fwd_slack < fwd_worst) {
            fwd_worst = fwd_slack;
            fwd_lhs = std::max(eta_mix - delta_used, 0.0);
            fwd_rhs = eta_rho;
        }
        const double swp_slack = eta_mix - std::max(eta_rho - delta_used, 0.0);
        if (swp_slack < swp_worst) {
            swp_worst = swp_slack;
            swp_lhs = std::max(eta_rho - delta_used, 0.0);
            swp_rhs = eta_mix;
        }

        // Chain bound: eta_hat + delta >= 1 - sqrt([1+(d_A-1) eta_hat]
        //                                       (1 - eta_P{psi (x) rho_B} + delta)).
        const double inside = (1.0 + (code.d_a - 1) * eta_hat) *
                              std::max(1.0 - eta_rho + delta_used, 0.0);
        const double lhs = std::max(1.0 - std::sqrt(inside), 0.0);
        const double rhs = eta_hat + delta_used;
        if (rhs - lhs < chain_worst) {
            chain_worst = rhs - lhs;
            chain_lhs = lhs;
            chain_rhs = rhs;
        }
    }

    std::vector<BoundReport> out;
    Json base_meta{{"delta_estimate", de.delta},
                   {"delta_used_max", delta_used_max},
                   {"delta_samples", de.samples},
                   {"eta_op_upper", est.eta_upper},
                   {"seesaw", seesaw_meta(est)}};
    out.push_back(
        make_report("b_scrambling_chain", chain_lhs, chain_rhs, cfg.tol_slack, digest, base_meta));
    out.push_back(make_report("b_scrambling_contraction", fwd_lhs, fwd_rhs, cfg.tol_slack, digest,
                              Json{{"delta_used_max", delta_used_max}}));
    out.push_back(make_report("b_scrambling_contraction_swapped", swp_lhs, swp_rhs, cfg.tol_slack,
                              digest, Json{{"delta_used_max", delta_used_max}}));

    // First-order form, informational: eta_P <= (d_A+1) eta_op + 3 delta.
    const FidelityLossResult eta_p = eta_code(code, noise, rp, cfg.opt(8));
    BoundReport first = make_report("b_scrambling_first_order", eta_p.eta,
                                    (code.d_a + 1) * est.eta_upper + 3.0 * de.delta, cfg.tol_slack,
                                    digest, Json{{"informational", true}, {"eta_p", eta_p.eta}});
    first.informational = true;
    out.push_back(std::move(first));
    return out;
}

// --- perfect check ---------------------------------------------------------------

std::vector<BoundReport> scenario_perfect_check(const SubsystemCode& code,
                                                const KrausChannel& noise,
                                                const ScenarioConfig& cfg) {
    const std::string digest = inputs_digest(code, noise, cfg, "perfect_check");
    auto [ok_a, res] = check_perfect_form_a(code, noise, cfg.tol_perfect);
    const FormBResult fb = check_perfect_form_b(code, noise, cfg.tol_perfect);

    std::vector<BoundReport> out;
    out.push_back(make_report("perfect_form_a", res.max_delta_fro, 0.0, cfg.tol_perfect, digest,
                              Json{{"sum_delta_norm", res.sum_delta_norm},
                                   {"kraus_count", res.n},
                                   {"passes", ok_a}}));
    out.push_back(make_report("perfect_form_b", fb.max_residual_fro, 0.0, cfg.tol_perfect, digest,
                              Json{{"kraus_count", fb.n}, {"passes", fb.ok}}));

    const KrausChannel rp = transpose_channel(code, noise);
    const FidelityLossResult eta_p = eta_code(code, noise, rp, cfg.opt(1));
    out.push_back(make_report("perfect_eta_p", eta_p.eta, 0.0, 1e-9, digest,
                              optimizer_meta(eta_p)));
    return out;
}

// --- dispatch ---------------------------------------------------------------------

RunAllResult run_all(const SubsystemCode& code, const KrausChannel& noise,
                     const ProductFactors* factors, const ScenarioConfig& cfg) {
    RunAllResult out;
    auto append = [&](std::vector<BoundReport> rs) {
        for (auto& r : rs) out.reports.push_back(std::move(r));
    };

    append(scenario_perfect_check(code, noise, cfg));

    if (code.d_b == 1)
        append(scenario_subspace(code, noise, cfg));
    else
        out.skipped.push_back({"subspace", "code has a nontrivial gauge subsystem (d_b > 1)"});

    if (factors)
        append(scenario_product_channel(code, *factors, cfg));
    else
        out.skipped.push_back({"product", "noise was not given as explicit A/B factors"});

    if (code.d_b >= 2) {
        append(scenario_maxmixed_b(code, noise, cfg));
        const Mat mixed_b = Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b);
        append(scenario_state_dependent(code, noise, mixed_b, cfg));
        append(scenario_b_scrambling(code, noise, cfg));
    } else {
        out.skipped.push_back({"maxmixed", "trivial gauge subsystem (d_b = 1)"});
        out.skipped.push_back({"state_dependent", "trivial gauge subsystem (d_b = 1)"});
        out.skipped.push_back({"b_scrambling", "trivial gauge subsystem (d_b = 1)"});
    }

    const SwappedFormA swapped = swapped_form_a(code, noise);
    if (swapped.max_residual <= 1e-8)
        append(scenario_b_correctable(code, noise, cfg));
    else
        out.skipped.push_back({"b_correctable",
                               "B is not perfectly correctable (swapped-roles residual " +
                                   std::to_string(swapped.max_residual) + ")"});
    return out;
}

Json report_to_json(const BoundReport& r) {
    return Json{{"name", r.name},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"slack", r.slack},
                {"satisfied", r.satisfied},
                {"tol", r.tol},
                {"informational", r.informational},
                {"inputs_digest", r.inputs_digest},
                {"meta", r.meta}};
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
    std::ostringstream os;
    os.precision(17);
    os << "name,lhs,rhs,slack,tol,satisfied,informational,inputs_digest\n";
    for (const BoundReport& r : reports)
        os << r.name << ',' << r.lhs << ',' << r.rhs << ',' << r.slack << ',' << r.tol << ','
           << (r.satisfied ? "true" : "false") << ',' << (r.informational ? "true" : "false")
           << ',' << r.inputs_digest << '\n';
    return os.str();
}

}  // namespace aqec
