// See-saw estimate of the optimal recovery. Recoveries are parametrized by
// their Choi matrix on B(supp E(P)) -> B(code subspace); outputs outside
// the code subspace can only lower the recovered fidelity, so nothing is
// lost by the compression, and it keeps the PSD projections small. The
// convex subproblem (maximize the minimum witness fidelity over the
// PSD + TP set) runs projected subgradient steps with Dykstra alternating
// projections.

#include "aqec/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace aqec {

namespace {

struct Frame {
    Mat w_e;  // d_h x r isometry spanning supp E(P)
    int r = 0;
    int d_ab = 0;
};

Frame make_frame(const SubsystemCode& code, const KrausChannel& noise) {
    const Mat ep = apply_channel(noise, code_projector(code));
    auto es = hermitian_eig(ep, 1e-10);
    const double cut = 1e-10 * std::max(es.eigenvalues(0), 0.0);
    int r = 0;
    while (r < es.eigenvalues.size() && es.eigenvalues(r) > cut) ++r;
    if (r == 0) throw std::invalid_argument("estimate_optimal_recovery: E(P) is numerically zero");
    Frame f;
    f.w_e = es.eigenvectors.leftCols(r);
    f.r = r;
    f.d_ab = code.d_ab();
    return f;
}

// Choi matrix (index (k,m) = k*d_ab + m, k input in the compressed frame,
// m output in the code frame) of a physical-space recovery channel.
Mat compress_choi(const Frame& f, const SubsystemCode& code, const KrausChannel& rec) {
    KrausChannel small;
    small.domain = Mat::Identity(f.r, f.r);
    for (const Mat& rk : rec.kraus)
        small.kraus.push_back(code.embedding.adjoint() * rk * f.w_e);
    return choi(small).matrix;
}

KrausChannel decompress_channel(const Frame& f, const SubsystemCode& code, const Mat& j) {
    ChoiMatrix cm{j, f.r, f.d_ab};
    KrausChannel rec;
    for (const Mat& k : kraus_from_choi(cm, 1e-13))
        rec.kraus.push_back(code.embedding * k * f.w_e.adjoint());
    rec.domain = f.w_e * f.w_e.adjoint();
    return rec;
}

void project_tp(Mat& j, const Frame& f) {
    Mat d = partial_trace_b(j, f.r, f.d_ab) - Mat::Identity(f.r, f.r);
    j -= tensor(d, Mat::Identity(f.d_ab, f.d_ab)) / static_cast<double>(f.d_ab);
}

Mat project_psd(const Mat& j) {
    auto es = hermitian_eig(0.5 * (j + j.adjoint()), 1e-6);
    Mat out = Mat::Zero(j.rows(), j.cols());
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k)
        if (es.eigenvalues(k) > 0.0)
            out += es.eigenvalues(k) * es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
    return out;
}

void dykstra_project(Mat& j, const Frame& f, int max_iters, double tol) {
    Mat p = Mat::Zero(j.rows(), j.cols());
    Mat q = Mat::Zero(j.rows(), j.cols());
    for (int it = 0; it < max_iters; ++it) {
        Mat y = project_psd(j + p);
        p = j + p - y;
        Mat z = y + q;
        project_tp(z, f);
        q = y + q - z;
        const double change = (z - j).norm();
        j = std::move(z);
        if (change < tol) break;
    }
    project_tp(j, f);  // leave the TP constraint exact
}

struct Witness {
    Mat h;  // fidelity functional: F = tr(J h)
};

Witness make_witness(const Frame& f, const SubsystemCode& code, const KrausChannel& noise,
                     const Vec& psi, const Mat& rho_b) {
    const Mat rho = embed_ab(code, tensor((psi * psi.adjoint()).eval(), rho_b));
    const Mat x = f.w_e.adjoint() * apply_channel(noise, rho) * f.w_e;
    Mat obs = tensor((psi * psi.adjoint()).eval(), Mat::Identity(code.d_b, code.d_b));
    return Witness{tensor(x, obs.transpose().eval())};
}

double min_fidelity(const Mat& j, const std::deque<Witness>& ws, int* argmin) {
    double best = 1e300;
    int bi = 0;
    for (int i = 0; i < static_cast<int>(ws.size()); ++i) {
        const double v = std::real((j * ws[static_cast<std::size_t>(i)].h).trace());
        if (v < best) {
            best = v;
            bi = i;
        }
    }
    if (argmin) *argmin = bi;
    return best;
}

}  // namespace

RecoveryEstimate estimate_optimal_recovery(const SubsystemCode& code, const KrausChannel& noise,
                                           const SeesawOptions& opts, const Mat* phi_b_fixed,
                                           const std::vector<KrausChannel>& extra_seeds) {
    const Frame f = make_frame(code, noise);
    const Mat rho_b_fixed =
        phi_b_fixed ? *phi_b_fixed
                    : Mat(Mat::Identity(code.d_b, code.d_b) / static_cast<double>(code.d_b));

    auto evaluate = [&](const KrausChannel& rec) -> FidelityLossResult {
        if (phi_b_fixed) return eta_code_fixed_b(code, noise, rec, *phi_b_fixed, opts.state_opt);
        return eta_code(code, noise, rec, opts.state_opt);
    };

    // Seeds: the transpose channel (plus the state-dependent transpose for
    // fixed-B families) and any caller-provided candidates.
    std::vector<KrausChannel> seeds;
    if (opts.seed_with_transpose) {
        seeds.push_back(transpose_channel(code, noise));
        if (phi_b_fixed) seeds.push_back(state_dependent_transpose(code, noise, *phi_b_fixed));
    }
    for (const KrausChannel& s : extra_seeds) seeds.push_back(s);
    if (seeds.empty()) seeds.push_back(transpose_channel(code, noise));

    KrausChannel rec_best;
    FidelityLossResult eval_best;
    Mat j_best;
    bool have_best = false;
    for (const KrausChannel& s : seeds) {
        FidelityLossResult ev = evaluate(s);
        if (!have_best || ev.eta < eval_best.eta) {
            rec_best = s;
            eval_best = ev;
            j_best = compress_choi(f, code, s);
            project_tp(j_best, f);
            have_best = true;
        }
    }

    std::deque<Witness> witnesses;
    auto push_witness = [&](const FidelityLossResult& ev) {
        const Mat rho_b = phi_b_fixed ? rho_b_fixed
                                      : Mat(ev.argmax_phi_b * ev.argmax_phi_b.adjoint());
        witnesses.push_back(make_witness(f, code, noise, ev.argmax_psi_a, rho_b));
        while (witnesses.size() > 48) witnesses.pop_front();
    };
    push_witness(eval_best);

    RecoveryEstimate out;
    out.history.push_back(eval_best.eta);

    Mat j = j_best;
    int round = 0;
    for (; round < opts.max_rounds; ++round) {
        const double eta_prev = eval_best.eta;
        if (eta_prev <= 1e-12) {
            out.converged = true;  // nothing left to improve
            break;
        }

        // Convex subproblem: push the minimum witness fidelity up.
        for (int step = 0; step < opts.subgrad_steps; ++step) {
            int wi = 0;
            min_fidelity(j, witnesses, &wi);
            const Mat& g = witnesses[static_cast<std::size_t>(wi)].h;
            const double gn = g.norm();
            if (gn < 1e-14) break;
            const double t = 1.0 / (gn * std::sqrt(static_cast<double>(step + 1)));
            j += t * g;
            dykstra_project(j, f, opts.dykstra_max_iters, opts.dykstra_tol);
        }

        KrausChannel cand = decompress_channel(f, code, j);
        FidelityLossResult ev = evaluate(cand);
        push_witness(ev);
        if (ev.eta < eval_best.eta) {
            eval_best = ev;
            rec_best = std::move(cand);
            j_best = j;
        }
        out.history.push_back(eval_best.eta);
        if (round + 1 >= opts.min_rounds && eta_prev - eval_best.eta < opts.round_tol) {
            out.converged = true;
            ++round;
            break;
        }
    }

    out.recovery = std::move(rec_best);
    out.eta_upper = eval_best.eta;
    out.rounds = round;
    out.meta = eval_best.meta;
    return out;
}

}  // namespace aqec
