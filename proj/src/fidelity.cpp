#include "aqec/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

static Mat kraus_superop(const std::vector<Mat>& kraus) {
    const Eigen::Index r = kraus.front().rows(), c = kraus.front().cols();
    Mat s = Mat::Zero(r * r, c * c);
    for (const Mat& k : kraus) s += tensor(k.conjugate(), k);
    return s;
}

Mat code_frame_superop(const SubsystemCode& code, const KrausChannel& noise,
                       const KrausChannel& rec) {
    if (noise.dim_in() != code.d_h || rec.dim_in() != noise.dim_out() ||
        rec.dim_out() != code.d_h)
        throw std::invalid_argument("code_frame_superop: dimension mismatch");
    const Mat& v = code.embedding;
    const Mat enc = tensor(v.conjugate(), v);                    // d_h^2 x d_ab^2
    const Mat dec = tensor(v.transpose(), v.adjoint());          // d_ab^2 x d_h^2
    Mat chain = kraus_superop(noise.kraus) * enc;                // keep thin
    chain = kraus_superop(rec.kraus) * chain;
    return dec * chain;
}

static Mat unvec(const Vec& x, int d) {
    return Eigen::Map<const Mat>(x.data(), d, d);
}

static Vec vec_of(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

double eta_state(const SubsystemCode& code, const KrausChannel& noise, const KrausChannel& rec,
                 const CodeState& s) {
    const Mat rho = embed(code, s);
    const Mat out = apply_channel(rec, apply_channel(noise, rho));
    const Mat sigma_a = logical_state_a(code, out);
    // Pure rho_a: F = sqrt(<psi|sigma|psi>).
    auto es = hermitian_eig(s.rho_a, 1e-9);
    double f;
    if (std::abs(es.eigenvalues(0) - 1.0) < 1e-12) {
        f = fidelity_pure(es.eigenvectors.col(0), sigma_a);
    } else {
        f = fidelity_sub(s.rho_a, sigma_a);
    }
    return 1.0 - f * f;
}

// --- projected gradient ascent on product states ---------------------------

namespace {

// Objective eta(psi, phi) to maximize; gradients are Euclidean (twice the
// Wirtinger derivative with respect to the conjugate variables).
struct ProductObjective {
    virtual ~ProductObjective() = default;
    virtual double value(const Vec& psi, const Vec& phi) const = 0;
    virtual void grad(const Vec& psi, const Vec& phi, Vec& gpsi, Vec& gphi) const = 0;
    virtual bool phi_free() const = 0;
};

Vec tangent_project(const Vec& v, const Vec& g) {
    return g - std::real(v.dot(g)) * v;
}

struct AscentResult {
    double eta = 0.0;
    Vec psi, phi;
    int iters = 0;
    double grad_norm = 0.0;
    bool converged = false;
};

AscentResult ascend(const ProductObjective& obj, Vec psi, Vec phi, const OptimizerOptions& opts) {
    AscentResult r;
    double eta = obj.value(psi, phi);
    Vec gpsi(psi.size()), gphi(phi.size());
    int it = 0;
    double gnorm = 0.0;
    bool converged = false;
    for (; it < opts.max_iters; ++it) {
        obj.grad(psi, phi, gpsi, gphi);
        Vec tpsi = tangent_project(psi, gpsi);
        Vec tphi = obj.phi_free() ? tangent_project(phi, gphi) : Vec::Zero(phi.size()).eval();
        const double g2 = tpsi.squaredNorm() + tphi.squaredNorm();
        gnorm = std::sqrt(g2);
        if (gnorm < opts.grad_tol) {
            converged = true;
            break;
        }
        // Armijo backtracking from step 1.0, factor 0.5.
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-14) {
            Vec npsi = (psi + t * tpsi).normalized();
            Vec nphi = obj.phi_free() ? (phi + t * tphi).normalized().eval() : phi;
            const double neta = obj.value(npsi, nphi);
            if (neta >= eta + 1e-4 * t * g2) {
                psi = std::move(npsi);
                phi = std::move(nphi);
                eta = neta;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no ascent direction at floating-point scale
    }
    r.eta = eta;
    r.psi = std::move(psi);
    r.phi = std::move(phi);
    r.iters = it;
    r.grad_norm = gnorm;
    r.converged = converged;
    return r;
}

FidelityLossResult multistart(const ProductObjective& obj, int d_a, int d_b,
                              const OptimizerOptions& opts,
                              const std::vector<std::pair<Vec, Vec>>& extra_starts) {
    const int n_extra = static_cast<int>(extra_starts.size());
    const int total = opts.restarts + n_extra;
    auto runs = map_index<AscentResult>(opts.mode, total, [&](int k) {
        Vec psi, phi;
        if (k < opts.restarts) {
            Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(k)));
            psi = haar_state(d_a, rng);
            phi = obj.phi_free() ? haar_state(d_b, rng) : Vec::Ones(1).eval();
        } else {
            psi = extra_starts[static_cast<std::size_t>(k - opts.restarts)].first;
            phi = extra_starts[static_cast<std::size_t>(k - opts.restarts)].second;
        }
        return ascend(obj, std::move(psi), std::move(phi), opts);
    });

    int best = 0;
    long total_iters = 0;
    for (int k = 0; k < total; ++k) {
        total_iters += runs[static_cast<std::size_t>(k)].iters;
        if (runs[static_cast<std::size_t>(k)].eta > runs[static_cast<std::size_t>(best)].eta)
            best = k;
    }
    const AscentResult& w = runs[static_cast<std::size_t>(best)];
    FidelityLossResult out;
    out.eta = w.eta;
    out.argmax_psi_a = w.psi;
    out.argmax_phi_b = w.phi;
    out.meta.restarts = total;
    out.meta.total_iterations = total_iters;
    out.meta.grad_residual = w.grad_norm;
    out.meta.converged = w.converged;
    return out;
}

// eta for a recovery/noise chain through the code-frame superoperator T:
// g(psi, phi) = <psi| tr_B[T(chi chi^dag)] |psi>, chi = psi (x) phi.
struct ChainObjective final : ProductObjective {
    Mat t_mat, t_adj;
    int d_a, d_b;

    ChainObjective(Mat t, int da, int db) : t_mat(std::move(t)), d_a(da), d_b(db) {
        t_adj = t_mat.adjoint();
    }

    bool phi_free() const override { return d_b > 1; }

    static Vec product(const Vec& psi, const Vec& phi) {
        Vec chi(psi.size() * phi.size());
        for (Eigen::Index a = 0; a < psi.size(); ++a)
            for (Eigen::Index b = 0; b < phi.size(); ++b) chi(a * phi.size() + b) = psi(a) * phi(b);
        return chi;
    }

    double value(const Vec& psi, const Vec& phi) const override {
        const Vec chi = product(psi, phi);
        const int d = d_a * d_b;
        const Mat m = unvec(t_mat * vec_of((chi * chi.adjoint()).eval()), d);
        const Mat ma = partial_trace_b(m, d_a, d_b);
        return 1.0 - std::real(psi.dot(ma * psi));
    }

    void grad(const Vec& psi, const Vec& phi, Vec& gpsi, Vec& gphi) const override {
        const Vec chi = product(psi, phi);
        const int d = d_a * d_b;
        const Mat m = unvec(t_mat * vec_of((chi * chi.adjoint()).eval()), d);
        const Mat ma = partial_trace_b(m, d_a, d_b);
        Mat obs = Mat::Zero(d, d);  // psi psi^dag (x) I_B
        for (int a = 0; a < d_a; ++a)
            for (int a2 = 0; a2 < d_a; ++a2)
                for (int b = 0; b < d_b; ++b)
                    obs(a * d_b + b, a2 * d_b + b) = psi(a) * std::conj(psi(a2));
        const Vec wchi = unvec(t_adj * vec_of(obs), d) * chi;
        // d g / d conj(psi) = M_A psi + sum_b conj(phi_b) (W chi)_(a,b)
        gpsi = ma * psi;
        for (int a = 0; a < d_a; ++a) {
            Cplx acc = 0.0;
            for (int b = 0; b < d_b; ++b) acc += wchi(a * d_b + b) * std::conj(phi(b));
            gpsi(a) += acc;
        }
        gphi.resize(d_b);
        for (int b = 0; b < d_b; ++b) {
            Cplx acc = 0.0;
            for (int a = 0; a < d_a; ++a) acc += wchi(a * d_b + b) * std::conj(psi(a));
            gphi(b) = acc;
        }
        gpsi *= -2.0;  // eta = 1 - g, Euclidean factor 2
        gphi *= -2.0;
    }
};

// Same chain but with a fixed density matrix on B:
// g(psi) = <psi| tr_B[T(psi psi^dag (x) phi_B)] |psi>.
struct FixedBObjective final : ProductObjective {
    Mat t_mat, t_adj, phi_b;
    int d_a, d_b;

    FixedBObjective(Mat t, Mat phib, int da, int db)
        : t_mat(std::move(t)), phi_b(std::move(phib)), d_a(da), d_b(db) {
        t_adj = t_mat.adjoint();
    }

    bool phi_free() const override { return false; }

    double value(const Vec& psi, const Vec&) const override {
        const int d = d_a * d_b;
        const Mat in = tensor((psi * psi.adjoint()).eval(), phi_b);
        const Mat m = unvec(t_mat * vec_of(in), d);
        const Mat ma = partial_trace_b(m, d_a, d_b);
        return 1.0 - std::real(psi.dot(ma * psi));
    }

    void grad(const Vec& psi, const Vec&, Vec& gpsi, Vec& gphi) const override {
        const int d = d_a * d_b;
        const Mat in = tensor((psi * psi.adjoint()).eval(), phi_b);
        const Mat m = unvec(t_mat * vec_of(in), d);
        const Mat ma = partial_trace_b(m, d_a, d_b);
        Mat obs = Mat::Zero(d, d);
        for (int a = 0; a < d_a; ++a)
            for (int a2 = 0; a2 < d_a; ++a2)
                for (int b = 0; b < d_b; ++b)
                    obs(a * d_b + b, a2 * d_b + b) = psi(a) * std::conj(psi(a2));
        const Mat w = unvec(t_adj * vec_of(obs), d);
        // inner occurrence: tr_B[ W (I (x) phi_B) ]
        Mat g_inner = Mat::Zero(d_a, d_a);
        for (int a = 0; a < d_a; ++a)
            for (int a2 = 0; a2 < d_a; ++a2) {
                Cplx acc = 0.0;
                for (int b = 0; b < d_b; ++b)
                    for (int b2 = 0; b2 < d_b; ++b2)
                        acc += w(a * d_b + b, a2 * d_b + b2) * phi_b(b2, b);
                g_inner(a, a2) = acc;
            }
        gpsi = -2.0 * ((ma * psi) + (g_inner * psi));
        gphi = Vec::Zero(1);
    }
};

// eta_P from the residual grid (the Delta expression).
struct DeltaObjective final : ProductObjective {
    std::vector<Mat> deltas;  // nonzero residuals only
    int d_a, d_b;

    DeltaObjective(const ResidualDecomposition& res) : d_a(res.d_a), d_b(res.d_b) {
        for (const Mat& dm : res.deltas)
            if (dm.norm() > 1e-15) deltas.push_back(dm);
    }

    bool phi_free() const override { return d_b > 1; }

    double value(const Vec& psi, const Vec& phi) const override {
        const Vec chi = ChainObjective::product(psi, phi);
        double h = 0.0;
        for (const Mat& dm : deltas) {
            const Vec y = dm * chi;
            double z2 = 0.0;
            for (int b = 0; b < d_b; ++b) {
                Cplx z = 0.0;
                for (int a = 0; a < d_a; ++a) z += std::conj(psi(a)) * y(a * d_b + b);
                z2 += std::norm(z);
            }
            h += y.squaredNorm() - z2;
        }
        return h;
    }

    void grad(const Vec& psi, const Vec& phi, Vec& gpsi, Vec& gphi) const override {
        const Vec chi = ChainObjective::product(psi, phi);
        Vec gchi = Vec::Zero(chi.size());
        gpsi = Vec::Zero(d_a);
        for (const Mat& dm : deltas) {
            const Vec y = dm * chi;
            Vec z(d_b);
            for (int b = 0; b < d_b; ++b) {
                Cplx acc = 0.0;
                for (int a = 0; a < d_a; ++a) acc += std::conj(psi(a)) * y(a * d_b + b);
                z(b) = acc;
            }
            Vec pz(chi.size());  // (psi (x) z)
            for (int a = 0; a < d_a; ++a)
                for (int b = 0; b < d_b; ++b) pz(a * d_b + b) = psi(a) * z(b);
            gchi += dm.adjoint() * (y - pz);
            for (int a = 0; a < d_a; ++a) {
                Cplx acc = 0.0;
                for (int b = 0; b < d_b; ++b) acc += y(a * d_b + b) * std::conj(z(b));
                gpsi(a) -= acc;
            }
        }
        for (int a = 0; a < d_a; ++a) {
            Cplx acc = 0.0;
            for (int b = 0; b < d_b; ++b) acc += gchi(a * d_b + b) * std::conj(phi(b));
            gpsi(a) += acc;
        }
        gphi.resize(d_b);
        for (int b = 0; b < d_b; ++b) {
            Cplx acc = 0.0;
            for (int a = 0; a < d_a; ++a) acc += gchi(a * d_b + b) * std::conj(psi(a));
            gphi(b) = acc;
        }
        gpsi *= 2.0;
        gphi *= 2.0;
    }
};

}  // namespace

FidelityLossResult eta_code(const SubsystemCode& code, const KrausChannel& noise,
                            const KrausChannel& rec, const OptimizerOptions& opts,
                            const std::vector<std::pair<Vec, Vec>>& extra_starts) {
    ChainObjective obj(code_frame_superop(code, noise, rec), code.d_a, code.d_b);
    return multistart(obj, code.d_a, code.d_b, opts, extra_starts);
}

FidelityLossResult eta_code_fixed_b(const SubsystemCode& code, const KrausChannel& noise,
                                    const KrausChannel& rec, const Mat& phi_b,
                                    const OptimizerOptions& opts,
                                    const std::vector<Vec>& extra_starts) {
    if (phi_b.rows() != code.d_b || phi_b.cols() != code.d_b)
        throw std::invalid_argument("eta_code_fixed_b: phi_b must be d_b square");
    FixedBObjective obj(code_frame_superop(code, noise, rec), phi_b, code.d_a, code.d_b);
    std::vector<std::pair<Vec, Vec>> extras;
    extras.reserve(extra_starts.size());
    for (const Vec& psi : extra_starts) extras.emplace_back(psi, Vec::Ones(1));
    return multistart(obj, code.d_a, code.d_b, opts, extras);
}

FidelityLossResult eta_p_via_deltas(const ResidualDecomposition& res, const OptimizerOptions& opts,
                                    const std::vector<std::pair<Vec, Vec>>& extra_starts) {
    DeltaObjective obj(res);
    return multistart(obj, res.d_a, res.d_b, opts, extra_starts);
}

double f_bound(double eta, int d) {
    if (d < 1) throw std::invalid_argument("f_bound: d must be >= 1");
    if (eta < -1e-9 || eta > 1.0 + 1e-9)
        throw std::invalid_argument("f_bound: eta outside [0, 1]");
    eta = std::min(std::max(eta, 0.0), 1.0);
    return (static_cast<double>(d + 1) - eta) / (1.0 + static_cast<double>(d - 1) * eta);
}

}  // namespace aqec
