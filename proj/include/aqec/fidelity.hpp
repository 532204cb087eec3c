// fidelity.hpp
// Fidelity-loss functionals and their maximization over the code.
//
// eta_R{rho} = 1 - F^2(tr_B rho, tr_B[(R o E)(rho)]). The worst case over
// the code is attained on pure product states, so the maximizers run
// projected gradient ascent on the product of unit spheres (Armijo
// backtracking, factor 0.5 from step 1.0, convergence at gradient norm
// 1e-8), with seeded Haar-random restarts. Restarts are independent and
// run through the parallel kernels; the winner is the best value with
// lowest restart index, so results do not depend on thread count.

#pragma once

#include <cstdint>
#include <vector>

#include "aqec/recovery.hpp"

namespace aqec {

struct OptimizerOptions {
    int restarts = 32;
    int max_iters = 500;
    double grad_tol = 1e-8;
    std::uint64_t seed = 12345;
    ExecMode mode = ExecMode::parallel;
};

struct OptimizerMeta {
    int restarts = 0;
    long total_iterations = 0;
    double grad_residual = 0.0;  // projected gradient norm at the winner
    bool converged = false;
};

struct FidelityLossResult {
    double eta = 0.0;
    Vec argmax_psi_a;
    Vec argmax_phi_b;  // [1] for d_b = 1 or fixed-B families
    OptimizerMeta meta;
};

// Superoperator of decode o rec o noise o encode on the code frame,
// column-major vec convention; (d_a*d_b)^2 square.
Mat code_frame_superop(const SubsystemCode& code, const KrausChannel& noise,
                       const KrausChannel& rec);

// Fidelity loss of one code state under noise + recovery. Uses the
// pure-state fidelity form when rho_a is pure.
double eta_state(const SubsystemCode& code, const KrausChannel& noise, const KrausChannel& rec,
                 const CodeState& s);

// Worst-case fidelity loss over the code (pure product states).
// extra_starts are appended to the seeded restarts; (psi, phi) pairs.
FidelityLossResult eta_code(const SubsystemCode& code, const KrausChannel& noise,
                            const KrausChannel& rec, const OptimizerOptions& opts,
                            const std::vector<std::pair<Vec, Vec>>& extra_starts = {});

// Worst case over {psi_A (x) phi_B} with phi_B a fixed density matrix
// (the C_0 family for phi_B = I/d_b, or any fixed reference state).
FidelityLossResult eta_code_fixed_b(const SubsystemCode& code, const KrausChannel& noise,
                                    const KrausChannel& rec, const Mat& phi_b,
                                    const OptimizerOptions& opts,
                                    const std::vector<Vec>& extra_starts = {});

// Transpose-channel fidelity loss evaluated from the residual grid alone:
// max over pure products of
//   <phi| sum_ij [ <psi|D^dag D|psi> - <psi|D^dag|psi><psi|D|psi> ] |phi>,
// D = Delta_ij. Must agree with eta_code(code, noise, transpose_channel).
FidelityLossResult eta_p_via_deltas(const ResidualDecomposition& res,
                                    const OptimizerOptions& opts,
                                    const std::vector<std::pair<Vec, Vec>>& extra_starts = {});

// f(eta; d) = ((d+1) - eta) / (1 + (d-1) eta). Requires eta in [0,1]
// (grace 1e-9) and d >= 1.
double f_bound(double eta, int d);

// --- see-saw estimate of the optimal recovery ------------------------------

struct SeesawOptions {
    OptimizerOptions state_opt{};
    int max_rounds = 200;
    int min_rounds = 2;       // rounds before the improvement test may stop
    double round_tol = 1e-7;  // stop when eta improves by less than this
    int subgrad_steps = 40;
    int dykstra_max_iters = 300;
    double dykstra_tol = 1e-9;
    bool seed_with_transpose = true;  // disable to benchmark the search alone
};

struct RecoveryEstimate {
    KrausChannel recovery;
    double eta_upper = 1.0;        // = evaluated eta of `recovery`; >= eta_op
    std::vector<double> history;   // incumbent eta per round, non-increasing
    int rounds = 0;
    bool converged = false;
    OptimizerMeta meta;            // from the final evaluation
};

// Alternates (1) a projected-subgradient ascent of the min fidelity over
// the current witness set, over the PSD + TP-constrained Choi matrices of
// recoveries B(supp E(P)) -> B(code subspace), and (2) re-finding worst
// states. Seeded with the transpose channel, so eta_upper never exceeds
// the transpose-channel loss. If phi_b_fixed is set, the code family is
// {psi_A (x) phi_b_fixed} instead of all product states. extra_seeds are
// additional candidate recoveries folded into the incumbent choice.
RecoveryEstimate estimate_optimal_recovery(const SubsystemCode& code, const KrausChannel& noise,
                                           const SeesawOptions& opts,
                                           const Mat* phi_b_fixed = nullptr,
                                           const std::vector<KrausChannel>& extra_seeds = {});

}  // namespace aqec
