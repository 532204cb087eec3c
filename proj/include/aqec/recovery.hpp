// recovery.hpp
// The transpose-channel recovery and the algebra around it: perfect
// correctability checkers in two equivalent forms, the residual
// decomposition P E_i^dag E(P)^{-1/2} E_j P = P_A (x) B_ij + Delta_ij,
// and the canonical sector form of a perfectly correctable channel.
//
// Residuals are computed and stored in the embedded d_a*d_b frame
// (conjugated through the code isometry), so "P_A (x) X" is a literal
// Kronecker structure there. B_ij is fixed as the Hilbert-Schmidt
// projection of the left side onto {I_A (x) X}; that choice minimizes
// each ||Delta_ij||_F and makes the split unique.

#pragma once

#include <utility>
#include <vector>

#include "aqec/code.hpp"
#include "aqec/parallel.hpp"

namespace aqec {

// Kraus list {P E_i^dag E(P)^{-1/2}}; trace-preserving on the support of
// E(P). Requires the noise domain to equal the code projector.
KrausChannel transpose_channel(const SubsystemCode& code, const KrausChannel& noise);

// Kraus list {(P_A (x) sqrt(phi_B)) E_i^dag [E(P_A (x) phi_B)]^{-1/2}} for a
// fixed reference state phi_B on the gauge subsystem.
KrausChannel state_dependent_transpose(const SubsystemCode& code, const KrausChannel& noise,
                                       const Mat& phi_b);

struct ResidualDecomposition {
    int n = 0;  // Kraus count of the noise
    int d_a = 0;
    int d_b = 0;
    std::vector<Mat> b_ops;   // n*n grid of d_b x d_b blocks, index i*n + j
    std::vector<Mat> deltas;  // n*n grid of (d_a*d_b) square residuals
    double sum_delta_norm = 0.0;  // ||sum_ij Delta_ij^dag Delta_ij||_op
    double max_delta_fro = 0.0;

    const Mat& b(int i, int j) const { return b_ops[static_cast<std::size_t>(i) * n + j]; }
    const Mat& delta(int i, int j) const { return deltas[static_cast<std::size_t>(i) * n + j]; }
};

ResidualDecomposition residuals(const SubsystemCode& code, const KrausChannel& noise,
                                ExecMode mode = ExecMode::parallel);

// True iff max_ij ||Delta_ij||_F <= tol; the full decomposition is always
// returned.
std::pair<bool, ResidualDecomposition> check_perfect_form_a(const SubsystemCode& code,
                                                            const KrausChannel& noise, double tol);

struct FormBResult {
    bool ok = false;
    double max_residual_fro = 0.0;
    int n = 0;
    std::vector<Mat> b_prime;  // n*n grid of d_b x d_b blocks

    const Mat& b(int i, int j) const { return b_prime[static_cast<std::size_t>(i) * n + j]; }
};

// Checks P E_i^dag E_j P = P_A (x) B'_ij (no normalization factor).
FormBResult check_perfect_form_b(const SubsystemCode& code, const KrausChannel& noise, double tol);

// Sector form of a perfectly correctable channel: weights d_is >= 0,
// isometries V_is (d_h x d_a) and orthogonal projectors P_is = V_is V_is^dag
// with sum_is d_is P_is = E(P). Zero-weight sectors (d < 1e-12) are dropped.
struct CanonicalKraus {
    Eigen::VectorXd d_vals;        // descending
    std::vector<Mat> isometries;   // d_h x d_a each
    std::vector<Mat> projectors;   // d_h x d_h each
};

// Requires check_perfect_form_b to pass at 1e-8; throws otherwise,
// reporting the residual.
CanonicalKraus canonicalize(const SubsystemCode& code, const KrausChannel& noise);

}  // namespace aqec
