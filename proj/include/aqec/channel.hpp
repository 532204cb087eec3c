// channel.hpp
// CPTP maps in Kraus form. A channel carries the projector it is
// trace-preserving on (its domain): codes live in proper subspaces, so
// sum_i E_i^dag E_i equals a projector P rather than the identity.
// Channel equality is always decided through Choi matrices, never by
// comparing Kraus lists (the representation is not unique).

#pragma once

#include <vector>

#include "aqec/operator_core.hpp"

namespace aqec {

struct KrausChannel {
    std::vector<Mat> kraus;  // each dim_out x dim_in
    Mat domain;              // dim_in x dim_in projector the map is TP on

    int dim_in() const { return static_cast<int>(kraus.at(0).cols()); }
    int dim_out() const { return static_cast<int>(kraus.at(0).rows()); }
    int size() const { return static_cast<int>(kraus.size()); }
};

// ||sum_i E_i^dag E_i - domain||_F
double tp_defect(const KrausChannel& ch);

// Validating constructor; throws if dimensions are inconsistent or the
// trace-preservation defect exceeds 1e-9.
KrausChannel make_channel(std::vector<Mat> kraus, Mat domain);

// Restrict a channel to a subspace: Kraus E_i -> E_i P, domain = P.
KrausChannel restrict_to(const KrausChannel& ch, const Mat& projector);

KrausChannel identity_channel(int d);

Mat apply_channel(const KrausChannel& ch, const Mat& rho);

// Kraus list {E_i^dag}. The result is CP but generally not TP; it is not
// validated. Satisfies tr(A * ch(B)) = tr(adjoint(ch)(A) * B).
KrausChannel adjoint(const KrausChannel& ch);

// Kraus list of all pairwise products {O_j * I_i}.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

// Drop Kraus operators with operator norm below thresh.
KrausChannel prune(const KrausChannel& ch, double thresh = 1e-12);

// Kraus list {A_i tensor B_j}.
KrausChannel product_channel(const KrausChannel& fa, const KrausChannel& fb);

struct ChoiMatrix {
    Mat matrix;  // (dim_in*dim_out) square, index (k,m) = k*dim_out + m
    int dim_in = 0;
    int dim_out = 0;
};

// Convention: J = sum_i v_i v_i^dag with v_i[(k,m)] = conj(E_i(m,k)), so J
// is PSD and the partial trace over the output index equals the domain
// projector itself (not its transpose).
ChoiMatrix choi(const KrausChannel& ch);

double choi_distance(const KrausChannel& a, const KrausChannel& b);

// Recover a Kraus list from a Choi matrix (eigenvectors scaled by
// sqrt(eigenvalue); eigenvalues below cut are dropped).
std::vector<Mat> kraus_from_choi(const ChoiMatrix& j, double cut = 1e-12);

// --- stock channels ------------------------------------------------------

KrausChannel bit_flip_channel(double p);   // {sqrt(1-p) I, sqrt(p) X} on a qubit
KrausChannel depolarizing_channel(int d, double s);  // rho -> (1-s) rho + s tr(rho) I/d
KrausChannel amplitude_damping_channel(double gamma);
KrausChannel erase_to_state_channel(const Mat& tau);  // rho -> tr(rho) tau

}  // namespace aqec
