// code.hpp
// Subsystem codes: an isometric embedding V of H_A (x) H_B into the
// physical space H, with the information subsystem A and the gauge (noisy)
// subsystem B. The isometry, not just the projector V V^dag, is the datum:
// the A/B tensor split inside the subspace is part of the code.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/operator_core.hpp"

namespace aqec {

struct SubsystemCode {
    int d_a = 0;
    int d_b = 0;
    int d_h = 0;
    Mat embedding;  // d_h x (d_a*d_b), V^dag V = I

    int d_ab() const { return d_a * d_b; }
};

// Validates dimensions and the isometry property to 1e-10.
SubsystemCode make_code(int d_a, int d_b, int d_h, Mat embedding);

SubsystemCode trivial_code(int d_a, int d_b);  // d_h = d_a*d_b, V = I
SubsystemCode random_code(int d_a, int d_b, int d_h, Rng& rng);

Mat code_projector(const SubsystemCode& code);  // P = V V^dag

struct CodeState {
    Mat rho_a;  // d_a x d_a density matrix
    Mat rho_b;  // d_b x d_b density matrix
};

CodeState make_code_state(Mat rho_a, Mat rho_b);  // both PSD, unit trace to 1e-10

// rho_A (x) P_B/d_B, the gauge-averaged slice of the code.
CodeState maximally_mixed_b_state(const SubsystemCode& code, Mat rho_a);

Mat embed(const SubsystemCode& code, const CodeState& s);   // V (rho_a (x) rho_b) V^dag
Mat embed_ab(const SubsystemCode& code, const Mat& x_ab);   // V x V^dag
Mat decode_ab(const SubsystemCode& code, const Mat& y);     // V^dag y V
Vec embed_pure(const SubsystemCode& code, const Vec& psi_a, const Vec& phi_b);

// Decode-to-A map: tr_B(V^dag rho V) for a physical-space rho.
Mat logical_state_a(const SubsystemCode& code, const Mat& rho);

// --- gallery --------------------------------------------------------------

struct GalleryParams {
    double p = 0.1;      // flip / gauge-Pauli probability
    double gamma = 0.1;  // per-qubit amplitude damping
    double depol = 0.5;  // depolarizing strength of B factors
};

// Present when the noise is an explicit product F_A (x) F_B over factor
// codes; the product scenario consumes these pieces.
struct ProductFactors {
    SubsystemCode code_a;
    KrausChannel fa;
    SubsystemCode code_b;
    KrausChannel fb;
};

struct GalleryEntry {
    std::string name;
    SubsystemCode code;
    KrausChannel noise;
    std::optional<ProductFactors> factors;
};

// Matched code/noise pairs:
//   "bitflip3"  3-qubit repetition code, single-bit-flip Kraus set (p)
//   "gauge422"  4-qubit code with one logical and one gauge qubit,
//               Pauli noise on the gauge qubit (p)
//   "ad4"       4-qubit amplitude-damping code, per-qubit damping (gamma)
//   "product"   bit flip on A (x) depolarizing on B (p, depol)
//   "b_eraser"  identity on A (x) erase-B-to-|0><0|
GalleryEntry gallery(const std::string& name, const GalleryParams& params = {});

const std::vector<std::string>& gallery_names();

}  // namespace aqec
