// operator_core.hpp
// Dense complex operator primitives: tensor products, partial traces,
// Hermitian spectral calculus and fidelity. Everything downstream is built
// on these. Matrices are Eigen::MatrixXcd throughout; dimensions at desk
// scale (<= 64), so no sparse or structured paths.

#pragma once

#include <Eigen/Dense>
#include <complex>

#include "aqec/rng.hpp"

namespace aqec {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Mat identity(int d);

// Kronecker product; dimensions multiply.
Mat tensor(const Mat& a, const Mat& b);

// Trace out the second (first) tensor factor of a (d_a*d_b) x (d_a*d_b)
// operator. Index convention is row-major: composite index = a*d_b + b.
Mat partial_trace_b(const Mat& m, int d_a, int d_b);
Mat partial_trace_a(const Mat& m, int d_a, int d_b);

bool is_hermitian(const Mat& m, double tol = 1e-12);

// Eigenvalues in descending order, eigenvectors as orthonormal columns.
struct HermitianEigenSystem {
    Eigen::VectorXd eigenvalues;
    Mat eigenvectors;
};

HermitianEigenSystem hermitian_eig(const Mat& m, double herm_tol = 1e-12);

// f(M) for Hermitian M via the spectral decomposition.
// Eigenvalues at or below the relative cutoff rel_tol * lambda_max are
// treated as zero (mapped by f(0) semantics of the specific wrapper).
Mat inv_sqrt_on_support(const Mat& m, double rel_tol = 1e-10);
Mat sqrt_psd(const Mat& m, double herm_tol = 1e-10);
Mat support_projector(const Mat& m, double rel_tol = 1e-10);

double operator_norm(const Mat& m);  // largest singular value
double trace_norm(const Mat& m);     // sum of singular values

// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)). Inputs must be PSD
// (eigenvalues above -1e-9) with unit trace within 1e-9.
double fidelity(const Mat& rho, const Mat& sigma);

// F(|psi>, sigma) = sqrt(<psi|sigma|psi>); sigma may be subnormalized.
double fidelity_pure(const Vec& psi, const Mat& sigma);

// fidelity without the unit-trace gate, for decoded states that may have
// lost weight outside the code space.
double fidelity_sub(const Mat& rho, const Mat& sigma);

// --- random objects (all deterministic given the Rng state) -------------

Mat gaussian_matrix(int rows, int cols, Rng& rng);
Vec haar_state(int dim, Rng& rng);
Mat haar_isometry(int rows, int cols, Rng& rng);  // rows >= cols, V^dag V = I
Mat haar_unitary(int d, Rng& rng);
Mat random_density(int d, Rng& rng);

}  // namespace aqec
