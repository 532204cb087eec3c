// Test-only oracles, independent of the library's computation paths.

#pragma once

#include <cmath>
#include <vector>

#include "aqec/operator_core.hpp"

namespace oracles {

using aqec::Mat;
using aqec::Vec;

// Largest singular value by power iteration on M^dag M.
inline double power_iteration_norm(const Mat& m, int iters = 2000) {
    const Mat g = m.adjoint() * m;
    Vec v = Vec::Ones(g.rows()).normalized();
    double lam = 0.0;
    for (int i = 0; i < iters; ++i) {
        Vec w = g * v;
        lam = w.norm();
        if (lam == 0.0) return 0.0;
        v = w / lam;
    }
    return std::sqrt(lam);
}

// Deterministic quasi-uniform grid of n pure qubit states (Fibonacci
// sphere on the Bloch ball surface).
inline std::vector<Vec> bloch_grid(int n) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(n));
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n;
        const double theta = std::acos(z);
        const double phi = golden * k;
        Vec psi(2);
        psi(0) = std::cos(theta / 2.0);
        psi(1) = std::exp(aqec::Cplx(0.0, phi)) * std::sin(theta / 2.0);
        out.push_back(std::move(psi));
    }
    return out;
}

}  // namespace oracles
