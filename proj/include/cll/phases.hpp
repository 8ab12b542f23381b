#pragma once

#include <cmath>

#include "cll/mat2.hpp"

namespace cll {

// Spectral phases of the half-line problem. Throughout, m(k) = k^2 - 1/2 is the
// natural variable: the z-flow has rate i*m and the t-flow rate -2i*m^2.

inline cx spectral_m(cx k) { return k * k - 0.5; }

/// phi(k) = i(k^2 - 1/2), the z-direction exponent density.
inline cx phase_phi(cx k) { return I * spectral_m(k); }

/// psi(k) = 2i(k^2 - 1/2)^2, the t-direction exponent density.
inline cx phase_psi(cx k) {
    cx m = spectral_m(k);
    return 2.0 * I * m * m;
}

/// eta(k; z, t) = -(k^2 - 1/2) z + 2 (k^2 - 1/2)^2 t, the oscillation phase of jump data.
inline cx phase_eta(cx k, double z, double t) {
    cx m = spectral_m(k);
    return -m * z + 2.0 * m * m * t;
}

enum class Region { D1, D2, D3, D4, Boundary };

/// Sign-based classification by (Re phi, Re psi). Boundary when either sign is
/// within tol of zero. Default tolerance is scale-aware in |k|^2.
inline Region region_of(cx k, double tol) {
    double rp = phase_phi(k).real();
    double rq = phase_psi(k).real();
    if (rp > tol && rq > tol) return Region::D1;
    if (rp > tol && rq < -tol) return Region::D2;
    if (rp < -tol && rq < -tol) return Region::D3;
    if (rp < -tol && rq > tol) return Region::D4;
    return Region::Boundary;
}

inline Region region_of(cx k) {
    double tol = 1e-12 * std::max(1.0, std::norm(k));
    return region_of(k, tol);
}

inline const char* region_name(Region r) {
    switch (r) {
        case Region::D1: return "D1";
        case Region::D2: return "D2";
        case Region::D3: return "D3";
        case Region::D4: return "D4";
        default: return "Boundary";
    }
}

/// Densities of the conserved 1-form Theta = Theta1 dz + Theta2 dt.
/// Both components are real by construction; Theta2 is evaluated from the
/// algebraically real rearrangement |r|^4/8 - Im(conj(r) r_z)/2 so no imaginary
/// part is silently dropped.
struct ThetaDensity {
    double theta1{};
    double theta2{};
};

inline ThetaDensity theta_density(cx r, cx rz) {
    double a2 = std::norm(r);
    return {0.25 * a2, 0.125 * a2 * a2 - 0.5 * std::imag(std::conj(r) * rz)};
}

}  // namespace cll
