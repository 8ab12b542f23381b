#pragma once

#include "cll/mat2.hpp"

namespace cll {

// Transformed Lax-pair coefficients. H solves
//   H_z = i m [sigma, H] + A1 H,   H_t = -2i m^2 [sigma, H] + B1 H,   m = k^2 - 1/2,
// and the compatibility of the pair is the CLL equation together with
// closedness of Theta. theta is the cumulative Theta integral at the point.

/// z-direction coefficient:
///   ( -(i/2)|r|^2           -k r e^{-2i theta} )
///   (  k conj(r) e^{2i theta}   (i/2)|r|^2     )
inline Mat2 build_A1(cx r, cx k, double theta) {
    double a2 = std::norm(r);
    cx ph = std::exp(cx{0.0, 2.0 * theta});
    return {cx{0.0, -0.5 * a2}, -k * r / ph, k * std::conj(r) * ph, cx{0.0, 0.5 * a2}};
}

/// t-direction coefficient: traceless, diagonal even in k, off-diagonals odd.
///   d   = i k^2 |r|^2 - (i/4)|r|^4 + (1/2)(conj(r) r_z - r conj(r_z))
///   b12 = (2 k^3 r - k (i r_z + r + |r|^2 r / 2)) e^{-2i theta}
///   b21 = (-2 k^3 conj(r) + k (-i conj(r_z) + conj(r) + |r|^2 conj(r)/2)) e^{2i theta}
inline Mat2 build_B1(cx r, cx rz, cx k, double theta) {
    double a2 = std::norm(r);
    cx rb = std::conj(r), rzb = std::conj(rz);
    cx d = I * (k * k) * a2 - I * (0.25 * a2 * a2) + 0.5 * (rb * rz - r * rzb);
    cx ph = std::exp(cx{0.0, 2.0 * theta});
    cx k3 = 2.0 * k * k * k;
    cx b12 = (k3 * r - k * (I * rz + r + 0.5 * a2 * r)) / ph;
    cx b21 = (-k3 * rb + k * (-I * rzb + rb + 0.5 * a2 * rb)) * ph;
    return {d, b12, b21, -d};
}

}  // namespace cll
