#pragma once

#include "cll/spectral.hpp"

namespace cll {

/// Theta densities rebuilt from the expansion coefficient h = h^{(1)}_{12}:
/// theta1 = |h|^2, theta2 = -2|h|^4 - 2 Im(conj(h) h_z). Composed with
/// r = 2i h e^{2i theta} this reproduces theta_density(r, r_z) exactly.
inline ThetaDensity theta_from_h(cx h, cx hz) {
    double a2 = std::norm(h);
    return {a2, -2.0 * a2 * a2 - 2.0 * std::imag(std::conj(h) * hz)};
}

struct Reconstruction {
    std::vector<double> t_samples;   // subset of stored slice times
    std::vector<cx> h;               // row-major, t outer, z inner
    std::vector<cx> r_rec;
    std::vector<double> theta_rec;   // cumulative Theta along the canonical path
    std::vector<double> abs_err;     // |r_rec - r_field|
    int nz = 0, nt = 0;
    double sup_err = 0.0;            // over the interior window
    double sup_rel_err = 0.0;        // sup_err / max |r|
    double l2_err = 0.0;
};

struct ReconstructOptions {
    double ladder_scale = 1.0;
    bool richardson = true;     // second ladder at 2x scale, 4th-order extrapolation
    int t_stride = 8;           // reconstruct every t_stride-th stored slice
    double interior_z = 0.8;    // error window z <= interior_z * Z
    int threads = 1;
    SweepOptions sweep;
};

/// Round trip: eigenfunction asymptotics -> h -> Theta -> r = 2i h e^{2i theta}.
Reconstruction reconstruct_field(const PotentialField& f, const ReconstructOptions& opt = {});

struct BoundaryRecovery {
    std::vector<double> t;       // stored slice times
    std::vector<cx> s0_rec, s1_rec;
    std::vector<double> theta2_rec;
    std::vector<cx> h1, h2_22, h3;  // source expansion coefficients per t
    double sup_err_s0 = 0.0, sup_err_s1 = 0.0;  // vs the solver traces, t >= t_min
};

struct BoundaryOptions {
    double ladder_scale = 1.0;
    bool richardson = true;
    double t_min = 0.02;  // skip the normalization-point layer when reporting errors
    SweepOptions sweep;
};

/// s0 = 2i h^{(1)}_{12} e^{2i int Theta2}, s1 from the third-order coefficient;
/// Theta2 is rebuilt from (h1, h2_22, h3) and integrated by 4th-order quadrature.
BoundaryRecovery recover_boundary(const PotentialField& f, const BoundaryOptions& opt = {});

/// x-RHP jump on the contour m = k^2 - 1/2 real:
///   (1 + delta*conj-delta, delta e^{2imz}; conj-delta e^{-2imz}, 1), det = 1.
Mat2 x_rhp_jump(const SpectralSample& s, double z, double floor = 1e-12);

/// t-RHP jump on the contour m^2 real:
///   (1 + V Vs/(U Us), -(V/U) e^{-4im^2 t}; -(Vs/Us) e^{4im^2 t}, 1), det = 1.
Mat2 t_rhp_jump(const SpectralSample& s, double t, double floor = 1e-12);

}  // namespace cll
