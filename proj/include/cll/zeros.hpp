#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cll/spectral.hpp"

namespace cll {

using CxFn = std::function<cx(cx)>;

struct ZeroHit {
    cx location;
    double newton_resid;  // |f| at the accepted zero
};

struct ZeroSet {
    std::vector<ZeroHit> zeros;
    double winding_defect = 0.0;  // worst |winding - nearest integer| observed
};

struct ZeroSearchOptions {
    int boundary_samples = 96;  // per box side
    int max_depth = 24;
    double target = 1e-10;      // relative |f| at the zero
    double fd_step_rel = 1e-3;  // derivative stencil width relative to |k|
    int newton_iters = 60;
};

/// Winding number of f around the rectangle [lo.re, hi.re] x [lo.im, hi.im]
/// by phase unwrapping; throws winding_ambiguous when the phase jumps too fast
/// even after refinement (boundary passes near a zero).
int winding_number(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt = {},
                   double* defect = nullptr);

/// 4th-order central difference derivative in k.
cx central_derivative(const CxFn& f, cx k, double step);

/// Zeros of f inside the box: winding count, recursive subdivision, Newton
/// refinement. Returns each zero once (no symmetrization).
ZeroSet find_zeros(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt = {});

/// Same, then completed with the mirrored partners -z of every zero
/// (even functions of k come in +- pairs).
ZeroSet find_zeros_paired(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt = {});

/// One residue datum of the sectional function: at `location` the stated
/// column has a simple pole whose residue is coefficient * e^{eta_sign*2i eta}
/// times the other column evaluated there.
struct ResidueEntry {
    std::string family;  // "u", "u_conj", "beta", "beta_conj", "U", "U_conj"
    cx location;
    int column;     // column of E carrying the pole
    cx coefficient;
    int eta_sign;   // +1: e^{+2i eta(location)}, -1: e^{-2i eta}
};

struct ResidueFunctions {
    CxFn u, v, beta;  // z-problem data (beta may be empty if unused)
    CxFn U, V;        // t-problem data (may be empty if unused)
};

/// Residue coefficients for the three zero families:
///   u-family     (xi,  col 1): 1/(v(xi) u'(xi)),                    e^{+2i eta}
///   u-conj       (xi~, col 2): -conj(1/(v u')),                     e^{-2i eta}
///   beta-family  (mu,  col 1): -conj(V(mu~)) / (u(mu) beta'(mu)),   e^{+2i eta}
///   beta-conj    (mu~, col 2): -conj(previous),                     e^{-2i eta}
/// plus the t-problem family at zeros of U: V(eps)/U'(eps).
/// Derivatives use the 4th-order stencil of width fd_step_rel * |k|.
std::vector<ResidueEntry> residue_coefficients(const std::vector<cx>& u_zeros,
                                               const std::vector<cx>& beta_zeros,
                                               const std::vector<cx>& U_zeros,
                                               const ResidueFunctions& fns,
                                               double fd_step_rel = 1e-3,
                                               double floor = 1e-12);

}  // namespace cll
