#pragma once

#include <span>

#include "cll/etd.hpp"
#include "cll/field.hpp"
#include "cll/lax.hpp"

namespace cll {

enum class EigenKind { H1, H2, H3 };

struct SweepOptions {
    double refine = 1.0;       // substep multiplier, for convergence studies
    double exp_budget = 40.0;  // cap on the positive growth exponent per leg
    double coupling_h = 0.18;  // |C| h limit for the explicit stages
    double osc_h = 0.08;       // |Im lambda| h limit for underdamped modes
    double acc_h = 5e-3;       // step ceiling resolving the coefficient profile
};

/// One eigenfunction evaluation with its integration metadata.
struct EigenEval {
    Mat2 H;
    EigenKind which;
    double z, t;
    cx k;
    double step;  // representative substep of the final leg
    int order = 4;
    double det_err;
    double tail_bound = 0.0;  // H3: estimate of the neglected coupling beyond the far edge
};

/// H1 is normalized at (0,0), H2 at (0,T), H3 at (Z, t). Paths run the t-leg
/// at z = 0 first (H1, H2), then the z-leg at fixed t; H3 has only the z-leg,
/// integrated downward from Z.
EigenEval solve_H(EigenKind which, const PotentialField& f, double z, double t, cx k,
                  const SweepOptions& opt = {});

/// Column 2 of H3(., t, k) at every z-node, swept once from Z down to 0.
std::vector<Vec2c> sweep_H3_col2(const PotentialField& f, double t, cx k,
                                 const SweepOptions& opt = {});

/// Column 2 of H1(0, ., k) at every stored slice time, swept from 0 to T.
std::vector<Vec2c> sweep_H1_col2_t(const PotentialField& f, cx k,
                                   const SweepOptions& opt = {});

/// Coefficients of the large-k expansion H = I + h1/k + h2/k^2 + h3/k^3 + ...
/// fitted from a ladder of admissible k. Column-2 entries only (a12/a22);
/// the fits are pointwise in (z,t).
struct AsymptoticCoeffs {
    Mat2 h1, h2, h3;
    double residual = 0.0;
};

/// Ladder on the damped ray arg(k^2-1/2) = -pi/4 with |k| near
/// scale * {8, 12, 18, 27, 40}; geometric spacing conditions the fit.
std::vector<cx> default_ladder(double scale = 1.0);

AsymptoticCoeffs asymptotic_coeffs(EigenKind which, const PotentialField& f, double z, double t,
                                   std::span<const cx> ladder, const SweepOptions& opt = {});

/// Least-squares fit of y ~ c1 x + c2 x^2 + c3 x^3 (shared helper).
struct PolyFit {
    cx c1, c2, c3;
    double residual;
};
PolyFit fit_inverse_powers(std::span<const cx> x, std::span<const cx> y);

/// General fit y ~ sum_{p=1..nterms} c_p x^p by Householder QR.
struct PolyFitN {
    std::vector<cx> c;
    double residual;
};
PolyFitN fit_inverse_powers_n(std::span<const cx> x, std::span<const cx> y, int nterms);

/// Geometric ladder of n moduli in [Lmin, Lmax] * scale on the damped ray.
std::vector<cx> ladder_geometric(double scale, int n = 8, double Lmin = 8.0, double Lmax = 40.0);

}  // namespace cll
