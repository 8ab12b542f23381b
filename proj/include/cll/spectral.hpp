#pragma once

#include <limits>

#include "cll/volterra.hpp"

namespace cll {

/// Public wrapper for a single eigenfunction column (1 or 2) at a point.
Vec2c eigen_column(EigenKind which, const PotentialField& f, double z, double t, cx k, int col,
                   const SweepOptions& opt = {});

/// Spectral functions at one k together with their conjugate-point partners
/// xs(k) = conj(x(conj(k))), which enter beta, delta, Delta and the jumps.
struct SpectralSample {
    cx k;
    cx u{1.0}, v{};  // w = H3(0,0): u = w22, v = w12
    cx U{1.0}, V{};  // W from the t-problem at z=0 over [0,T]
    cx us{1.0}, vs{}, Us{1.0}, Vs{};
    double gr_abs = std::numeric_limits<double>::quiet_NaN();
};

/// (v, u) = column 2 of H3(0,0,k); admissible on the closure of D1 u D2.
void compute_uv(const PotentialField& f, cx k, cx& u, cx& v, const SweepOptions& opt = {});

/// U = H1(0,T,k)_11, V = -e^{4i m^2 T} H1(0,T,k)_12 (entire in k for finite T,
/// growth capped by the sweep budget).
void compute_UV(const PotentialField& f, cx k, cx& U, cx& V, const SweepOptions& opt = {});

/// Full sample at k, using parity/conjugation shortcuts on the contours so the
/// algebraic identities hold to rounding.
SpectralSample make_sample(const PotentialField& f, cx k, const SweepOptions& opt = {});

struct DerivedData {
    cx beta, delta, Delta;
};

/// beta = u*conj(U(k~)) + beta_sign * v*conj(V(k~)); delta = v/us; Delta = -Vs/(u beta).
/// Throws division_floor near zeros of u or beta (route through the zero set).
DerivedData derived_quantities(const SpectralSample& s, int beta_sign = +1, double floor = 1e-12);

struct SectionalEval {
    Mat2 E;
    Region region;
};

/// Piecewise-analytic sectional function from eigenfunction column pairs:
///   D1: ([H2]_1 / beta, [H3]_2)      D2: ([H1]_1 / u, [H3]_2)
///   D3: ([H3]_1, [H2]_2 / beta*)     D4: ([H3]_1, [H1]_2 / u*)
/// det E = 1 and E -> I as k -> infinity.
SectionalEval evaluate_E(const PotentialField& f, double z, double t, const SpectralSample& s,
                         int beta_sign = +1, const SweepOptions& opt = {});

/// Same with the branch forced (for evaluating both sides on a contour point).
SectionalEval evaluate_E_branch(const PotentialField& f, double z, double t,
                                const SpectralSample& s, Region branch, int beta_sign = +1,
                                const SweepOptions& opt = {});

enum class Ray { arg0, arg90, arg180, arg270 };  // arg(k^2 - 1/2) in {0, pi/2, pi, 3pi/2}

/// Jump matrix E+^{-1} E- on the given ray in closed form; every exponential
/// evaluated decays on its ray, and the non-unit corner entries are arranged
/// so det G = 1 is exact algebra:
///   arg 0:    (1, A; B, 1 + A B),  A = e^{-2i eta}(uV - vU)/beta*,
///                                  B = e^{2i eta}(u*V* - v*U*)/beta
///   arg pi/2: (1, e^{-2i eta} V/(u* beta*); 0, 1)
///   arg pi:   (1 + dd*, d e^{-2i eta}; d* e^{2i eta}, 1),  d = v/u*, d* = v*/u
///   arg 3pi/2:(1, 0; e^{2i eta} V*/(u beta), 1)
Mat2 jump_matrix(Ray ray, double z, double t, const SpectralSample& s, int beta_sign = +1,
                 double floor = 1e-12);

/// Same jump assembled as K+^{-1} K- from the shared K factors. Numerically
/// useful only near the corner; satisfies the factorization identity
///   G(pi) = G(pi/2) G(0)^{-1} G(3pi/2)
/// to rounding on shared inputs.
Mat2 jump_matrix_factored(Ray ray, double z, double t, const SpectralSample& s,
                          int beta_sign = +1, double floor = 1e-12);

/// u V - U v - e^{4i m^2 T} c+ with c+ = int_0^Z e^{-2i m z}(A1 H3)_12(z, T) dz.
cx global_relation_residual(const PotentialField& f, cx k, const SweepOptions& opt = {});

/// Default contour grids: per ray, n points m = m_max (q/n)^2 clustered toward
/// the ray intersection k^2 = 1/2; k is the principal branch of sqrt(1/2 + m).
struct RayGrid {
    int n_per_ray = 256;
    double m_max = 15.5;
};

std::vector<cx> ray_points(Ray ray, const RayGrid& g);

/// Samples over all four rays (deterministic order), global-relation residual
/// filled where the truncated c+ integral is admissible.
std::vector<SpectralSample> build_spectral_data(const PotentialField& f, const RayGrid& g,
                                                int threads = 1, bool with_gr = true,
                                                const SweepOptions& opt = {});

}  // namespace cll
