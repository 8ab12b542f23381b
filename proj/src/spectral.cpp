#include "cll/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cll/volterra_detail.hpp"

namespace cll {

Vec2c eigen_column(EigenKind which, const PotentialField& f, double z, double t, cx k, int col,
                   const SweepOptions& opt) {
    return detail::column_of(which, f, z, t, k, col, opt);
}

void compute_uv(const PotentialField& f, cx k, cx& u, cx& v, const SweepOptions& opt) {
    Vec2c c2 = detail::column_of(EigenKind::H3, f, 0.0, 0.0, k, 2, opt);
    v = c2.a;
    u = c2.b;
}

void compute_UV(const PotentialField& f, cx k, cx& U, cx& V, const SweepOptions& opt) {
    const double T = f.grid.T;
    cx m = spectral_m(k);
    // Two algebraically identical routes with complementary stability:
    // W^{-1} = e^{2i m^2 T sigma-hat} H1(0,T) is stable for Im m^2 <= 0,
    // W = H2(0,0) for Im m^2 >= 0.
    if ((m * m).imag() <= 0.0) {
        Vec2c c1 = detail::column_of(EigenKind::H1, f, 0.0, T, k, 1, opt);
        Vec2c c2 = detail::column_of(EigenKind::H1, f, 0.0, T, k, 2, opt);
        U = c1.a;
        V = -std::exp(4.0 * I * m * m * T) * c2.a;
    } else {
        Vec2c c2 = detail::column_of(EigenKind::H2, f, 0.0, 0.0, k, 2, opt);
        V = c2.a;
        U = c2.b;
    }
}

SpectralSample make_sample(const PotentialField& f, cx k, const SweepOptions& opt) {
    const cx cnan{std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN()};
    SpectralSample s;
    s.k = k;
    // u, v are only bounded-analytic on the closure of D1 u D2; outside the
    // sweep budget they are reported as NaN rather than extrapolated.
    try {
        compute_uv(f, k, s.u, s.v, opt);
    } catch (const region_violation&) {
        s.u = s.v = cnan;
    }
    try {
        compute_UV(f, k, s.U, s.V, opt);
    } catch (const region_violation&) {
        s.U = s.V = cnan;
    }
    const double ak = std::abs(k);
    if (std::abs(k.imag()) < 1e-14 * std::max(1.0, ak)) {
        // real k: conj(k) = k
        s.us = std::conj(s.u);
        s.vs = std::conj(s.v);
        s.Us = std::conj(s.U);
        s.Vs = std::conj(s.V);
    } else if (std::abs(k.real()) < 1e-14 * std::max(1.0, ak)) {
        // imaginary k: conj(k) = -k and parity x(-k) = +-x(k)
        s.us = std::conj(s.u);
        s.vs = -std::conj(s.v);
        s.Us = std::conj(s.U);
        s.Vs = -std::conj(s.V);
    } else {
        cx u2, v2, U2, V2;
        try {
            compute_uv(f, std::conj(k), u2, v2, opt);
            s.us = std::conj(u2);
            s.vs = std::conj(v2);
        } catch (const region_violation&) {
            s.us = s.vs = cnan;
        }
        try {
            compute_UV(f, std::conj(k), U2, V2, opt);
            s.Us = std::conj(U2);
            s.Vs = std::conj(V2);
        } catch (const region_violation&) {
            s.Us = s.Vs = cnan;
        }
    }
    return s;
}

DerivedData derived_quantities(const SpectralSample& s, int beta_sign, double floor) {
    DerivedData d;
    d.beta = s.u * s.Us + double(beta_sign) * s.v * s.Vs;
    double scale = std::max(1.0, std::abs(s.u));
    if (std::abs(s.us) < floor * scale) throw division_floor("conj(u(conj k)) below floor");
    d.delta = s.v / s.us;
    if (std::abs(s.u * d.beta) < floor * scale) throw division_floor("u*beta below floor");
    d.Delta = -s.Vs / (s.u * d.beta);
    return d;
}

namespace {

// K factors expressing each branch of E in the H1(z,t)-column basis.
// det K = 1 holds algebraically when beta / beta* come from the same sample,
// so the jumps K+^{-1} K- have unit determinant to rounding.
Mat2 K_D1(const SpectralSample& s, cx e2ie, int bsign) {
    cx beta = s.u * s.Us + double(bsign) * s.v * s.Vs;
    return {s.Us / beta, s.v / e2ie, -e2ie * s.Vs / beta, s.u};
}
Mat2 K_D2(const SpectralSample& s, cx e2ie) { return {1.0 / s.u, s.v / e2ie, 0.0, s.u}; }
Mat2 K_D3(const SpectralSample& s, cx e2ie, int bsign) {
    cx betas = s.us * s.U + double(bsign) * s.vs * s.V;
    return {s.us, s.V / (e2ie * betas), -e2ie * s.vs, s.U / betas};
}
Mat2 K_D4(const SpectralSample& s, cx e2ie) { return {s.us, 0.0, -e2ie * s.vs, 1.0 / s.us}; }

void check_floor(const SpectralSample& s, int bsign, double floor) {
    cx beta = s.u * s.Us + double(bsign) * s.v * s.Vs;
    double scale = std::max(1.0, std::abs(s.u));
    if (std::abs(s.u) < floor * scale || std::abs(s.us) < floor * scale ||
        std::abs(beta) < floor * scale)
        throw division_floor("u or beta below floor at the requested k");
}

}  // namespace

SectionalEval evaluate_E(const PotentialField& f, double z, double t, const SpectralSample& s,
                         int beta_sign, const SweepOptions& opt) {
    return evaluate_E_branch(f, z, t, s, region_of(s.k), beta_sign, opt);
}

SectionalEval evaluate_E_branch(const PotentialField& f, double z, double t,
                                const SpectralSample& s, Region reg, int beta_sign,
                                const SweepOptions& opt) {
    check_floor(s, beta_sign, 1e-12);
    cx beta = s.u * s.Us + double(beta_sign) * s.v * s.Vs;
    cx betas = s.us * s.U + double(beta_sign) * s.vs * s.V;
    SectionalEval out;
    out.region = reg;
    auto colH = [&](EigenKind w, int c) { return eigen_column(w, f, z, t, s.k, c, opt); };
    Vec2c c1, c2;
    switch (reg) {
        case Region::D1:
            c1 = colH(EigenKind::H2, 1);
            c2 = colH(EigenKind::H3, 2);
            c1 = {c1.a / beta, c1.b / beta};
            break;
        case Region::D2:
            c1 = colH(EigenKind::H1, 1);
            c2 = colH(EigenKind::H3, 2);
            c1 = {c1.a / s.u, c1.b / s.u};
            break;
        case Region::D3:
            c1 = colH(EigenKind::H3, 1);
            c2 = colH(EigenKind::H2, 2);
            c2 = {c2.a / betas, c2.b / betas};
            break;
        case Region::D4:
            c1 = colH(EigenKind::H3, 1);
            c2 = colH(EigenKind::H1, 2);
            c2 = {c2.a / s.us, c2.b / s.us};
            break;
        default:
            throw region_violation("evaluate_E requires k in an open region");
    }
    out.E = {c1.a, c2.a, c1.b, c2.b};
    return out;
}

Mat2 jump_matrix(Ray ray, double z, double t, const SpectralSample& s, int beta_sign,
                 double floor) {
    check_floor(s, beta_sign, floor);
    cx e2ie = std::exp(2.0 * I * phase_eta(s.k, z, t));
    cx beta = s.u * s.Us + double(beta_sign) * s.v * s.Vs;
    cx betas = s.us * s.U + double(beta_sign) * s.vs * s.V;
    switch (ray) {
        case Ray::arg0: {
            cx A = (s.u * s.V - s.v * s.U) / (betas * e2ie);
            cx B = e2ie * (s.us * s.Vs - s.vs * s.Us) / beta;
            return {1.0, A, B, 1.0 + A * B};
        }
        case Ray::arg90:
            return {1.0, s.V / (s.us * betas * e2ie), 0.0, 1.0};
        case Ray::arg180: {
            cx d = s.v / s.us, ds = s.vs / s.u;
            return {1.0 + d * ds, d / e2ie, ds * e2ie, 1.0};
        }
        case Ray::arg270:
        default:
            return {1.0, 0.0, e2ie * s.Vs / (s.u * beta), 1.0};
    }
}

Mat2 jump_matrix_factored(Ray ray, double z, double t, const SpectralSample& s, int beta_sign,
                          double floor) {
    check_floor(s, beta_sign, floor);
    cx e2ie = std::exp(2.0 * I * phase_eta(s.k, z, t));
    Mat2 Kp, Km;
    switch (ray) {
        case Ray::arg90:  // D4 (+) against D3 (-)
            Kp = K_D4(s, e2ie);
            Km = K_D3(s, e2ie, beta_sign);
            break;
        case Ray::arg0:  // D1 (+) against D3 (-)
            Kp = K_D1(s, e2ie, beta_sign);
            Km = K_D3(s, e2ie, beta_sign);
            break;
        case Ray::arg180:  // D4 (+) against D2 (-)
            Kp = K_D4(s, e2ie);
            Km = K_D2(s, e2ie);
            break;
        case Ray::arg270:  // D1 (+) against D2 (-)
            Kp = K_D1(s, e2ie, beta_sign);
            Km = K_D2(s, e2ie);
            break;
    }
    return Kp.inverse() * Km;
}

cx global_relation_residual(const PotentialField& f, cx k, const SweepOptions& opt) {
    const double T = f.grid.T;
    cx m = spectral_m(k);

    cx u, v, U, V;
    compute_uv(f, k, u, v, opt);
    compute_UV(f, k, U, V, opt);

    // c+ = int_0^Z e^{-2i m z} (A1 H3)_12 at t = T; the (1,2) product needs
    // only column 2 of H3, collected in one downward sweep.
    auto col2 = sweep_H3_col2(f, T, k, opt);
    const int nz = f.nzp();
    const double dz = f.grid.dz();
    const int jT = f.nsl() - 1;
    std::vector<cx> integrand(nz);
    for (int i = 0; i < nz; ++i) {
        Mat2 A = build_A1(f.r_at(jT, i), k, f.theta_at(jT, i));
        cx prod = A.a11 * col2[i].a + A.a12 * col2[i].b;
        integrand[i] = std::exp(-2.0 * I * m * (i * dz)) * prod;
    }
    cx cplus = cumulative_integral<cx>(integrand, dz).back();
    return u * V - U * v - std::exp(4.0 * I * m * m * T) * cplus;
}

std::vector<cx> ray_points(Ray ray, const RayGrid& g) {
    cx dir;
    switch (ray) {
        case Ray::arg0: dir = {1.0, 0.0}; break;
        case Ray::arg90: dir = {0.0, 1.0}; break;
        case Ray::arg180: dir = {-1.0, 0.0}; break;
        case Ray::arg270: dir = {0.0, -1.0}; break;
    }
    std::vector<cx> ks(g.n_per_ray);
    for (int q = 1; q <= g.n_per_ray; ++q) {
        double frac = double(q) / g.n_per_ray;
        cx m = g.m_max * frac * frac * dir;
        ks[q - 1] = std::sqrt(0.5 + m);
    }
    return ks;
}

std::vector<SpectralSample> build_spectral_data(const PotentialField& f, const RayGrid& g,
                                                int threads, bool with_gr,
                                                const SweepOptions& opt) {
    std::vector<cx> ks;
    for (Ray ray : {Ray::arg0, Ray::arg90, Ray::arg180, Ray::arg270}) {
        auto pts = ray_points(ray, g);
        ks.insert(ks.end(), pts.begin(), pts.end());
    }
    std::vector<SpectralSample> out(ks.size());
    parallel_for(ks.size(), threads, [&](std::size_t i) {
        out[i] = make_sample(f, ks[i], opt);
        if (with_gr) {
            cx m = spectral_m(ks[i]);
            bool im_k2_ok = ks[i].real() * ks[i].imag() >= -1e-14;  // Im k^2 >= 0
            if (im_k2_ok && m.imag() >= -1e-12 &&
                2.0 * std::abs(m.imag()) * f.grid.Z < opt.exp_budget) {
                out[i].gr_abs = std::abs(global_relation_residual(f, ks[i], opt));
            }
        }
    });
    return out;
}

}  // namespace cll
