#include "cll/volterra.hpp"

#include "cll/volterra_detail.hpp"

#include <algorithm>
#include <cmath>

namespace cll {

namespace {

// Cached boundary traces at z = 0 for the t-legs.
struct BoundaryTrace {
    std::vector<cx> s0, s1;
    std::vector<double> th;
    double dt;
    explicit BoundaryTrace(const PotentialField& f) : dt(f.dts()) {
        const int ns = f.nsl();
        s0.resize(ns);
        s1.resize(ns);
        th.resize(ns);
        for (int j = 0; j < ns; ++j) {
            s0[j] = f.r_at(j, 0);
            s1[j] = f.rz_at(j, 0);
            th[j] = f.theta_boundary[j];
        }
    }
    Mat2 B1(double tau, cx k) const {
        cx a = interp_cubic<cx>(s0, 0.0, dt, tau);
        cx b = interp_cubic<cx>(s1, 0.0, dt, tau);
        double q = interp_cubic<double>(th, 0.0, dt, tau);
        return build_B1(a, b, k, q);
    }
};

// Cached z-slice at fixed t for the z-legs.
struct ZSlice {
    std::vector<cx> r;
    std::vector<double> th;
    double dz;
    ZSlice(const PotentialField& f, double t) : dz(f.grid.dz()) {
        const int nz = f.nzp(), ns = f.nsl();
        const double dts = f.dts();
        double st = std::clamp(t / dts, 0.0, double(ns - 1));
        int jlo = std::clamp(int(std::floor(st)) - 1, 0, ns - 4);
        double u = st - jlo;
        double w[4];
        for (int q = 0; q < 4; ++q) {
            w[q] = 1.0;
            for (int p = 0; p < 4; ++p)
                if (p != q) w[q] *= (u - p) / double(q - p);
        }
        r.assign(nz, cx{});
        th.assign(nz, 0.0);
        for (int i = 0; i < nz; ++i) {
            cx acc{};
            double accth = 0.0;
            for (int q = 0; q < 4; ++q) {
                acc += w[q] * f.r_at(jlo + q, i);
                accth += w[q] * f.theta_at(jlo + q, i);
            }
            r[i] = acc;
            th[i] = accth;
        }
    }
    Mat2 A1(double zeta, cx k) const {
        cx a = interp_cubic<cx>(r, 0.0, dz, zeta);
        double q = interp_cubic<double>(th, 0.0, dz, zeta);
        return build_A1(a, k, q);
    }
};

// Substep rate for one leg: resolve the coupling strength always, the phase
// only when the lambda mode is underdamped; budget-check growing exponents.
struct LegPlan {
    double rate;
    bool ramp;
};

LegPlan plan_leg(cx lambda_arc, double span, double cmax, const SweepOptions& opt, bool fresh_state) {
    double grow = std::max(0.0, lambda_arc.real()) * span;
    if (grow > opt.exp_budget)
        throw region_violation("leg growth exponent " + std::to_string(grow) +
                               " exceeds budget; k outside the admissible closure");
    double rate = cmax / opt.coupling_h;
    bool underdamped = lambda_arc.real() > -0.5 * std::abs(lambda_arc.imag());
    if (underdamped) rate = std::max(rate, std::abs(lambda_arc.imag()) / opt.osc_h);
    rate = std::max(rate, 1.0 / opt.acc_h);
    rate = std::max(rate, 2.0 / std::max(span, 1e-12));
    return {rate * opt.refine, fresh_state && lambda_arc.real() * span < -4.0};
}

// per-column lambdas in the physical coordinate direction
cx lambda_z(int col, cx k) {
    cx m = spectral_m(k);
    return col == 2 ? 2.0 * I * m : -2.0 * I * m;
}
cx lambda_t(int col, cx k) {
    cx m = spectral_m(k);
    return col == 2 ? -4.0 * I * m * m : 4.0 * I * m * m;
}
int slot_of(int col) { return col == 2 ? 0 : 1; }

// march a column from a to b in the given coordinate (arc-parametrized)
void march_leg(Vec2c& v, int col, cx lambda_phys, double a, double b,
               const std::function<Mat2(double)>& Cphys, const SweepOptions& opt, bool fresh) {
    double span = std::abs(b - a);
    if (span < 1e-15) return;
    double dir = b > a ? 1.0 : -1.0;
    cx lam = dir * lambda_phys;
    auto Carc = [&, dir, a](double s) { return dir * Cphys(a + dir * s); };
    double cmax = 0.0;
    for (int i = 0; i <= 32; ++i) cmax = std::max(cmax, Cphys(a + (b - a) * i / 32.0).norm());
    LegPlan plan = plan_leg(lam, span, cmax, opt, fresh);
    int n = std::max(1, (int)std::ceil(span * plan.rate));
    ColumnStepper st(lam, slot_of(col));
    st.march(v, 0.0, span, n, Carc, plan.ramp);
}

Vec2c base_column(int col) { return col == 2 ? Vec2c{0.0, 1.0} : Vec2c{1.0, 0.0}; }

Vec2c column_of_impl(EigenKind which, const PotentialField& f, double z, double t, cx k, int col,
                     const SweepOptions& opt) {
    Vec2c v = base_column(col);
    const double T = f.grid.T, Z = f.grid.Z;
    if (which == EigenKind::H1 || which == EigenKind::H2) {
        BoundaryTrace bt(f);
        auto C = [&](double tau) { return bt.B1(tau, k); };
        double t0 = which == EigenKind::H1 ? 0.0 : T;
        march_leg(v, col, lambda_t(col, k), t0, t, C, opt, true);
        if (z > 0.0) {
            ZSlice zs(f, t);
            auto Cz = [&](double zeta) { return zs.A1(zeta, k); };
            march_leg(v, col, lambda_z(col, k), 0.0, z, Cz, opt, false);
        }
    } else {
        ZSlice zs(f, t);
        auto Cz = [&](double zeta) { return zs.A1(zeta, k); };
        march_leg(v, col, lambda_z(col, k), Z, z, Cz, opt, true);
    }
    return v;
}

}  // namespace

namespace detail {
Vec2c column_of(EigenKind which, const PotentialField& f, double z, double t, cx k, int col,
                const SweepOptions& opt) {
    return column_of_impl(which, f, z, t, k, col, opt);
}
}  // namespace detail

EigenEval solve_H(EigenKind which, const PotentialField& f, double z, double t, cx k,
                  const SweepOptions& opt) {
    if (z < 0 || z > f.grid.Z || t < 0 || t > f.grid.T)
        throw out_of_domain("solve_H point outside the grid");
    Vec2c c1 = column_of_impl(which, f, z, t, k, 1, opt);
    Vec2c c2 = column_of_impl(which, f, z, t, k, 2, opt);
    EigenEval ev;
    ev.H = {c1.a, c2.a, c1.b, c2.b};
    ev.which = which;
    ev.z = z;
    ev.t = t;
    ev.k = k;
    ev.step = f.grid.dz() / opt.refine;
    ev.det_err = std::abs(ev.H.det() - 1.0);
    if (which == EigenKind::H3) {
        // neglected tail beyond the far normalization point: the off-diagonal
        // coupling there is |k r|, integrated over a unit decay length
        auto edge = f.sample(f.grid.Z, t);
        ev.tail_bound = std::abs(k) * std::abs(edge.r);
    }
    return ev;
}

std::vector<Vec2c> sweep_H3_col2(const PotentialField& f, double t, cx k, const SweepOptions& opt) {
    const int nz = f.nzp();
    const double dz = f.grid.dz();
    ZSlice zs(f, t);

    std::vector<Vec2c> out(nz);
    Vec2c v = base_column(2);
    out[nz - 1] = v;
    cx lam = -lambda_z(2, k);  // downward arc
    double cmax = 0.0;
    for (int i = 0; i < nz; ++i) cmax = std::max(cmax, zs.A1(i * dz, k).norm());
    LegPlan plan = plan_leg(lam, f.grid.Z, cmax, opt, true);
    int nsub = std::max(1, (int)std::ceil(dz * plan.rate));
    ColumnStepper st(lam, slot_of(2));
    auto Carc = [&](double s) { return -1.0 * zs.A1(f.grid.Z - s, k); };
    for (int i = nz - 2; i >= 0; --i) {
        double s0 = (nz - 2 - i) * dz;
        st.march(v, s0, dz, nsub, Carc, plan.ramp && i == nz - 2);
        out[i] = v;
    }
    return out;
}

std::vector<Vec2c> sweep_H1_col2_t(const PotentialField& f, cx k, const SweepOptions& opt) {
    const int ns = f.nsl();
    const double dts = f.dts();
    BoundaryTrace bt(f);
    auto C = [&](double tau) { return bt.B1(tau, k); };
    std::vector<Vec2c> out(ns);
    Vec2c v = base_column(2);
    out[0] = v;
    cx lam = lambda_t(2, k);
    double cmax = 0.0;
    for (int j = 0; j < ns; ++j) cmax = std::max(cmax, bt.B1(j * dts, k).norm());
    LegPlan plan = plan_leg(lam, f.grid.T, cmax, opt, true);
    int nsub = std::max(1, (int)std::ceil(dts * plan.rate));
    ColumnStepper st(lam, slot_of(2));
    for (int j = 1; j < ns; ++j) {
        st.march(v, (j - 1) * dts, dts, nsub, C, plan.ramp && j == 1);
        out[j] = v;
    }
    return out;
}

std::vector<cx> ladder_geometric(double scale, int n, double Lmin, double Lmax) {
    std::vector<cx> ks;
    const cx ray = std::exp(cx{0.0, -M_PI / 4.0});
    for (int q = 0; q < n; ++q) {
        double L = scale * Lmin * std::pow(Lmax / Lmin, double(q) / (n - 1));
        ks.push_back(std::sqrt(0.5 + L * L * ray));
    }
    return ks;
}

PolyFitN fit_inverse_powers_n(std::span<const cx> x, std::span<const cx> y, int nterms) {
    const int n = (int)x.size();
    const int p = nterms;
    if (n < p + 1) throw ill_conditioned_fit("ladder shorter than the fit basis + 1");
    double xm = 0.0;
    for (auto& v : x) xm = std::max(xm, std::abs(v));
    // scaled Vandermonde columns, Householder QR
    std::vector<std::vector<cx>> A(n, std::vector<cx>(p));
    std::vector<cx> b(y.begin(), y.end());
    std::vector<double> sc(p);
    for (int q = 0; q < p; ++q) sc[q] = std::pow(xm, q + 1);
    for (int i = 0; i < n; ++i) {
        cx acc{1.0, 0.0};
        for (int q = 0; q < p; ++q) {
            acc *= x[i];
            A[i][q] = acc / sc[q];
        }
    }
    for (int col = 0; col < p; ++col) {
        double nrm = 0.0;
        for (int i = col; i < n; ++i) nrm += std::norm(A[i][col]);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-14) throw ill_conditioned_fit("ladder too clustered for the fit");
        cx alpha = A[col][col];
        cx phase = std::abs(alpha) > 0 ? alpha / std::abs(alpha) : cx{1.0, 0.0};
        cx vhead = alpha + phase * nrm;
        std::vector<cx> vv(n, cx{});
        vv[col] = vhead;
        for (int i = col + 1; i < n; ++i) vv[i] = A[i][col];
        double vnorm2 = 0.0;
        for (int i = col; i < n; ++i) vnorm2 += std::norm(vv[i]);
        if (vnorm2 < 1e-300) continue;
        auto reflect = [&](std::vector<cx>& target_col) {
            cx dot{};
            for (int i = col; i < n; ++i) dot += std::conj(vv[i]) * target_col[i];
            cx fmul = 2.0 * dot / vnorm2;
            for (int i = col; i < n; ++i) target_col[i] -= fmul * vv[i];
        };
        for (int q = col; q < p; ++q) {
            std::vector<cx> colv(n);
            for (int i = 0; i < n; ++i) colv[i] = A[i][q];
            reflect(colv);
            for (int i = 0; i < n; ++i) A[i][q] = colv[i];
        }
        reflect(b);
    }
    PolyFitN out;
    out.c.assign(p, cx{});
    for (int q = p - 1; q >= 0; --q) {
        cx acc = b[q];
        for (int r = q + 1; r < p; ++r) acc -= A[q][r] * out.c[r];
        out.c[q] = acc / A[q][q];
    }
    double rss = 0.0;
    for (int i = p; i < n; ++i) rss += std::norm(b[i]);
    out.residual = std::sqrt(rss / n);
    for (int q = 0; q < p; ++q) out.c[q] /= sc[q];
    return out;
}

std::vector<cx> default_ladder(double scale) {
    const double mods[5] = {8, 12, 18, 27, 40};
    std::vector<cx> ks;
    const cx ray = std::exp(cx{0.0, -M_PI / 4.0});
    for (double L : mods) {
        double Ls = L * scale;
        cx m = Ls * Ls * ray;
        ks.push_back(std::sqrt(0.5 + m));
    }
    return ks;
}

PolyFit fit_inverse_powers(std::span<const cx> x, std::span<const cx> y) {
    const std::size_t n = x.size();
    if (n < 4) throw ill_conditioned_fit("ladder needs at least 4 points");
    double xm = 0.0;
    for (auto& v : x) xm = std::max(xm, std::abs(v));
    double sc[3] = {xm, xm * xm, xm * xm * xm};
    cx A[3][3] = {};
    cx b[3] = {};
    for (std::size_t j = 0; j < n; ++j) {
        cx basis[3] = {x[j] / sc[0], x[j] * x[j] / sc[1], x[j] * x[j] * x[j] / sc[2]};
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) A[p][q] += std::conj(basis[p]) * basis[q];
            b[p] += std::conj(basis[p]) * y[j];
        }
    }
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 3; ++rr)
            if (std::abs(A[idx[rr]][c]) > std::abs(A[idx[piv]][c])) piv = rr;
        std::swap(idx[c], idx[piv]);
        if (std::abs(A[idx[c]][c]) < 1e-13) throw ill_conditioned_fit("ladder too clustered");
        for (int rr = c + 1; rr < 3; ++rr) {
            cx fmul = A[idx[rr]][c] / A[idx[c]][c];
            for (int cc = c; cc < 3; ++cc) A[idx[rr]][cc] -= fmul * A[idx[c]][cc];
            b[idx[rr]] -= fmul * b[idx[c]];
        }
    }
    cx sol[3];
    for (int c = 2; c >= 0; --c) {
        cx acc = b[idx[c]];
        for (int cc = c + 1; cc < 3; ++cc) acc -= A[idx[c]][cc] * sol[cc];
        sol[c] = acc / A[idx[c]][c];
    }
    PolyFit fit{sol[0] / sc[0], sol[1] / sc[1], sol[2] / sc[2], 0.0};
    double rss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cx pred = fit.c1 * x[j] + fit.c2 * x[j] * x[j] + fit.c3 * x[j] * x[j] * x[j];
        rss += std::norm(y[j] - pred);
    }
    fit.residual = std::sqrt(rss / double(n));
    return fit;
}

AsymptoticCoeffs asymptotic_coeffs(EigenKind which, const PotentialField& f, double z, double t,
                                   std::span<const cx> ladder, const SweepOptions& opt) {
    const std::size_t n = ladder.size();
    if (n < 4) throw ill_conditioned_fit("ladder of >= 4 admissible k values required");
    std::vector<cx> xs(n), y12(n), y22(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec2c c2;
        int iz = std::clamp((int)std::llround(z / f.grid.dz()), 0, f.nzp() - 1);
        bool on_node = std::abs(z - iz * f.grid.dz()) < 1e-9 * f.grid.Z;
        if (which == EigenKind::H3 && on_node) {
            auto sw = sweep_H3_col2(f, t, ladder[j], opt);
            c2 = sw[iz];
        } else {
            c2 = column_of_impl(which, f, z, t, ladder[j], 2, opt);
        }
        xs[j] = 1.0 / ladder[j];
        y12[j] = c2.a;
        y22[j] = c2.b - 1.0;
    }
    PolyFit f12 = fit_inverse_powers(xs, y12);
    PolyFit f22 = fit_inverse_powers(xs, y22);
    AsymptoticCoeffs out;
    out.h1 = Mat2{0, f12.c1, 0, f22.c1};
    out.h2 = Mat2{0, f12.c2, 0, f22.c2};
    out.h3 = Mat2{0, f12.c3, 0, f22.c3};
    out.residual = std::max(f12.residual, f22.residual);
    return out;
}

}  // namespace cll
