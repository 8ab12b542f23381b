#include "cll/zeros.hpp"

#include <algorithm>
#include <cmath>

namespace cll {

namespace {

constexpr double kPi = 3.14159265358979323846;

// phase increment along one boundary segment, refining until each sub-jump is
// below pi/2; throws when refinement bottoms out (zero too close to the path)
double unwrap_segment(const CxFn& f, cx a, cx b, int depth) {
    cx fa = f(a), fb = f(b);
    if (std::abs(fa) == 0.0 || std::abs(fb) == 0.0)
        throw winding_ambiguous("zero on the search-box boundary");
    double d = std::arg(fb / fa);
    if (std::abs(d) <= kPi / 2.0) return d;
    if (depth <= 0) throw winding_ambiguous("phase jump too fast on the boundary");
    cx mid = 0.5 * (a + b);
    return unwrap_segment(f, a, mid, depth - 1) + unwrap_segment(f, mid, b, depth - 1);
}

}  // namespace

int winding_number(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt, double* defect) {
    cx corners[5] = {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}, lo};
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        cx a = corners[side], b = corners[side + 1];
        for (int q = 0; q < opt.boundary_samples; ++q) {
            cx p0 = a + (b - a) * (double(q) / opt.boundary_samples);
            cx p1 = a + (b - a) * (double(q + 1) / opt.boundary_samples);
            total += unwrap_segment(f, p0, p1, 12);
        }
    }
    double w = total / (2.0 * kPi);
    int n = (int)std::llround(w);
    if (defect) *defect = std::abs(w - n);
    if (std::abs(w - n) > 0.1)
        throw winding_ambiguous("winding number not integral: " + std::to_string(w));
    return n;
}

cx central_derivative(const CxFn& f, cx k, double step) {
    return (f(k - 2.0 * step) - 8.0 * f(k - step) + 8.0 * f(k + step) - f(k + 2.0 * step)) /
           (12.0 * step);
}

namespace {

void find_rec(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt, int depth, ZeroSet& out,
              double scale) {
    double defect = 0.0;
    int n = winding_number(f, lo, hi, opt, &defect);
    out.winding_defect = std::max(out.winding_defect, defect);
    if (n == 0) return;
    double w = hi.real() - lo.real(), h = hi.imag() - lo.imag();
    if (n == 1 || depth >= opt.max_depth) {
        // Newton from the box center
        cx k = 0.5 * (lo + hi);
        double step = opt.fd_step_rel * std::max(1.0, std::abs(k));
        for (int it = 0; it < opt.newton_iters; ++it) {
            cx fv = f(k);
            if (std::abs(fv) <= opt.target * scale) {
                out.zeros.push_back({k, std::abs(fv)});
                return;
            }
            cx dv = central_derivative(f, k, step);
            if (std::abs(dv) < 1e-300) throw newton_divergence("derivative vanished");
            cx next = k - fv / dv;
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag()) ||
                std::abs(next - k) > 4.0 * (std::abs(w) + std::abs(h)))
                throw newton_divergence("newton iteration left the search box");
            k = next;
            step = opt.fd_step_rel * std::max(1.0, std::abs(k));
        }
        throw newton_divergence("newton did not reach the target residual");
    }
    // subdivide the longer side, nudging the cut to avoid zeros on the seam
    if (w >= h) {
        double cut = lo.real() + 0.5 * w * 1.0000001;
        find_rec(f, lo, {cut, hi.imag()}, opt, depth + 1, out, scale);
        find_rec(f, {cut, lo.imag()}, hi, opt, depth + 1, out, scale);
    } else {
        double cut = lo.imag() + 0.5 * h * 1.0000001;
        find_rec(f, lo, {hi.real(), cut}, opt, depth + 1, out, scale);
        find_rec(f, {lo.real(), cut}, hi, opt, depth + 1, out, scale);
    }
}

}  // namespace

ZeroSet find_zeros(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt) {
    ZeroSet out;
    // scale from boundary values, so the Newton target is relative
    double scale = 0.0;
    for (int q = 0; q <= 16; ++q) {
        double s = double(q) / 16.0;
        scale = std::max(scale, std::abs(f(lo + (hi - lo) * s)));
    }
    scale = std::max(scale, 1e-30);
    find_rec(f, lo, hi, opt, 0, out, scale);
    return out;
}

ZeroSet find_zeros_paired(const CxFn& f, cx lo, cx hi, const ZeroSearchOptions& opt) {
    ZeroSet out = find_zeros(f, lo, hi, opt);
    std::size_t n = out.zeros.size();
    for (std::size_t i = 0; i < n; ++i)
        out.zeros.push_back({-out.zeros[i].location, out.zeros[i].newton_resid});
    return out;
}

std::vector<ResidueEntry> residue_coefficients(const std::vector<cx>& u_zeros,
                                               const std::vector<cx>& beta_zeros,
                                               const std::vector<cx>& U_zeros,
                                               const ResidueFunctions& fns, double fd_step_rel,
                                               double floor) {
    std::vector<ResidueEntry> out;
    auto deriv = [&](const CxFn& f, cx k) {
        return central_derivative(f, k, fd_step_rel * std::max(1.0, std::abs(k)));
    };
    for (cx xi : u_zeros) {
        cx du = deriv(fns.u, xi);
        cx vv = fns.v(xi);
        if (std::abs(du) < floor) throw non_simple_zero("u' below floor at a u-zero");
        if (std::abs(vv) < floor) throw division_floor("v below floor at a u-zero");
        cx c = 1.0 / (vv * du);
        out.push_back({"u", xi, 1, c, +1});
        out.push_back({"u_conj", std::conj(xi), 2, -std::conj(c), -1});
    }
    for (cx mu : beta_zeros) {
        for (cx xi : u_zeros)
            if (std::abs(mu - xi) < 1e-9)
                throw non_simple_zero("u-zero and beta-zero sets intersect");
        cx db = deriv(fns.beta, mu);
        cx uu = fns.u(mu);
        if (std::abs(db) < floor) throw non_simple_zero("beta' below floor at a beta-zero");
        if (std::abs(uu) < floor) throw division_floor("u below floor at a beta-zero");
        cx Vs = std::conj(fns.V(std::conj(mu)));
        cx c = -Vs / (uu * db);
        out.push_back({"beta", mu, 1, c, +1});
        out.push_back({"beta_conj", std::conj(mu), 2, -std::conj(c), -1});
    }
    for (cx eps : U_zeros) {
        cx dU = deriv(fns.U, eps);
        if (std::abs(dU) < floor) throw non_simple_zero("U' below floor at a U-zero");
        cx c = fns.V(eps) / dU;
        out.push_back({"U", eps, 2, c, -1});
        out.push_back({"U_conj", std::conj(eps), 1, -std::conj(c), +1});
    }
    return out;
}

}  // namespace cll
