#include "cll/inverse.hpp"

#include <algorithm>
#include <cmath>

namespace cll {

namespace {

// fitted h-coefficients on one t-slice for all z-nodes
struct SliceFit {
    std::vector<cx> h1_12, h2_22, h3_12;
};

SliceFit fit_slice(const PotentialField& f, double t, std::span<const cx> ladder,
                   const SweepOptions& sw) {
    const int nz = f.nzp();
    const std::size_t nl = ladder.size();
    std::vector<std::vector<Vec2c>> sweeps(nl);
    for (std::size_t j = 0; j < nl; ++j) sweeps[j] = sweep_H3_col2(f, t, ladder[j], sw);
    std::vector<cx> xs(nl);
    for (std::size_t j = 0; j < nl; ++j) xs[j] = 1.0 / ladder[j];
    SliceFit out;
    out.h1_12.resize(nz);
    out.h2_22.resize(nz);
    out.h3_12.resize(nz);
    std::vector<cx> y12(nl), y22(nl);
    for (int i = 0; i < nz; ++i) {
        for (std::size_t j = 0; j < nl; ++j) {
            y12[j] = sweeps[j][i].a;
            y22[j] = sweeps[j][i].b - 1.0;
        }
        PolyFit f12 = fit_inverse_powers(xs, y12);
        PolyFit f22 = fit_inverse_powers(xs, y22);
        out.h1_12[i] = f12.c1;
        out.h2_22[i] = f22.c2;
        out.h3_12[i] = f12.c3;
    }
    return out;
}

void ladder_admissible(std::span<const cx> ladder) {
    if (ladder.size() < 4) throw ladder_inadmissible("ladder needs at least 4 points");
    for (cx k : ladder) {
        cx m = spectral_m(k);
        if (m.imag() > 1e-9)
            throw ladder_inadmissible("ladder point outside the closure of D1 u D2");
    }
}

}  // namespace

Reconstruction reconstruct_field(const PotentialField& f, const ReconstructOptions& opt) {
    const int nz = f.nzp();
    const double dz = f.grid.dz();
    std::vector<int> slices;
    for (int j = 0; j < f.nsl(); j += opt.t_stride) slices.push_back(j);
    if (slices.back() != f.nsl() - 1) slices.push_back(f.nsl() - 1);
    const int nt = (int)slices.size();
    const double dtp = f.dts() * opt.t_stride;

    auto run_scale = [&](double scale) {
        auto ladder = default_ladder(scale);
        ladder_admissible(ladder);
        std::vector<cx> h(std::size_t(nt) * nz);
        parallel_for(slices.size(), opt.threads, [&](std::size_t q) {
            auto sf = fit_slice(f, slices[q] * f.dts(), ladder, opt.sweep);
            std::copy(sf.h1_12.begin(), sf.h1_12.end(), h.begin() + q * nz);
        });

        // Theta from h: z-derivative per slice, then the canonical-path integral
        std::vector<double> th(std::size_t(nt) * nz);
        std::vector<double> th2_at0(nt);
        for (int q = 0; q < nt; ++q) {
            std::span<const cx> hrow{h.data() + std::size_t(q) * nz, std::size_t(nz)};
            auto hz = uniform_derivative<cx>(hrow, dz, 1);
            std::vector<double> th1(nz);
            for (int i = 0; i < nz; ++i) th1[i] = theta_from_h(hrow[i], hz[i]).theta1;
            auto cum = cumulative_integral<double>(th1, dz);
            for (int i = 0; i < nz; ++i) th[std::size_t(q) * nz + i] = cum[i];
            th2_at0[q] = theta_from_h(hrow[0], hz[0]).theta2;
        }
        // the reconstruction t-grid is uniform except possibly the last gap;
        // integrate Theta2(0, t) on the uniform part and patch the tail
        std::vector<double> th2cum;
        {
            int nuni = nt;
            bool ragged = (slices[nt - 1] - slices[nt - 2]) != opt.t_stride;
            if (ragged) nuni = nt - 1;
            std::span<const double> uni{th2_at0.data(), std::size_t(nuni)};
            auto cu = cumulative_integral<double>(uni, dtp);
            th2cum.assign(cu.begin(), cu.end());
            if (ragged) {
                double gap = (slices[nt - 1] - slices[nt - 2]) * f.dts();
                th2cum.push_back(th2cum.back() +
                                 0.5 * gap * (th2_at0[nt - 2] + th2_at0[nt - 1]));
            }
        }
        std::vector<cx> r(std::size_t(nt) * nz);
        std::vector<double> theta(std::size_t(nt) * nz);
        for (int q = 0; q < nt; ++q)
            for (int i = 0; i < nz; ++i) {
                std::size_t ix = std::size_t(q) * nz + i;
                theta[ix] = th2cum[q] + th[ix];
                r[ix] = 2.0 * I * h[ix] * std::exp(cx{0.0, 2.0 * theta[ix]});
            }
        return std::tuple{h, r, theta};
    };

    auto [h1s, r1s, th1s] = run_scale(opt.ladder_scale);
    Reconstruction out;
    out.nz = nz;
    out.nt = nt;
    out.t_samples.resize(nt);
    for (int q = 0; q < nt; ++q) out.t_samples[q] = slices[q] * f.dts();
    out.h = h1s;
    out.theta_rec = th1s;
    out.r_rec = r1s;
    if (opt.richardson) {
        auto [h2s, r2s, th2s] = run_scale(2.0 * opt.ladder_scale);
        for (std::size_t i = 0; i < out.r_rec.size(); ++i) {
            out.r_rec[i] = (16.0 * r2s[i] - r1s[i]) / 15.0;
            out.h[i] = (16.0 * h2s[i] - h1s[i]) / 15.0;
        }
    }

    out.abs_err.resize(out.r_rec.size());
    double rmax = 0.0;
    for (int q = 0; q < nt; ++q)
        for (int i = 0; i < nz; ++i) rmax = std::max(rmax, std::abs(f.r_at(slices[q], i)));
    double l2 = 0.0;
    for (int q = 0; q < nt; ++q) {
        for (int i = 0; i < nz; ++i) {
            std::size_t ix = std::size_t(q) * nz + i;
            double e = std::abs(out.r_rec[ix] - f.r_at(slices[q], i));
            out.abs_err[ix] = e;
            if (i * dz <= opt.interior_z * f.reported_Z()) {
                out.sup_err = std::max(out.sup_err, e);
                l2 += e * e;
            }
        }
    }
    out.l2_err = std::sqrt(l2 * dz * dtp);
    out.sup_rel_err = out.sup_err / std::max(rmax, 1e-300);
    return out;
}

BoundaryRecovery recover_boundary(const PotentialField& f, const BoundaryOptions& opt) {
    const int ns = f.nsl();
    const double dts = f.dts();

    auto run_scale = [&](double scale) {
        // the third-order coefficient needs a deeper fit than the field
        // reconstruction: 5 inverse powers on an 8-point ladder
        auto ladder = ladder_geometric(scale, 8);
        ladder_admissible(ladder);
        const std::size_t nl = ladder.size();
        std::vector<std::vector<Vec2c>> sweeps(nl);
        for (std::size_t j = 0; j < nl; ++j) sweeps[j] = sweep_H1_col2_t(f, ladder[j], opt.sweep);
        std::vector<cx> xs(nl), y12(nl), y22(nl);
        for (std::size_t j = 0; j < nl; ++j) xs[j] = 1.0 / ladder[j];
        BoundaryRecovery br;
        br.t.resize(ns);
        br.h1.resize(ns);
        br.h2_22.resize(ns);
        br.h3.resize(ns);
        br.theta2_rec.resize(ns);
        for (int q = 0; q < ns; ++q) {
            br.t[q] = q * dts;
            for (std::size_t j = 0; j < nl; ++j) {
                y12[j] = sweeps[j][q].a;
                y22[j] = sweeps[j][q].b - 1.0;
            }
            PolyFitN f12 = fit_inverse_powers_n(xs, y12, 5);
            PolyFitN f22 = fit_inverse_powers_n(xs, y22, 5);
            br.h1[q] = f12.c[0];
            br.h2_22[q] = f22.c[1];
            br.h3[q] = f12.c[2];
            double a2 = std::norm(br.h1[q]);
            br.theta2_rec[q] = 2.0 * a2 * a2 - 4.0 * std::real(std::conj(br.h1[q]) * br.h3[q]) +
                               4.0 * a2 * std::real(br.h2_22[q]) + 2.0 * a2;
        }
        auto thcum = cumulative_integral<double>(br.theta2_rec, dts);
        br.s0_rec.resize(ns);
        br.s1_rec.resize(ns);
        for (int q = 0; q < ns; ++q) {
            cx ph = std::exp(cx{0.0, 2.0 * thcum[q]});
            br.s0_rec[q] = 2.0 * I * br.h1[q] * ph;
            br.s1_rec[q] = -4.0 * br.h3[q] * ph - 2.0 * I * br.s0_rec[q] * br.h2_22[q] -
                           I * br.s0_rec[q];
        }
        return br;
    };

    BoundaryRecovery br = run_scale(opt.ladder_scale);
    if (opt.richardson) {
        BoundaryRecovery b2 = run_scale(2.0 * opt.ladder_scale);
        for (int q = 0; q < ns; ++q) {
            br.s0_rec[q] = (16.0 * b2.s0_rec[q] - br.s0_rec[q]) / 15.0;
            br.s1_rec[q] = (16.0 * b2.s1_rec[q] - br.s1_rec[q]) / 15.0;
        }
    }
    for (int q = 0; q < ns; ++q) {
        if (br.t[q] < opt.t_min) continue;
        br.sup_err_s0 = std::max(br.sup_err_s0, std::abs(br.s0_rec[q] - f.r_at(q, 0)));
        br.sup_err_s1 = std::max(br.sup_err_s1, std::abs(br.s1_rec[q] - f.rz_at(q, 0)));
    }
    return br;
}

Mat2 x_rhp_jump(const SpectralSample& s, double z, double floor) {
    cx m = spectral_m(s.k);
    double scale = std::max(1.0, std::abs(s.u));
    if (std::abs(s.u) < floor * scale || std::abs(s.us) < floor * scale)
        throw division_floor("u below floor in the x-RHP jump");
    cx delta = s.v / s.us;
    cx deltas = s.vs / s.u;
    cx ph = std::exp(2.0 * I * m * z);
    return {1.0 + delta * deltas, delta * ph, deltas / ph, 1.0};
}

Mat2 t_rhp_jump(const SpectralSample& s, double t, double floor) {
    cx m = spectral_m(s.k);
    double scale = std::max(1.0, std::abs(s.U));
    if (std::abs(s.U) < floor * scale || std::abs(s.Us) < floor * scale)
        throw division_floor("U below floor in the t-RHP jump");
    cx ph = std::exp(4.0 * I * m * m * t);
    cx q = s.V / s.U, qs = s.Vs / s.Us;
    return {1.0 + q * qs, -q / ph, -qs * ph, 1.0};
}

}  // namespace cll
