#include "cll/field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cll {

IBData preset_zero() {
    IBData d;
    d.r0 = [](double) { return cx{}; };
    d.s0 = [](double) { return cx{}; };
    d.name = "zero";
    return d;
}

IBData preset_uniform(double a) {
    IBData d;
    d.r0 = [a](double) { return cx{a, 0.0}; };
    d.s0 = [a](double t) { return a * std::exp(I * (a * a * t)); };
    d.s0_dot = [a](double t) { return I * (a * a) * (a * std::exp(I * (a * a * t))); };
    d.right_trace = d.s0;
    d.right_trace_dot = d.s0_dot;
    d.decaying = false;
    d.exact_solution_bc = true;
    d.name = "uniform";
    return d;
}

IBData preset_gaussian(double amp, double width) {
    IBData d;
    d.r0 = [amp, width](double z) { return cx{amp * std::exp(-(z * z) / (width * width)), 0.0}; };
    d.name = "gaussian";
    return d;
}

IBData preset_box(double amp, double edge, double steep) {
    IBData d;
    d.r0 = [amp, edge, steep](double z) {
        double v = 0.5 * amp * (std::tanh((z + edge) / steep) - std::tanh((z - edge) / steep));
        return cx{v, 0.0};
    };
    d.name = "box";
    return d;
}

IBData preset_sech(double amp, double width) {
    IBData d;
    d.r0 = [amp, width](double z) { return cx{amp / std::cosh(z / width), 0.0}; };
    d.name = "sech";
    return d;
}

IBData preset_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open tabulated data: " + path);
    std::vector<double> zs;
    std::vector<cx> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double z, re, im;
        char c;
        if (ls >> z >> c >> re >> c >> im) {
            zs.push_back(z);
            vals.emplace_back(re, im);
        }
    }
    if (zs.size() < 4) throw config_error("tabulated data needs at least 4 rows: " + path);
    double z0 = zs.front();
    double zmax = zs.back();
    double h = (zmax - z0) / double(zs.size() - 1);
    IBData d;
    // the table covers [z0, zmax]; the whole-line manufacturing run sees the
    // even reflection on z < 0 and zero beyond the table (decaying class)
    d.r0 = [z0, zmax, h, vals = std::move(vals)](double z) {
        double az = std::abs(z);
        if (az > zmax) return cx{};
        return interp_cubic<cx>(vals, z0, h, std::max(az, z0));
    };
    d.name = "tabulated";
    return d;
}

PotentialField::Sample PotentialField::sample(double z, double t) const {
    const double eps_z = 1e-9 * grid.Z, eps_t = 1e-9 * grid.T;
    if (z < -eps_z || z > grid.Z + eps_z || t < -eps_t || t > grid.T + eps_t)
        throw out_of_domain("sample outside [0,Z]x[0,T]");
    z = std::clamp(z, 0.0, grid.Z);
    t = std::clamp(t, 0.0, grid.T);

    const int nz = nzp();
    const double dz = grid.dz(), dt = dts();
    double st = t / dt;
    int jt = static_cast<int>(std::floor(st));
    int jlo = std::clamp(jt - 1, 0, nsl() - 4);

    cx rr[4], rzz[4];
    double th[4];
    for (int q = 0; q < 4; ++q) {
        int j = jlo + q;
        std::span<const cx> rslice{r.data() + std::size_t(j) * nz, std::size_t(nz)};
        std::span<const cx> rzslice{rz.data() + std::size_t(j) * nz, std::size_t(nz)};
        std::span<const double> thslice{theta_z.data() + std::size_t(j) * nz, std::size_t(nz)};
        rr[q] = interp_cubic<cx>(rslice, 0.0, dz, z);
        rzz[q] = interp_cubic<cx>(rzslice, 0.0, dz, z);
        th[q] = theta_boundary[j] + interp_cubic<double>(thslice, 0.0, dz, z);
    }
    double u = st - jlo;
    cx rv{}, rzv{};
    double thv = 0.0;
    for (int q = 0; q < 4; ++q) {
        double w = 1.0;
        for (int p = 0; p < 4; ++p)
            if (p != q) w *= (u - p) / double(q - p);
        rv += w * rr[q];
        rzv += w * rzz[q];
        thv += w * th[q];
    }
    return {rv, rzv, thv};
}

double PotentialField::conservation_residual() const {
    const int nz = nzp(), ns = nsl();
    const double dz = grid.dz(), dt = dts();
    const int zhi = std::min(static_cast<int>((1.0 - sponge_fraction - 0.02) * grid.Nz),
                             static_cast<int>(reported_Z() / dz));
    auto flux = [&](int jj, int ii) {
        double a2 = std::norm(r_at(jj, ii));
        return 0.5 * a2 * a2 - 2.0 * std::imag(std::conj(r_at(jj, ii)) * rz_at(jj, ii));
    };
    double worst = 0.0;
    for (int j = 2; j + 2 < ns; ++j) {
        for (int i = 2; i < std::min(zhi, nz - 2); ++i) {
            double pt = (std::norm(r_at(j - 2, i)) - 8.0 * std::norm(r_at(j - 1, i)) +
                         8.0 * std::norm(r_at(j + 1, i)) - std::norm(r_at(j + 2, i))) /
                        (12.0 * dt);
            double fx = (flux(j, i - 2) - 8.0 * flux(j, i - 1) + 8.0 * flux(j, i + 1) -
                         flux(j, i + 2)) /
                        (12.0 * dz);
            worst = std::max(worst, std::abs(pt - fx));
        }
    }
    return worst;
}

double PotentialField::theta_path_independence_gap() const {
    const int nz = nzp();
    const int itest = static_cast<int>(0.7 * reported_Z() / grid.dz());
    const int jtest = nsl() - 1;
    const double dt = dts();

    // path A: canonical, stored
    double pathA = theta_at(jtest, itest);

    // path B: (0,0) -> (z,0) along Theta1, then (z,t) along Theta2 at fixed z
    std::span<const double> th0{theta_z.data(), std::size_t(nz)};
    double leg1 = th0[itest];
    std::vector<double> th2(nsl());
    for (int j = 0; j < nsl(); ++j) th2[j] = theta_density(r_at(j, itest), rz_at(j, itest)).theta2;
    auto cum = cumulative_integral<double>(th2, dt);
    double pathB = leg1 + cum[jtest];
    return std::abs(pathA - pathB);
}

}  // namespace cll
