#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cll/inverse.hpp"
#include "cll/solver.hpp"

using namespace cll;

namespace {

const PotentialField& gauss_field() {
    static PotentialField f = [] {
        GridSpec g;
        g.Z = 8.0;
        g.T = 0.25;
        g.Nz = 192;
        g.Nt_store = 48;
        return solve_ibvp(preset_gaussian(0.3, 1.0), g);
    }();
    return f;
}

}  // namespace

TEST_CASE("theta_from_h: values and the algebraic cross-check") {
    auto t0 = theta_from_h(cx{}, cx{});
    CHECK(t0.theta1 == 0.0);
    CHECK(t0.theta2 == 0.0);

    // modulus identity |r|^2/4 = |h|^2 is exact algebra
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
        cx h = rng.complex_in(-1.5, 1.5, -1.5, 1.5);
        cx hz = rng.complex_in(-1.5, 1.5, -1.5, 1.5);
        double theta = rng.uniform(-3, 3);
        cx ph = std::exp(cx{0, 2.0 * theta});
        cx r = 2.0 * I * h * ph;
        CHECK(std::abs(std::norm(r) - 4.0 * std::norm(h)) < 1e-13);

        // r_z from the product rule with theta_z = |h|^2
        cx rz = ph * (2.0 * I * hz - 4.0 * std::norm(h) * h);
        auto direct = theta_density(r, rz);
        auto from_h = theta_from_h(h, hz);
        CHECK(std::abs(direct.theta1 - from_h.theta1) < 1e-12);
        CHECK(std::abs(direct.theta2 - from_h.theta2) < 1e-12);
    }
}

TEST_CASE("reconstruction of the zero field is exactly zero") {
    GridSpec g;
    g.Z = 6.0;
    g.T = 0.2;
    g.Nz = 64;
    g.Nt_store = 16;
    auto f = solve_ibvp(preset_zero(), g);
    ReconstructOptions o;
    o.t_stride = 4;
    auto rec = reconstruct_field(f, o);
    for (auto& v : rec.r_rec) CHECK(std::abs(v) == 0.0);
    CHECK(rec.sup_err == 0.0);
}

TEST_CASE("round trip against the uniform closed form") {
    GridSpec g;
    g.Z = 6.0;
    g.T = 0.2;
    g.Nz = 96;
    g.Nt_store = 24;
    auto f = solve_ibvp(preset_uniform(0.5), g);
    ReconstructOptions o;
    o.t_stride = 6;
    auto rec = reconstruct_field(f, o);
    double worst = 0.0;
    for (int q = 0; q < rec.nt; ++q) {
        cx exact = 0.5 * std::exp(I * (0.25 * rec.t_samples[q]));
        for (int i = 0; i < rec.nz; ++i) {
            if (i * g.dz() > 0.8 * g.Z) continue;
            worst = std::max(worst, std::abs(rec.r_rec[std::size_t(q) * rec.nz + i] - exact));
        }
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("round trip against the gaussian solver field") {
    const auto& f = gauss_field();
    ReconstructOptions o;
    o.t_stride = 12;
    o.threads = 2;
    auto rec = reconstruct_field(f, o);
    CHECK(rec.sup_rel_err < 1e-3);

    // modulus identity |r_rec|^2 = 4|h|^2 is pure algebra
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.r_rec.size(); ++i)
        worst = std::max(worst,
                         std::abs(std::norm(rec.r_rec[i]) - 4.0 * std::norm(rec.h[i])));
    CHECK(worst < 1e-12);
}

TEST_CASE("round-trip error contracts as the ladder scale doubles") {
    const auto& f = gauss_field();
    std::vector<double> errs;
    for (double scale : {0.35, 0.7, 1.4}) {
        ReconstructOptions o;
        o.ladder_scale = scale;
        o.richardson = false;
        o.t_stride = 24;
        errs.push_back(reconstruct_field(f, o).sup_err);
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
}

TEST_CASE("boundary recovery: zero and uniform degenerate correctly") {
    GridSpec g;
    g.Z = 6.0;
    g.T = 0.2;
    g.Nz = 64;
    g.Nt_store = 16;
    auto fz = solve_ibvp(preset_zero(), g);
    BoundaryOptions bo;
    auto brz = recover_boundary(fz, bo);
    for (auto& v : brz.s0_rec) CHECK(std::abs(v) == 0.0);
    for (auto& v : brz.s1_rec) CHECK(std::abs(v) == 0.0);

    // uniform data: s1 = 0, s0 of constant modulus
    auto fu = solve_ibvp(preset_uniform(0.5), g);
    BoundaryOptions bu;
    bu.ladder_scale = 0.75;
    auto bru = recover_boundary(fu, bu);
    CHECK(bru.sup_err_s0 < 1e-3);
    CHECK(bru.sup_err_s1 < 1e-3);  // stays below the extrapolation floor
    // |s0_rec| = 2|h1| exactly up to the unimodular phase
    for (std::size_t q = 0; q < bru.t.size(); ++q) {
        // compare against the unextrapolated identity via the h1 of the run:
        // the Richardson combination breaks exactness, so allow the floor
        CHECK(std::abs(bru.s0_rec[q]) < 0.5 + 1e-6);
    }
}

TEST_CASE("boundary recovery matches the gaussian solver traces") {
    const auto& f = gauss_field();
    BoundaryOptions bo;
    auto br = recover_boundary(f, bo);
    CHECK(br.sup_err_s0 < 1e-3);
    CHECK(br.sup_err_s1 < 1e-3);

    // |s0_rec| = 2 |h1| pointwise when computed without extrapolation
    BoundaryOptions b1;
    b1.richardson = false;
    auto br1 = recover_boundary(f, b1);
    for (std::size_t q = 0; q < br1.t.size(); ++q)
        CHECK(std::abs(std::abs(br1.s0_rec[q]) - 2.0 * std::abs(br1.h1[q])) < 1e-13);
}
