#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cll/errors.hpp"
#include "cll/numerics.hpp"
#include "cll/phases.hpp"

namespace cll {

/// Uniform space-time grid over [0,Z] x [0,T]. Nt is the number of solver
/// steps (0 = choose from the stability bound); Nt_store the stored slices.
struct GridSpec {
    double Z = 12.0;
    double T = 1.0;
    int Nz = 768;
    int Nt = 0;
    int Nt_store = 256;

    double dz() const { return Z / Nz; }
    void validate() const {
        if (Z <= 0 || T <= 0) throw config_error("grid: Z and T must be positive");
        if (Nz < 16 || Nt_store < 16) throw config_error("grid: Nz and Nt_store must be >= 16");
    }
};

/// Initial/boundary data. s0 must match r0 at the corner; s1 is never supplied
/// by the user, the solver extracts it from the computed field.
struct IBData {
    std::function<cx(double)> r0;           // initial datum r(z, 0)
    std::function<cx(double)> s0;           // Dirichlet trace r(0, t); empty => produced by an extended run
    std::function<cx(double)> s0_dot;       // d/dt of s0; numeric stencil when absent
    std::function<cx(double)> right_trace;  // exact r(Z, t) when the datum does not decay (uniform preset)
    std::function<cx(double)> right_trace_dot;
    bool decaying = true;           // decaying data: zero right boundary + sponge
    bool exact_solution_bc = false; // data solves the PDE exactly: evolve boundary nodes by the PDE
    std::string name = "custom";
};

IBData preset_zero();
IBData preset_uniform(double a);
IBData preset_gaussian(double amp, double width);
IBData preset_box(double amp, double edge, double steep);
IBData preset_sech(double amp, double width);
/// Tabulated initial datum from CSV rows "z,re,im", resampled by cubic interpolation.
IBData preset_tabulated_csv(const std::string& path);

/// Sampled solution r(z,t) with its z-derivative and cumulative Theta
/// integrals, immutable after construction and shareable across threads.
class PotentialField {
  public:
    GridSpec grid;        // stored envelope: [0, grid.Z] x [0, T]
    double nominal_Z = 0; // reported quarter-plane truncation (= grid.Z unless
                          // the solver kept a decay envelope beyond it)
    int schema_version = 1;
    std::string preset_name = "custom";
    std::string scheme = "mol-cfd4-rk4";
    double sponge_fraction = 0.10;

    // row-major, t outer: slice(j)[i] = r(z_i, t_j); Ns = Nt_store+1 slices.
    std::vector<cx> r, rz;
    std::vector<double> theta_boundary;  // int_0^t Theta2(0,tau) dtau at slice times
    std::vector<double> theta_z;         // per-slice cumulative int_0^z Theta1 dzeta

    int nzp() const { return grid.Nz + 1; }
    int nsl() const { return grid.Nt_store + 1; }
    double dts() const { return grid.T / grid.Nt_store; }

    cx r_at(int j, int i) const { return r[std::size_t(j) * nzp() + i]; }
    cx rz_at(int j, int i) const { return rz[std::size_t(j) * nzp() + i]; }
    double theta_at(int j, int i) const { return theta_boundary[j] + theta_z[std::size_t(j) * nzp() + i]; }

    struct Sample {
        cx r;
        cx rz;
        double theta_cum;  // canonical path (0,0)->(0,t)->(z,t)
    };

    /// Bicubic interpolation in (z,t); throws out_of_domain outside the closure.
    Sample sample(double z, double t) const;

    cx s0(double t) const { return sample(0.0, t).r; }
    cx s1(double t) const { return sample(0.0, t).rz; }

    double reported_Z() const { return nominal_Z > 0 ? nominal_Z : grid.Z; }

    /// Max-norm residual of the mass conservation law
    /// d_t |r|^2 = d_z ( |r|^4/2 - 2 Im(conj(r) r_z) )
    /// over interior nodes of the unsponged region, centered differences.
    double conservation_residual() const;

    /// |theta over path (0,0)->(z,0)->(z,t) minus canonical path| at the far corner
    /// of the unsponged region; discretization-level for consistent fields.
    double theta_path_independence_gap() const;
};

}  // namespace cll
