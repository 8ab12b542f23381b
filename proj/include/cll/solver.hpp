#pragma once

#include "cll/field.hpp"

namespace cll {

/// Direct solver for  i r_t + r_zz + |r|^2 r - i |r|^2 r_z = 0  on [0,Z]x[0,T],
/// method of lines: 4th-order central differences with one-sided closures,
/// classical RK4 in time, absorbing sponge in the last 10% of z for decaying data.
///
/// For decaying data with no prescribed s0, the Dirichlet trace is manufactured
/// by a whole-line style run on [-Z, Z] restricted to z >= 0, so (r0, s0, s1)
/// are automatically compatible.
struct SolverOptions {
    double stability_c = 0.42;    // dt = stability_c * dz^2 when Nt == 0
    double sponge_sigma = 5.0;
    double blowup_factor = 20.0;
    double corner_tol = 1e-10;
    double pad_fraction = 0.5;    // extra internal domain per side (fraction of Z)
};

PotentialField solve_ibvp(const IBData& data, const GridSpec& grid, const SolverOptions& opt = {});

}  // namespace cll
