#pragma once

#include "cll/volterra.hpp"

namespace cll::detail {

/// Single column (1 or 2) of H_which(z, t, k), marched along its path.
Vec2c column_of(EigenKind which, const PotentialField& f, double z, double t, cx k, int col,
                const SweepOptions& opt);

}  // namespace cll::detail
