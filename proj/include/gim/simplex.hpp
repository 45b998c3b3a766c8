#pragma once

#include <vector>

#include "gim/rational.hpp"

namespace gim {

/// Exact-rational phase-1 simplex for the system
///
///   find z >= 0 with sum_j columns[j] * z[j] = rhs.
///
/// When feasible, `solution` holds one such z. When infeasible, `farkas`
/// holds a row vector y with y . columns[j] <= 0 for every j and
/// y . rhs > 0, certifying infeasibility. Bland's rule throughout, so the
/// pivoting cannot cycle.
struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rational> solution;
    std::vector<Rational> farkas;
};

FeasibilityResult solve_equality_feasibility(const std::vector<std::vector<Rational>>& columns,
                                             const std::vector<Rational>& rhs);

}  // namespace gim
