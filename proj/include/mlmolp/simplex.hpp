#pragma once

#include "mlmolp/core.hpp"

namespace mlmolp {

enum class SimplexStatus { Optimal, Unbounded, Infeasible };

std::string to_string(SimplexStatus s);

struct SimplexOutcome {
    Vector x;
    double objective{0.0};
    SimplexStatus status{SimplexStatus::Infeasible};
    std::size_t iterations{0};
    Vector duals;  // row multipliers at optimality (simplex_solve only)
};

// Two-phase primal simplex for max c^T x, A x <= b, x >= 0, with Bland's rule.
SimplexOutcome simplex_solve(const InequalityLP& lp);

// Bounded-variable primal simplex for the equality form with finite boxes.
// Nonbasic variables rest at a bound; the ratio test respects both bounds.
SimplexOutcome bounded_simplex_solve(const BoundedCanonicalLP& lp);

}  // namespace mlmolp
