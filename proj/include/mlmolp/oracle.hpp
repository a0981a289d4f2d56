#pragma once

#include <cstdint>
#include <random>

#include "mlmolp/core.hpp"

namespace mlmolp {

struct OracleResult {
    bool feasible{false};
    double objective{0.0};
    Vector x;
};

// Exhaustive reference optimum: enumerates every basis of m columns combined with
// every assignment of the remaining columns to their bounds, keeps the feasible
// candidates, and takes the best objective. Independent of the iterative solvers.
OracleResult brute_force_solve(const BoundedCanonicalLP& lp);

struct RandomInstance {
    InequalityLP lp;
    Vector lower;
    Vector upper;
};

// Small feasible boxed LP with integer coefficients in [-9, 9] and integer box
// endpoints in [0, 10]; feasibility is guaranteed by anchoring b to an interior point.
RandomInstance random_boxed_lp(std::mt19937_64& rng, std::size_t max_vars = 8, std::size_t max_rows = 5);

struct CrossCheckStats {
    std::size_t total{0};
    std::size_t passed{0};
    std::vector<std::string> failures;
};

// Solves `count` random instances with the adaptive method, the bounded simplex,
// and the brute-force enumeration, and verifies the three objectives agree to
// 1e-6 relative.
CrossCheckStats cross_validate(std::size_t count, std::uint64_t seed);

}  // namespace mlmolp
