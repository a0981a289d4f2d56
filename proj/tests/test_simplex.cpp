#include "doctest.h"

#include <cmath>
#include <random>

#include "mlmolp/adaptive.hpp"
#include "mlmolp/oracle.hpp"
#include "mlmolp/simplex.hpp"
#include "test_helpers.hpp"

using namespace mlmolp;

TEST_CASE("simplex: single capped variable") {
    InequalityLP lp(Vector{1.0}, DenseMatrix(1, 1, Vector{1.0}), Vector{100.0});
    SimplexOutcome out = simplex_solve(lp);
    REQUIRE(out.status == SimplexStatus::Optimal);
    CHECK(out.objective == doctest::Approx(100.0));
    CHECK(out.x[0] == doctest::Approx(100.0));
}

TEST_CASE("simplex: zero objective is optimal at any feasible vertex") {
    InequalityLP lp(Vector{0.0, 0.0}, DenseMatrix(1, 2, Vector{1.0, 1.0}), Vector{1.0});
    SimplexOutcome out = simplex_solve(lp);
    REQUIRE(out.status == SimplexStatus::Optimal);
    CHECK(out.objective == doctest::Approx(0.0));
}

TEST_CASE("simplex: simple two-variable cap") {
    InequalityLP lp(Vector{1.0, 1.0}, DenseMatrix(1, 2, Vector{1.0, 1.0}), Vector{1.0});
    SimplexOutcome out = simplex_solve(lp);
    REQUIRE(out.status == SimplexStatus::Optimal);
    CHECK(out.objective == doctest::Approx(1.0));
    auto reference = testing::enumerate_inequality_optimum(lp, Vector{0.0, 0.0}, Vector{2.0, 2.0});
    REQUIRE(reference.has_value());
    CHECK(out.objective == doctest::Approx(*reference));
}

TEST_CASE("simplex: unbounded ray detected") {
    DenseMatrix a(1, 2, Vector{0.0, 1.0});
    InequalityLP lp(Vector{1.0, 0.0}, a, Vector{1.0});
    CHECK(simplex_solve(lp).status == SimplexStatus::Unbounded);
}

TEST_CASE("simplex: infeasible system detected") {
    DenseMatrix a(2, 1, Vector{1.0, -1.0});
    InequalityLP lp(Vector{1.0}, a, Vector{1.0, -2.0});
    CHECK(simplex_solve(lp).status == SimplexStatus::Infeasible);
}

TEST_CASE("simplex: negative right-hand sides route through phase one") {
    // x1 + x2 >= 1, x1 + x2 <= 3, maximize x1
    DenseMatrix a(2, 2, Vector{-1.0, -1.0, 1.0, 1.0});
    InequalityLP lp(Vector{1.0, 0.0}, a, Vector{-1.0, 3.0});
    SimplexOutcome out = simplex_solve(lp);
    REQUIRE(out.status == SimplexStatus::Optimal);
    CHECK(out.objective == doctest::Approx(3.0));
}

TEST_CASE("simplex: feasibility, dual signs, and complementary slackness at optimality") {
    std::mt19937_64 rng(71);
    int done = 0;
    for (int rep = 0; rep < 120 && done < 40; ++rep) {
        RandomInstance inst = random_boxed_lp(rng, 5, 4);
        SimplexOutcome out = simplex_solve(inst.lp);
        if (out.status != SimplexStatus::Optimal) {
            continue;  // without the box these can be unbounded
        }
        ++done;
        const std::size_t m = inst.lp.num_rows();
        Vector ax = inst.lp.A.multiply(out.x);
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(ax[i] <= inst.lp.b[i] + 1e-8);
            CHECK(out.duals[i] >= -1e-6);
            CHECK(std::abs(out.duals[i] * (inst.lp.b[i] - ax[i])) <= 1e-6 * std::max(1.0, std::abs(inst.lp.b[i])));
        }
        for (std::size_t j = 0; j < inst.lp.num_vars(); ++j) {
            CHECK(out.x[j] >= -1e-8);
            const double reduced = dot(out.duals, inst.lp.A.column(j)) - inst.lp.c[j];
            CHECK(reduced >= -1e-6);
            CHECK(std::abs(reduced * out.x[j]) <= 1e-5 * std::max(1.0, std::abs(out.objective)));
        }
    }
    CHECK(done == 40);
}

TEST_CASE("bounded simplex: fully pinned box evaluates the objective at the point") {
    DenseMatrix a(1, 2, Vector{1.0, 1.0});
    BoundedCanonicalLP feasible(Vector{3.0, -1.0}, a, Vector{1.5}, Vector{0.5, 1.0}, Vector{0.5, 1.0});
    SimplexOutcome out = bounded_simplex_solve(feasible);
    REQUIRE(out.status == SimplexStatus::Optimal);
    CHECK(out.objective == doctest::Approx(3.0 * 0.5 - 1.0));

    BoundedCanonicalLP infeasible(Vector{3.0, -1.0}, a, Vector{2.0}, Vector{0.5, 1.0}, Vector{0.5, 1.0});
    CHECK(bounded_simplex_solve(infeasible).status == SimplexStatus::Infeasible);
}

TEST_CASE("bounded simplex: infeasible equality reported") {
    BoundedCanonicalLP lp(Vector{1.0, 0.0}, DenseMatrix(1, 2, Vector{1.0, 1.0}), Vector{5.0}, Vector{0.0, 0.0},
                          Vector{1.0, 1.0});
    CHECK(bounded_simplex_solve(lp).status == SimplexStatus::Infeasible);
}

TEST_CASE("bounded simplex agrees with the brute-force oracle on random instances") {
    std::mt19937_64 rng(73);
    for (int rep = 0; rep < 60; ++rep) {
        RandomInstance inst = random_boxed_lp(rng, 6, 4);
        CanonicalForm form = to_canonical(inst.lp, inst.lower, inst.upper);
        OracleResult oracle = brute_force_solve(form.lp);
        REQUIRE(oracle.feasible);
        SimplexOutcome out = bounded_simplex_solve(form.lp);
        REQUIRE(out.status == SimplexStatus::Optimal);
        CHECK(std::abs(out.objective - oracle.objective) <= 1e-6 * std::max(1.0, std::abs(oracle.objective)));
        // the structural part satisfies every original row and the box
        for (std::size_t i = 0; i < inst.lp.num_rows(); ++i) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < inst.lp.num_vars(); ++j) {
                lhs += inst.lp.A(i, j) * out.x[j];
            }
            CHECK(lhs <= inst.lp.b[i] + 1e-7);
        }
        for (std::size_t j = 0; j < inst.lp.num_vars(); ++j) {
            CHECK(out.x[j] >= inst.lower[j] - 1e-9);
            CHECK(out.x[j] <= inst.upper[j] + 1e-9);
        }
    }
}

TEST_CASE("bounded simplex and adaptive method agree on identical instances") {
    std::mt19937_64 rng(79);
    for (int rep = 0; rep < 50; ++rep) {
        RandomInstance inst = random_boxed_lp(rng, 7, 4);
        CanonicalForm form = to_canonical(inst.lp, inst.lower, inst.upper);
        SimplexOutcome sx = bounded_simplex_solve(form.lp);
        SolveOutcome ad = solve_canonical(form, 0.0);
        REQUIRE(sx.status == SimplexStatus::Optimal);
        REQUIRE(ad.status == SolveStatus::Optimal);
        CHECK(std::abs(sx.objective - ad.objective) <= 1e-6 * std::max(1.0, std::abs(sx.objective)));
    }
}
