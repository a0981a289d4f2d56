#include "doctest.h"

#include <cmath>
#include <random>

#include "mlmolp/reduction.hpp"
#include "test_helpers.hpp"

using namespace mlmolp;

namespace {

double inverse_map_L(double d1, double d2, double d3, double y) {
    return ((d2 - d1) * y - d1 * (d2 - d3)) / (d3 - d1);
}

double inverse_map_U(double d1, double d2, double d3, double y) {
    return ((d2 - d1) * y - d2 * (d3 - d1)) / (d2 - d3);
}

}  // namespace

TEST_CASE("ideal bounds from level solutions") {
    SUBCASE("allocation figures across three levels") {
        std::vector<Vector> sols{{10000.0}, {7289.6}, {699.1}};
        BoundsState b = ideal_bounds(sols);
        CHECK(b.lower[0] == doctest::Approx(699.1));
        CHECK(b.upper[0] == doctest::Approx(10000.0));
        CHECK(b.level == 1);
    }
    SUBCASE("identical solutions collapse the interval") {
        std::vector<Vector> sols{{2.0, 3.0}, {2.0, 3.0}};
        BoundsState b = ideal_bounds(sols);
        CHECK(b.lower == Vector{2.0, 3.0});
        CHECK(b.upper == Vector{2.0, 3.0});
    }
    SUBCASE("componentwise min and max") {
        std::vector<Vector> sols{{0.0, 5.0}, {3.0, 2.0}};
        BoundsState b = ideal_bounds(sols);
        CHECK(b.lower == Vector{0.0, 2.0});
        CHECK(b.upper == Vector{3.0, 5.0});
    }
    SUBCASE("rejects mismatched dimensions and single solutions") {
        CHECK_THROWS_AS(ideal_bounds({{1.0}, {1.0, 2.0}}), DimensionError);
        CHECK_THROWS_AS(ideal_bounds({{1.0}}), DimensionError);
    }
}

TEST_CASE("contraction maps: endpoint images and hand values") {
    CHECK(map_L(0.0, 10.0, 4.0, 0.0) == doctest::Approx(0.0));
    CHECK(map_L(0.0, 10.0, 4.0, 10.0) == doctest::Approx(4.0));
    CHECK(map_L(0.0, 10.0, 4.0, 5.0) == doctest::Approx(2.0));
    CHECK(map_U(0.0, 10.0, 4.0, 0.0) == doctest::Approx(4.0));
    CHECK(map_U(0.0, 10.0, 4.0, 10.0) == doctest::Approx(10.0));
    CHECK(map_U(0.0, 10.0, 4.0, 5.0) == doctest::Approx(7.0));
    // shared image boundary: L(d2) = U(d1) = d3
    CHECK(map_L(0.0, 10.0, 4.0, 10.0) == doctest::Approx(map_U(0.0, 10.0, 4.0, 0.0)));
    CHECK_THROWS(map_L(0.0, 10.0, 11.0, 5.0));
    CHECK_THROWS(map_L(0.0, 10.0, 4.0, 12.0));
}

TEST_CASE("contraction maps: monotonicity and inverse round-trip over random tuples") {
    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 1000; ++rep) {
        const double d1 = testing::rand_in(rng, -50.0, 50.0);
        const double d2 = d1 + testing::rand_in(rng, 0.1, 100.0);
        const double d3 = d1 + testing::rand_in(rng, 0.01, 0.99) * (d2 - d1);
        const double x = testing::rand_in(rng, d1, d2);
        const double y = testing::rand_in(rng, d1, d2);

        const double lx = map_L(d1, d2, d3, x);
        const double ux = map_U(d1, d2, d3, x);
        if (x < y) {
            CHECK(lx < map_L(d1, d2, d3, y));
            CHECK(ux < map_U(d1, d2, d3, y));
        }
        CHECK(lx >= d1 - 1e-9);
        CHECK(lx <= d3 + 1e-9);
        CHECK(ux >= d3 - 1e-9);
        CHECK(ux <= d2 + 1e-9);
        const double scale = std::max(1.0, std::abs(x));
        CHECK(std::abs(inverse_map_L(d1, d2, d3, lx) - x) <= 1e-12 * scale / std::min(1.0, (d3 - d1) / (d2 - d1)));
        CHECK(std::abs(inverse_map_U(d1, d2, d3, ux) - x) <= 1e-12 * scale / std::min(1.0, (d2 - d3) / (d2 - d1)));
    }
}

TEST_CASE("alpha maps: identity at zero and endpoint images") {
    CHECK(map_L_alpha(0.0, 10.0, 0.0, 7.3) == doctest::Approx(7.3));
    CHECK(map_U_alpha(0.0, 10.0, 0.0, 7.3) == doctest::Approx(7.3));
    CHECK(map_L_alpha(0.0, 10.0, 2.0, 10.0) == doctest::Approx(8.0));
    CHECK(map_U_alpha(0.0, 10.0, 2.0, 0.0) == doctest::Approx(2.0));
    CHECK(map_L_alpha(0.0, 10.0, 2.0, 5.0) == doctest::Approx(4.0));
    CHECK(map_U_alpha(0.0, 10.0, 2.0, 5.0) == doctest::Approx(6.0));
    CHECK_THROWS(map_L_alpha(0.0, 10.0, 10.0, 5.0));  // alpha must stay below the width
    CHECK_THROWS(map_U_alpha(0.0, 10.0, -1.0, 5.0));
}

TEST_CASE("sign function") {
    CHECK(sign_of(3.2) == 1);
    CHECK(sign_of(-0.01) == -1);
    CHECK(sign_of(0.0) == 0);
}

TEST_CASE("psi selects the half keyed on the coefficient sign") {
    // negative coefficient: image is [l, x_opt], so the upper endpoint maps to x_opt
    CHECK(psi(0.0, 10.0, 4.0, -1.0, 10.0) == doctest::Approx(4.0));
    // positive coefficient: image is [x_opt, u], so the lower endpoint maps to x_opt
    CHECK(psi(0.0, 10.0, 4.0, 1.0, 0.0) == doctest::Approx(4.0));
    // reduces to the plain upper contraction for positive coefficients
    CHECK(psi(0.0, 10.0, 4.0, 1.0, 5.0) == doctest::Approx(7.0));
}

TEST_CASE("nu gates psi on both coefficients") {
    CHECK(nu(0.0, 10.0, 4.0, 1.0, 0.0, 5.0) == doctest::Approx(5.0));  // current coefficient zero
    CHECK(nu(0.0, 10.0, 4.0, 0.0, 1.0, 5.0) == doctest::Approx(5.0));  // owning coefficient zero
    CHECK(nu(0.0, 10.0, 4.0, 1.0, -2.0, 5.0) == doctest::Approx(psi(0.0, 10.0, 4.0, 1.0, 5.0)));
}

TEST_CASE("psi_hat applies the alpha contraction matching the bound") {
    CHECK(psi_hat(0.0, 10.0, 10.0, 2.0, 10.0) == doctest::Approx(8.0));  // at upper: L^alpha
    CHECK(psi_hat(0.0, 10.0, 0.0, 2.0, 0.0) == doctest::Approx(2.0));    // at lower: U^alpha
    CHECK(psi_hat(0.0, 10.0, 10.0, 2.0, 5.0) == doctest::Approx(map_L_alpha(0.0, 10.0, 2.0, 5.0)));
    CHECK_THROWS(psi_hat(0.0, 10.0, 4.0, 2.0, 5.0));  // interior geometry rejected
}

TEST_CASE("nu_hat gates psi_hat on both coefficients") {
    CHECK(nu_hat(0.0, 10.0, 10.0, 2.0, 1.0, 0.0, 5.0) == doctest::Approx(5.0));
    CHECK(nu_hat(0.0, 10.0, 4.0, 2.0, 0.0, 1.0, 5.0) == doctest::Approx(5.0));  // identity without geometry checks
    CHECK(nu_hat(0.0, 10.0, 10.0, 2.0, 1.0, 1.0, 5.0) == doctest::Approx(map_L_alpha(0.0, 10.0, 2.0, 5.0)));
}

TEST_CASE("case classification") {
    CHECK(classify_case(0.0, 10.0, 10.0) == ReductionCase::AtUpper);
    CHECK(classify_case(0.0, 10.0, 0.0) == ReductionCase::AtLower);
    CHECK(classify_case(0.0, 10.0, 4.0) == ReductionCase::Interior);
    CHECK(classify_case(3.0, 3.0, 3.0) == ReductionCase::AtLower);  // degenerate interval
    CHECK(classify_case(0.0, 1e9, 1e9 - 50.0) == ReductionCase::AtUpper);  // relative tolerance
    CHECK_THROWS(classify_case(0.0, 10.0, 11.0));
    CHECK_THROWS(classify_case(0.0, 10.0, -1.0));
}

TEST_CASE("reduce_component dispatch") {
    SUBCASE("boundary case shrinks by the alpha fraction") {
        Interval iv = reduce_component(0.0, 10.0, 10.0, 1.0, 1.0, 0.25);
        CHECK(iv.lower == doctest::Approx(0.0));
        CHECK(iv.upper == doctest::Approx(7.5));
    }
    SUBCASE("zero current coefficient leaves the interval unchanged") {
        Interval iv = reduce_component(0.0, 10.0, 10.0, 1.0, 0.0, 0.25);
        CHECK(iv.lower == 0.0);
        CHECK(iv.upper == 10.0);
    }
    SUBCASE("zero owning coefficient leaves the interval unchanged") {
        Interval iv = reduce_component(0.0, 10.0, 10.0, 0.0, 1.0, 0.25);
        CHECK(iv.lower == 0.0);
        CHECK(iv.upper == 10.0);
    }
    SUBCASE("interior keeps the half matching the owning coefficient sign") {
        Interval lo = reduce_component(0.0, 10.0, 4.0, -1.0, 1.0, 0.5);
        CHECK(lo.lower == doctest::Approx(0.0));
        CHECK(lo.upper == doctest::Approx(4.0));
        Interval hi = reduce_component(0.0, 10.0, 4.0, 1.0, 1.0, 0.5);
        CHECK(hi.lower == doctest::Approx(4.0));
        CHECK(hi.upper == doctest::Approx(10.0));
    }
    SUBCASE("full-strength reduction collapses to the opposite endpoint") {
        Interval iv = reduce_component(699.1, 10000.0, 10000.0, 1.0, 1.0, 1.0);
        CHECK(iv.lower == doctest::Approx(699.1));
        CHECK(iv.upper == doctest::Approx(699.1));
        Interval lo = reduce_component(0.0, 10.0, 0.0, 1.0, 1.0, 1.0);
        CHECK(lo.lower == doctest::Approx(10.0));
        CHECK(lo.upper == doctest::Approx(10.0));
    }
    SUBCASE("degenerate interval is untouched") {
        Interval iv = reduce_component(3.0, 3.0, 3.0, 1.0, 1.0, 1.0);
        CHECK(iv.lower == 3.0);
        CHECK(iv.upper == 3.0);
    }
}

TEST_CASE("reduction laws over random intervals") {
    std::mt19937_64 rng(89);
    for (int rep = 0; rep < 1000; ++rep) {
        const double l = testing::rand_in(rng, -20.0, 20.0);
        const double u = l + testing::rand_in(rng, 0.0, 40.0);
        const double alpha = testing::rand_in(rng, 0.0, 1.0);
        const double x_opt = testing::rand_in(rng, l, u);
        const double c_prev = testing::rand_in(rng, -2.0, 2.0);
        const double c_curr = testing::rand_in(rng, -2.0, 2.0);

        Interval iv = reduce_component(l, u, x_opt, c_prev, c_curr, alpha);
        // nesting
        CHECK(iv.lower >= l - 1e-12 * std::max(1.0, std::abs(l)));
        CHECK(iv.upper <= u + 1e-12 * std::max(1.0, std::abs(u)));
        CHECK(iv.lower <= iv.upper + 1e-12);

        const ReductionCase tag = classify_case(l, u, x_opt);
        if (tag != ReductionCase::Interior && sign_of(c_prev) != 0 && sign_of(c_curr) != 0 && u > l) {
            const double width = iv.upper - iv.lower;
            const double expect = (1.0 - alpha) * (u - l);
            CHECK(std::abs(width - expect) <= 1e-12 * std::max(1.0, std::abs(u - l)));
        }
        // alpha = 0 identity on boundary cases
        Interval id0 = reduce_component(l, u, x_opt, c_prev, c_curr, 0.0);
        if (tag != ReductionCase::Interior) {
            CHECK(id0.lower == doctest::Approx(l));
            CHECK(id0.upper == doctest::Approx(u));
        }
        // coefficient-zero neutrality
        Interval nz = reduce_component(l, u, x_opt, 0.0, c_curr, alpha);
        CHECK(nz.lower == l);
        CHECK(nz.upper == u);
        Interval nz2 = reduce_component(l, u, x_opt, c_prev, 0.0, alpha);
        CHECK(nz2.lower == l);
        CHECK(nz2.upper == u);
    }
}

TEST_CASE("boundary-case dispatch matches the sign-algebra formula") {
    // For x_opt at a bound, sign quantities A = sign(u - x_opt), B = sign(x_opt - l)
    // combine as H1 = (1+A)(1-A) + (1+B)(1-B) and H2 = -A*B; the dispatched result
    // must equal H1 * psi_hat + H2 * nu_hat.
    std::mt19937_64 rng(97);
    for (int rep = 0; rep < 200; ++rep) {
        const double l = testing::rand_in(rng, -10.0, 10.0);
        const double u = l + testing::rand_in(rng, 0.5, 20.0);
        const double alpha_abs = testing::rand_in(rng, 0.0, 0.99) * (u - l);
        const double x = testing::rand_in(rng, l, u);
        const bool at_upper = (rep % 2) == 0;
        const double x_opt = at_upper ? u : l;

        const int a = sign_of(u - x_opt);
        const int b = sign_of(x_opt - l);
        const double h1 = (1.0 + a) * (1.0 - a) + (1.0 + b) * (1.0 - b);
        const double h2 = -static_cast<double>(a) * static_cast<double>(b);
        CHECK(h1 == doctest::Approx(1.0));
        CHECK(h2 == doctest::Approx(0.0));

        const double combined =
            h1 * psi_hat(l, u, x_opt, alpha_abs, x) + h2 * nu_hat(l, u, x_opt, alpha_abs, 1.0, 1.0, x);
        const double direct = at_upper ? map_L_alpha(l, u, alpha_abs, x) : map_U_alpha(l, u, alpha_abs, x);
        CHECK(combined == doctest::Approx(direct));
    }
}

TEST_CASE("alpha broadcast validates and fills per-component values") {
    Partition part{1, 2, 3};
    AlphaParams a = AlphaParams::broadcast(part, Vector{0.5, 1.0});
    CHECK(a.per_component == Vector{0.5, 1.0, 1.0, 0.0, 0.0, 0.0});
    CHECK(a.per_level == Vector{0.5, 1.0});
    CHECK_THROWS(AlphaParams::broadcast(part, Vector{0.5}));
    CHECK_THROWS(AlphaParams::broadcast(part, Vector{0.5, 1.5}));
    CHECK_THROWS(AlphaParams::broadcast(part, Vector{-0.1, 0.0}));
}

TEST_CASE("apply_xi touches only the controlled block") {
    Partition part{2, 3};
    BoundsState bounds{1, Vector{0.0, 0.0, 0.0, 0.0, 0.0}, Vector{10.0, 10.0, 10.0, 10.0, 10.0}};
    Vector anchor{10.0, 0.0, 5.0, 5.0, 5.0};
    Vector c_prev{1.0, 1.0, 0.0, 0.0, 0.0};
    Vector c_curr(5, 1.0);
    AlphaParams alphas = AlphaParams::broadcast(part, Vector{0.5});

    BoundsState out = apply_xi(2, bounds, anchor, c_prev, c_curr, alphas, part);
    CHECK(out.level == 2);
    // controlled block (first two components) reduced
    CHECK(out.lower[0] == doctest::Approx(0.0));
    CHECK(out.upper[0] == doctest::Approx(5.0));  // anchored at upper, alpha 0.5
    CHECK(out.lower[1] == doctest::Approx(5.0));  // anchored at lower, alpha 0.5
    CHECK(out.upper[1] == doctest::Approx(10.0));
    // the rest is bitwise unchanged
    for (std::size_t j = 2; j < 5; ++j) {
        CHECK(out.lower[j] == bounds.lower[j]);
        CHECK(out.upper[j] == bounds.upper[j]);
    }
}

TEST_CASE("apply_xi with zero coefficients everywhere is the identity") {
    Partition part{2, 1};
    BoundsState bounds{1, Vector{0.0, 0.0, 0.0}, Vector{1.0, 2.0, 3.0}};
    Vector anchor{1.0, 0.0, 3.0};
    Vector zeros(3, 0.0);
    Vector ones(3, 1.0);
    AlphaParams alphas = AlphaParams::broadcast(part, Vector{1.0});
    BoundsState out = apply_xi(2, bounds, anchor, zeros, ones, alphas, part);
    CHECK(out.lower == bounds.lower);
    CHECK(out.upper == bounds.upper);
}

TEST_CASE("apply_xi nesting holds for chained reductions") {
    std::mt19937_64 rng(101);
    Partition part{2, 2, 2};
    for (int rep = 0; rep < 200; ++rep) {
        BoundsState state{1, Vector(6), Vector(6)};
        for (std::size_t j = 0; j < 6; ++j) {
            state.lower[j] = testing::rand_in(rng, -5.0, 5.0);
            state.upper[j] = state.lower[j] + testing::rand_in(rng, 0.0, 10.0);
        }
        BoundsState prev = state;
        for (std::size_t p = 2; p <= 3; ++p) {
            Vector anchor(6), c_prev(6), c_curr(6);
            for (std::size_t j = 0; j < 6; ++j) {
                anchor[j] = testing::rand_in(rng, state.lower[j], state.upper[j]);
                c_prev[j] = testing::rand_in(rng, -1.0, 1.0);
                c_curr[j] = testing::rand_in(rng, -1.0, 1.0);
            }
            AlphaParams alphas =
                AlphaParams::broadcast(part, Vector{testing::rand_in(rng, 0.0, 1.0), testing::rand_in(rng, 0.0, 1.0)});
            state = apply_xi(p, state, anchor, c_prev, c_curr, alphas, part);
            for (std::size_t j = 0; j < 6; ++j) {
                CHECK(state.lower[j] >= prev.lower[j] - 1e-12);
                CHECK(state.upper[j] <= prev.upper[j] + 1e-12);
            }
            prev = state;
        }
    }
}
