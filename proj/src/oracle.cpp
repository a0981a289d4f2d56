#include "mlmolp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mlmolp/adaptive.hpp"
#include "mlmolp/simplex.hpp"

namespace mlmolp {

namespace {

constexpr double kFeasTol = 1e-7;

// Visits every m-subset of {0..n-1} in lexicographic order.
bool next_combination(IndexSet& comb, std::size_t n) {
    const std::size_t m = comb.size();
    std::size_t i = m;
    while (i-- > 0) {
        if (comb[i] + (m - i) < n) {
            ++comb[i];
            for (std::size_t k = i + 1; k < m; ++k) {
                comb[k] = comb[k - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

OracleResult brute_force_solve(const BoundedCanonicalLP& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    OracleResult best;
    IndexSet basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = i;
    }

    do {
        std::unique_ptr<LuFactorization> lu;
        try {
            lu = std::make_unique<LuFactorization>(basis_columns(lp.A, basis));
        } catch (const SingularMatrixError&) {
            continue;
        }
        IndexSet rest = complement_of(basis, n);
        const std::size_t free_count = rest.size();

        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_count); ++mask) {
            Vector rhs = lp.b;
            for (std::size_t k = 0; k < free_count; ++k) {
                const std::size_t j = rest[k];
                const double v = (mask >> k) & 1 ? lp.upper[j] : lp.lower[j];
                for (std::size_t i = 0; i < m; ++i) {
                    rhs[i] -= lp.A(i, j) * v;
                }
            }
            Vector xb = lu->solve(rhs);
            bool ok = true;
            for (std::size_t k = 0; k < m && ok; ++k) {
                const std::size_t j = basis[k];
                if (xb[k] < lp.lower[j] - kFeasTol || xb[k] > lp.upper[j] + kFeasTol) {
                    ok = false;
                }
            }
            if (!ok) {
                continue;
            }
            Vector x(n);
            for (std::size_t k = 0; k < free_count; ++k) {
                const std::size_t j = rest[k];
                x[j] = (mask >> k) & 1 ? lp.upper[j] : lp.lower[j];
            }
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t j = basis[k];
                x[j] = std::clamp(xb[k], lp.lower[j], lp.upper[j]);
            }
            const double obj = lp.objective(x);
            if (!best.feasible || obj > best.objective) {
                best.feasible = true;
                best.objective = obj;
                best.x = std::move(x);
            }
        }
    } while (next_combination(basis, n));

    return best;
}

RandomInstance random_boxed_lp(std::mt19937_64& rng, std::size_t max_vars, std::size_t max_rows) {
    const auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    const std::size_t n = static_cast<std::size_t>(pick(2, static_cast<std::int64_t>(max_vars)));
    const std::size_t m = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(max_rows)));

    Vector lower(n), upper(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double l = static_cast<double>(pick(0, 5));
        lower[j] = l;
        upper[j] = l + static_cast<double>(pick(0, 10 - static_cast<std::int64_t>(l)));
        c[j] = static_cast<double>(pick(-9, 9));
    }

    // Anchor feasibility on a random interior point of the box.
    Vector anchor(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(rng() % 1000) / 999.0;
        anchor[j] = lower[j] + t * (upper[j] - lower[j]);
    }

    DenseMatrix A(m, n);
    Vector b(m);
    for (std::size_t i = 0; i < m; ++i) {
        double row_dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = static_cast<double>(pick(-9, 9));
            A(i, j) = a;
            row_dot += a * anchor[j];
        }
        b[i] = std::ceil(row_dot) + static_cast<double>(pick(0, 5));
    }

    return RandomInstance{InequalityLP(std::move(c), std::move(A), std::move(b)), std::move(lower), std::move(upper)};
}

CrossCheckStats cross_validate(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CrossCheckStats stats;
    stats.total = count;

    for (std::size_t k = 0; k < count; ++k) {
        RandomInstance inst = random_boxed_lp(rng);
        std::string failure;
        try {
            CanonicalForm form = to_canonical(inst.lp, inst.lower, inst.upper);
            OracleResult oracle = brute_force_solve(form.lp);
            SolveOutcome adaptive = solve_canonical(form, 0.0);
            SimplexOutcome simplex = bounded_simplex_solve(form.lp);

            if (!oracle.feasible) {
                failure = "oracle found no feasible point on a constructed-feasible instance";
            } else if (adaptive.status != SolveStatus::Optimal) {
                failure = "adaptive status " + to_string(adaptive.status);
            } else if (simplex.status != SimplexStatus::Optimal) {
                failure = "bounded simplex status " + to_string(simplex.status);
            } else {
                const double scale = std::max({1.0, std::abs(oracle.objective)});
                if (std::abs(adaptive.objective - oracle.objective) > 1e-6 * scale) {
                    failure = "adaptive objective " + std::to_string(adaptive.objective) + " vs oracle " +
                              std::to_string(oracle.objective);
                } else if (std::abs(simplex.objective - oracle.objective) > 1e-6 * scale) {
                    failure = "simplex objective " + std::to_string(simplex.objective) + " vs oracle " +
                              std::to_string(oracle.objective);
                }
            }
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure.empty()) {
            ++stats.passed;
        } else {
            stats.failures.push_back("instance " + std::to_string(k) + ": " + failure);
        }
    }
    return stats;
}

}  // namespace mlmolp
