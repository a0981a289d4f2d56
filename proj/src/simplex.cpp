#include "mlmolp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlmolp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;

}  // namespace

std::string to_string(SimplexStatus s) {
    switch (s) {
        case SimplexStatus::Optimal: return "optimal";
        case SimplexStatus::Unbounded: return "unbounded";
        case SimplexStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// simplex_solve: equality form [A | I] z = b, z >= 0, revised iterations with
// full refactorization. Bland's rule on both the entering and leaving choice.
// ---------------------------------------------------------------------------

namespace {

struct StdSimplexState {
    DenseMatrix M;          // m x (n + m + #artificials)
    Vector cost;            // current phase costs
    Vector z;               // all variable values
    IndexSet basis;         // m variable indices
    std::size_t total_cols;
    std::size_t artificial_start;
    std::size_t iterations{0};
};

Vector current_duals(const StdSimplexState& st) {
    Vector cb(st.basis.size());
    for (std::size_t k = 0; k < st.basis.size(); ++k) {
        cb[k] = st.cost[st.basis[k]];
    }
    LuFactorization lu(basis_columns(st.M, st.basis));
    return lu.solve_transposed(cb);
}

// Runs Bland-rule iterations until optimal or unbounded. allow_artificials
// controls whether artificial columns may enter.
SimplexStatus run_standard(StdSimplexState& st, bool allow_artificials, std::size_t iter_cap) {
    while (true) {
        if (st.iterations > iter_cap) {
            throw Error("simplex_solve: iteration cap exceeded");
        }
        Vector y = current_duals(st);
        std::vector<bool> in_basis(st.total_cols, false);
        for (std::size_t j : st.basis) {
            in_basis[j] = true;
        }
        std::size_t entering = st.total_cols;
        for (std::size_t j = 0; j < st.total_cols; ++j) {
            if (in_basis[j] || (!allow_artificials && j >= st.artificial_start)) {
                continue;
            }
            const double reduced = dot(y, st.M.column(j)) - st.cost[j];
            if (reduced < -kReducedCostTol) {
                entering = j;
                break;
            }
        }
        if (entering == st.total_cols) {
            return SimplexStatus::Optimal;
        }

        LuFactorization lu(basis_columns(st.M, st.basis));
        Vector w = lu.solve(st.M.column(entering));
        double best_ratio = kInf;
        std::size_t leaving_pos = st.basis.size();
        for (std::size_t k = 0; k < st.basis.size(); ++k) {
            if (w[k] > kPivotTol) {
                const double ratio = std::max(st.z[st.basis[k]], 0.0) / w[k];
                if (ratio < best_ratio - 0.0 ||
                    (ratio == best_ratio && leaving_pos != st.basis.size() && st.basis[k] < st.basis[leaving_pos])) {
                    best_ratio = ratio;
                    leaving_pos = k;
                }
            }
        }
        if (leaving_pos == st.basis.size()) {
            return SimplexStatus::Unbounded;
        }

        for (std::size_t k = 0; k < st.basis.size(); ++k) {
            st.z[st.basis[k]] -= best_ratio * w[k];
        }
        st.z[st.basis[leaving_pos]] = 0.0;
        st.z[entering] = best_ratio;
        st.basis[leaving_pos] = entering;
        ++st.iterations;
    }
}

}  // namespace

SimplexOutcome simplex_solve(const InequalityLP& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    std::size_t num_artificials = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.b[i] < 0.0) {
            ++num_artificials;
        }
    }

    StdSimplexState st;
    st.total_cols = n + m + num_artificials;
    st.artificial_start = n + m;
    st.M = DenseMatrix(m, st.total_cols);
    st.z = Vector(st.total_cols, 0.0);
    st.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            st.M(i, j) = lp.A(i, j);
        }
        st.M(i, n + i) = 1.0;
    }
    std::size_t next_artificial = st.artificial_start;
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.b[i] >= 0.0) {
            st.basis[i] = n + i;
            st.z[n + i] = lp.b[i];
        } else {
            st.M(i, next_artificial) = -1.0;
            st.basis[i] = next_artificial;
            st.z[next_artificial] = -lp.b[i];
            ++next_artificial;
        }
    }

    const std::size_t iter_cap = 1000 + 200 * (n + m);

    if (num_artificials > 0) {
        st.cost = Vector(st.total_cols, 0.0);
        for (std::size_t j = st.artificial_start; j < st.total_cols; ++j) {
            st.cost[j] = -1.0;
        }
        SimplexStatus ph1 = run_standard(st, true, iter_cap);
        if (ph1 != SimplexStatus::Optimal) {
            throw Error("simplex_solve: phase one terminated abnormally");
        }
        double artificial_sum = 0.0;
        for (std::size_t j = st.artificial_start; j < st.total_cols; ++j) {
            artificial_sum += st.z[j];
        }
        if (artificial_sum > tol::phase_one) {
            SimplexOutcome out;
            out.status = SimplexStatus::Infeasible;
            out.iterations = st.iterations;
            return out;
        }
        // Drive any leftover artificial out of the basis; [A | I] has full row
        // rank, so a usable pivot always exists.
        for (std::size_t k = 0; k < m; ++k) {
            if (st.basis[k] < st.artificial_start) {
                continue;
            }
            LuFactorization lu(basis_columns(st.M, st.basis));
            bool swapped = false;
            for (std::size_t j = 0; j < st.artificial_start && !swapped; ++j) {
                if (std::find(st.basis.begin(), st.basis.end(), j) != st.basis.end()) {
                    continue;
                }
                Vector w = lu.solve(st.M.column(j));
                if (std::abs(w[k]) > kPivotTol) {
                    st.basis[k] = j;
                    st.z[j] = 0.0;
                    swapped = true;
                }
            }
            if (!swapped) {
                throw Error("simplex_solve: could not remove artificial from basis");
            }
        }
    }

    st.cost = Vector(st.total_cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        st.cost[j] = lp.c[j];
    }
    SimplexStatus ph2 = run_standard(st, false, iter_cap);

    SimplexOutcome out;
    out.iterations = st.iterations;
    out.status = ph2;
    if (ph2 == SimplexStatus::Optimal) {
        out.x.assign(st.z.begin(), st.z.begin() + static_cast<std::ptrdiff_t>(n));
        out.objective = dot(out.x, lp.c);
        out.duals = current_duals(st);
    }
    return out;
}

// ---------------------------------------------------------------------------
// bounded_simplex_solve: two-phase bounded-variable simplex. Nonbasic columns
// sit at one of their bounds; a step either pivots or flips the entering
// variable to its opposite bound.
// ---------------------------------------------------------------------------

namespace {

enum class AtBound : unsigned char { Lower, Upper };

struct BoundedState {
    DenseMatrix M;
    Vector cost;
    Vector lower;
    Vector upper;
    Vector x;
    IndexSet basis;
    std::vector<AtBound> rest;  // bound a nonbasic variable sits at
    std::size_t total_cols;
    std::size_t artificial_start;
    std::size_t iterations{0};
};

SimplexStatus run_bounded(BoundedState& st, bool allow_artificials, std::size_t iter_cap) {
    const std::size_t m = st.basis.size();
    while (true) {
        if (st.iterations > iter_cap) {
            throw Error("bounded_simplex_solve: iteration cap exceeded");
        }
        Vector cb(m);
        for (std::size_t k = 0; k < m; ++k) {
            cb[k] = st.cost[st.basis[k]];
        }
        LuFactorization lu(basis_columns(st.M, st.basis));
        Vector y = lu.solve_transposed(cb);

        std::vector<bool> in_basis(st.total_cols, false);
        for (std::size_t j : st.basis) {
            in_basis[j] = true;
        }
        std::size_t entering = st.total_cols;
        double direction = 0.0;
        for (std::size_t j = 0; j < st.total_cols; ++j) {
            if (in_basis[j] || (!allow_artificials && j >= st.artificial_start)) {
                continue;
            }
            if (st.upper[j] - st.lower[j] <= 0.0) {
                continue;  // pinned variable can never improve
            }
            const double reduced = dot(y, st.M.column(j)) - st.cost[j];
            if (st.rest[j] == AtBound::Lower && reduced < -kReducedCostTol) {
                entering = j;
                direction = 1.0;
                break;
            }
            if (st.rest[j] == AtBound::Upper && reduced > kReducedCostTol) {
                entering = j;
                direction = -1.0;
                break;
            }
        }
        if (entering == st.total_cols) {
            return SimplexStatus::Optimal;
        }

        Vector w = lu.solve(st.M.column(entering));
        // x_B(t) = x_B - t * direction * w
        double best_t = st.upper[entering] - st.lower[entering];
        std::size_t leaving_pos = m;  // m means bound flip
        for (std::size_t k = 0; k < m; ++k) {
            const double delta = -direction * w[k];
            const std::size_t jb = st.basis[k];
            double t;
            if (delta > kPivotTol) {
                t = (st.upper[jb] - st.x[jb]) / delta;
            } else if (delta < -kPivotTol) {
                t = (st.lower[jb] - st.x[jb]) / delta;
            } else {
                continue;
            }
            t = std::max(t, 0.0);
            if (t < best_t || (t == best_t && leaving_pos != m && st.basis[k] < st.basis[leaving_pos])) {
                best_t = t;
                leaving_pos = k;
            }
        }
        if (!std::isfinite(best_t)) {
            return SimplexStatus::Unbounded;
        }

        st.x[entering] += direction * best_t;
        for (std::size_t k = 0; k < m; ++k) {
            st.x[st.basis[k]] -= best_t * direction * w[k];
        }
        if (leaving_pos == m) {
            st.rest[entering] = st.rest[entering] == AtBound::Lower ? AtBound::Upper : AtBound::Lower;
            st.x[entering] = st.rest[entering] == AtBound::Lower ? st.lower[entering] : st.upper[entering];
        } else {
            const std::size_t jl = st.basis[leaving_pos];
            const double delta = -direction * w[leaving_pos];
            st.rest[jl] = delta > 0.0 ? AtBound::Upper : AtBound::Lower;
            st.x[jl] = st.rest[jl] == AtBound::Lower ? st.lower[jl] : st.upper[jl];
            st.basis[leaving_pos] = entering;
        }
        ++st.iterations;
    }
}

}  // namespace

SimplexOutcome bounded_simplex_solve(const BoundedCanonicalLP& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    BoundedState st;
    st.total_cols = n + m;
    st.artificial_start = n;
    st.M = DenseMatrix(m, st.total_cols);
    st.cost = Vector(st.total_cols, 0.0);
    st.lower = Vector(st.total_cols, 0.0);
    st.upper = Vector(st.total_cols, 0.0);
    st.x = Vector(st.total_cols, 0.0);
    st.rest.assign(st.total_cols, AtBound::Lower);
    st.basis.resize(m);

    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            st.M(i, j) = lp.A(i, j);
        }
        st.lower[j] = lp.lower[j];
        st.upper[j] = lp.upper[j];
        st.x[j] = lp.lower[j];
    }
    Vector residual = lp.b;
    {
        Vector al = lp.A.multiply(Vector(lp.lower));
        for (std::size_t i = 0; i < m; ++i) {
            residual[i] -= al[i];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double r = residual[i];
        st.M(i, n + i) = r < 0.0 ? -1.0 : 1.0;
        st.upper[n + i] = std::abs(r);
        st.x[n + i] = std::abs(r);
        st.cost[n + i] = -1.0;
        st.basis[i] = n + i;
    }

    const std::size_t iter_cap = 1000 + 200 * (n + m);

    SimplexStatus ph1 = run_bounded(st, true, iter_cap);
    if (ph1 != SimplexStatus::Optimal) {
        throw Error("bounded_simplex_solve: phase one terminated abnormally");
    }
    double artificial_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        artificial_sum += st.x[n + i];
    }
    if (artificial_sum > tol::phase_one) {
        SimplexOutcome out;
        out.status = SimplexStatus::Infeasible;
        out.iterations = st.iterations;
        return out;
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (st.basis[k] < n) {
            continue;
        }
        LuFactorization lu(basis_columns(st.M, st.basis));
        bool swapped = false;
        for (std::size_t j = 0; j < n && !swapped; ++j) {
            if (std::find(st.basis.begin(), st.basis.end(), j) != st.basis.end()) {
                continue;
            }
            Vector w = lu.solve(st.M.column(j));
            if (std::abs(w[k]) > kPivotTol) {
                const std::size_t ja = st.basis[k];
                st.basis[k] = j;
                st.rest[ja] = AtBound::Lower;
                st.x[ja] = 0.0;
                // Recompute the basic values so the swapped-in column carries
                // the (near-zero) load the artificial held.
                Vector rhs = lp.b;
                std::vector<bool> in_basis(st.total_cols, false);
                for (std::size_t jj : st.basis) {
                    in_basis[jj] = true;
                }
                for (std::size_t jj = 0; jj < st.total_cols; ++jj) {
                    if (!in_basis[jj] && st.x[jj] != 0.0) {
                        for (std::size_t i = 0; i < m; ++i) {
                            rhs[i] -= st.M(i, jj) * st.x[jj];
                        }
                    }
                }
                LuFactorization lu2(basis_columns(st.M, st.basis));
                Vector xb = lu2.solve(rhs);
                for (std::size_t kk = 0; kk < m; ++kk) {
                    st.x[st.basis[kk]] = xb[kk];
                }
                swapped = true;
            }
        }
        if (!swapped) {
            throw Error("bounded_simplex_solve: could not remove artificial from basis");
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        st.cost[j] = lp.c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        st.cost[n + i] = 0.0;
    }
    SimplexStatus ph2 = run_bounded(st, false, iter_cap);
    if (ph2 == SimplexStatus::Unbounded) {
        throw Error("bounded_simplex_solve: unbounded step on a finite box");
    }

    SimplexOutcome out;
    out.status = SimplexStatus::Optimal;
    out.iterations = st.iterations;
    out.x.assign(st.x.begin(), st.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.objective = dot(out.x, lp.c);
    return out;
}

}  // namespace mlmolp
