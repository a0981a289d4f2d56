#include "mlmolp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlmolp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_exact(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::EpsilonOptimal: return "epsilon-optimal";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

ReducedCosts reduced_costs(const BoundedCanonicalLP& lp, const SupportPlan& plan) {
    const std::size_t m = lp.num_rows();
    Vector c_basis(m);
    for (std::size_t k = 0; k < m; ++k) {
        c_basis[k] = lp.c[plan.basis[k]];
    }
    LuFactorization lu(basis_columns(lp.A, plan.basis));
    Vector k_mult = lu.solve_transposed(c_basis);  // K^T A_B = c_B^T
    Vector costs = lp.A.transpose_multiply(k_mult);
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        costs[j] -= lp.c[j];
    }
    return ReducedCosts{std::move(k_mult), std::move(costs)};
}

double suboptimality_estimate(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc) {
    double beta = 0.0;
    for (std::size_t j : plan.nonbasis) {
        const double e = rc.costs[j];
        if (e > 0.0) {
            beta += e * (plan.x[j] - lp.lower[j]);
        } else if (e < 0.0) {
            beta += e * (plan.x[j] - lp.upper[j]);
        }
    }
    return beta;
}

bool optimality_check(const SupportPlan& plan, const ReducedCosts& rc, const BoundedCanonicalLP& lp) {
    for (std::size_t j : plan.nonbasis) {
        const double e = rc.costs[j];
        const bool at_lower = std::abs(plan.x[j] - lp.lower[j]) <= tol::bounds;
        const bool at_upper = std::abs(plan.x[j] - lp.upper[j]) <= tol::bounds;
        if (e >= -tol::optimality && at_lower) {
            continue;
        }
        if (e <= tol::optimality && at_upper) {
            continue;
        }
        if (std::abs(e) <= tol::optimality && !at_lower && !at_upper) {
            continue;
        }
        return false;
    }
    return true;
}

IndexSet nonoptimal_indices(const SupportPlan& plan, const ReducedCosts& rc, const BoundedCanonicalLP& lp) {
    IndexSet out;
    for (std::size_t j : plan.nonbasis) {
        const double e = rc.costs[j];
        if ((e < -tol::strict_cmp && plan.x[j] < lp.upper[j] - tol::strict_cmp) ||
            (e > tol::strict_cmp && plan.x[j] > lp.lower[j] + tol::strict_cmp)) {
            out.push_back(j);
        }
    }
    return out;
}

Vector improvement_direction(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc,
                             std::size_t j0) {
    const std::size_t m = lp.num_rows();
    Vector d(lp.num_vars(), 0.0);
    const double dj0 = -static_cast<double>(sign_exact(rc.costs[j0]));
    d[j0] = dj0;
    LuFactorization lu(basis_columns(lp.A, plan.basis));
    Vector rhs = lp.A.column(j0);
    for (double& v : rhs) {
        v *= -dj0;
    }
    Vector d_basis = lu.solve(rhs);
    for (std::size_t k = 0; k < m; ++k) {
        d[plan.basis[k]] = d_basis[k];
    }
    return d;
}

StepLength step_length(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc,
                       const Vector& d, std::size_t j0) {
    // A direction component this small is roundoff from the basic solve; treat
    // it as the zero branch. Picking such a column as leaving would swap a
    // numerically singular pivot into the basis.
    constexpr double kDirectionZero = 1e-11;
    double theta_basic = kInf;
    std::optional<std::size_t> leaving;
    for (std::size_t j : plan.basis) {
        const double dj = d[j];
        double ratio;
        if (dj > kDirectionZero) {
            ratio = (lp.upper[j] - plan.x[j]) / dj;
        } else if (dj < -kDirectionZero) {
            ratio = (lp.lower[j] - plan.x[j]) / dj;
        } else {
            continue;
        }
        ratio = std::max(ratio, 0.0);
        if (ratio < theta_basic || (ratio == theta_basic && leaving && j < *leaving)) {
            theta_basic = ratio;
            leaving = j;
        }
    }
    const double e0 = rc.costs[j0];
    double theta_entering = e0 > 0.0 ? plan.x[j0] - lp.lower[j0] : lp.upper[j0] - plan.x[j0];
    theta_entering = std::max(theta_entering, 0.0);

    if (theta_basic <= theta_entering) {
        return StepLength{theta_basic, leaving};
    }
    if (!std::isfinite(theta_entering)) {
        throw Error("step_length: unbounded step on a finite box");
    }
    return StepLength{theta_entering, std::nullopt};
}

namespace {

struct LoopState {
    Vector x;
    IndexSet basis;
    IndexSet nonbasis;
};

SolveOutcome finish(SolveStatus status, const BoundedCanonicalLP& lp, LoopState& st, double beta,
                    std::vector<IterationTrace> trace, std::size_t iters) {
    SolveOutcome out;
    out.x = std::move(st.x);
    out.objective = lp.objective(out.x);
    out.status = status;
    out.final_beta = std::max(beta, 0.0);
    out.trace = std::move(trace);
    out.iterations = iters;
    out.final_basis = std::move(st.basis);
    return out;
}

}  // namespace

SolveOutcome adaptive_solve(const BoundedCanonicalLP& lp, const SupportPlan& initial, double epsilon,
                            std::size_t max_iter, const TraceSink& sink) {
    if (epsilon < 0.0) {
        throw Error("adaptive_solve: epsilon must be nonnegative");
    }
    const std::size_t n = lp.num_vars();
    if (max_iter == 0) {
        max_iter = 50 * (n + lp.num_rows());
    }

    LoopState st{initial.x, initial.basis, initial.nonbasis};
    std::vector<IterationTrace> trace;
    double carried_beta = kInf;  // gap bound carried across the step update
    double prev_beta = kInf;
    std::size_t stall = 0;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        SupportPlan view{st.x, st.basis, st.nonbasis};
        ReducedCosts rc = reduced_costs(lp, view);
        const double fresh_beta = suboptimality_estimate(lp, view, rc);
        // Both the carried value and the recomputed one bound the optimality gap
        // of the current point; keep the tighter one.
        double beta = std::max(std::min(fresh_beta, carried_beta), 0.0);

        if (beta <= tol::optimality) {
            return finish(SolveStatus::Optimal, lp, st, beta, std::move(trace), iter);
        }
        if (beta <= epsilon) {
            return finish(SolveStatus::EpsilonOptimal, lp, st, beta, std::move(trace), iter);
        }

        IndexSet candidates = nonoptimal_indices(view, rc, lp);
        if (candidates.empty()) {
            // Tolerance-strict selection found nothing; retry with exact comparisons
            // before concluding the residual beta mass is noise.
            for (std::size_t j : st.nonbasis) {
                const double e = rc.costs[j];
                if ((e < 0.0 && st.x[j] < lp.upper[j]) || (e > 0.0 && st.x[j] > lp.lower[j])) {
                    candidates.push_back(j);
                }
            }
            if (candidates.empty()) {
                return finish(SolveStatus::Optimal, lp, st, 0.0, std::move(trace), iter);
            }
        }

        std::size_t j0 = candidates.front();
        if (stall < n) {
            for (std::size_t j : candidates) {
                if (std::abs(rc.costs[j]) > std::abs(rc.costs[j0])) {
                    j0 = j;
                }
            }
        }
        Vector d = improvement_direction(lp, view, rc, j0);
        StepLength step = step_length(lp, view, rc, d, j0);
        if (!std::isfinite(step.theta)) {
            throw Error("adaptive_solve: infinite step length");
        }

        const double objective_before = lp.objective(st.x);
        const double beta_after = beta - step.theta * std::abs(rc.costs[j0]);

        IterationTrace row;
        row.iteration = iter;
        row.beta = beta;
        row.entering = j0;
        row.leaving = step.leaving;
        row.theta = step.theta;
        row.objective = objective_before;
        row.beta_after_step = std::max(beta_after, 0.0);
        if (sink) {
            sink(row);
        }
        trace.push_back(std::move(row));

        for (std::size_t j = 0; j < n; ++j) {
            st.x[j] += step.theta * d[j];
        }
        // Keep the moved components inside the box against roundoff.
        st.x[j0] = std::clamp(st.x[j0], lp.lower[j0], lp.upper[j0]);
        for (std::size_t j : st.basis) {
            st.x[j] = std::clamp(st.x[j], lp.lower[j], lp.upper[j]);
        }

        if (beta_after <= tol::optimality) {
            return finish(SolveStatus::Optimal, lp, st, beta_after, std::move(trace), iter + 1);
        }
        if (beta_after <= epsilon) {
            return finish(SolveStatus::EpsilonOptimal, lp, st, beta_after, std::move(trace), iter + 1);
        }

        if (step.leaving) {
            const std::size_t j1 = *step.leaving;
            for (std::size_t k = 0; k < st.basis.size(); ++k) {
                if (st.basis[k] == j1) {
                    st.basis[k] = j0;
                    break;
                }
            }
            st.nonbasis = complement_of(st.basis, n);
            try {
                LuFactorization probe(basis_columns(lp.A, st.basis));
                (void)probe;
            } catch (const SingularMatrixError&) {
                throw SingularMatrixError("adaptive_solve: support swap at iteration " + std::to_string(iter) +
                                          " produced a singular basis");
            }
        }

        if (step.theta <= tol::strict_cmp && std::abs(beta - prev_beta) <= tol::optimality) {
            ++stall;
        } else {
            stall = 0;
        }
        prev_beta = beta;
        carried_beta = beta_after;
    }

    SupportPlan view{st.x, st.basis, st.nonbasis};
    ReducedCosts rc = reduced_costs(lp, view);
    const double beta = std::max(std::min(suboptimality_estimate(lp, view, rc), carried_beta), 0.0);
    return finish(SolveStatus::IterationLimit, lp, st, beta, std::move(trace), max_iter);
}

namespace {

// Tries the slack columns as the support with the structural part held at a fixed
// candidate point; returns nothing when some residual does not fit a slack interval.
std::optional<SupportPlan> slack_plan(const CanonicalForm& form, const Vector& structural) {
    const BoundedCanonicalLP& lp = form.lp;
    const std::size_t ns = form.structural_count;
    const std::size_t m = lp.num_rows();
    Vector x(lp.num_vars(), 0.0);
    for (std::size_t j = 0; j < ns; ++j) {
        x[j] = structural[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        double r = lp.b[i];
        for (std::size_t j = 0; j < ns; ++j) {
            r -= lp.A(i, j) * x[j];
        }
        const double ub = lp.upper[ns + i];
        if (r < -1e-9 || r > ub + 1e-9) {
            return std::nullopt;
        }
        x[ns + i] = std::clamp(r, 0.0, ub);
    }
    IndexSet basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = ns + i;
    }
    return make_support_plan(lp, std::move(x), std::move(basis));
}

}  // namespace

std::optional<SupportPlan> initial_support_plan(const CanonicalForm& form) {
    const BoundedCanonicalLP& lp = form.lp;
    const std::size_t ns = form.structural_count;

    Vector midpoint(ns), lower(ns), upper(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        lower[j] = lp.lower[j];
        upper[j] = lp.upper[j];
        midpoint[j] = std::clamp(0.5 * (lp.lower[j] + lp.upper[j]), lp.lower[j], lp.upper[j]);
    }
    for (const Vector& candidate : {midpoint, lower, upper}) {
        if (auto plan = slack_plan(form, candidate)) {
            return plan;
        }
    }
    return initial_support_plan(lp);
}

std::optional<SupportPlan> initial_support_plan(const BoundedCanonicalLP& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    Vector x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = std::clamp(0.5 * (lp.lower[j] + lp.upper[j]), lp.lower[j], lp.upper[j]);
    }
    Vector residual = lp.b;
    {
        Vector ax = lp.A.multiply(x);
        for (std::size_t i = 0; i < m; ++i) {
            residual[i] -= ax[i];
        }
    }

    // Phase one: artificial column +-e_i absorbing the residual of row i, with the
    // artificial sum minimized by this same adaptive method.
    DenseMatrix ext(m, n + m);
    Vector c_ext(n + m, 0.0);
    Vector l_ext(n + m, 0.0);
    Vector u_ext(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            ext(i, j) = lp.A(i, j);
        }
        l_ext[j] = lp.lower[j];
        u_ext[j] = lp.upper[j];
    }
    Vector x_ext = x;
    x_ext.resize(n + m, 0.0);
    IndexSet basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = residual[i];
        ext(i, n + i) = r < 0.0 ? -1.0 : 1.0;
        c_ext[n + i] = -1.0;
        u_ext[n + i] = 2.0 * std::abs(r);
        x_ext[n + i] = std::abs(r);
        basis[i] = n + i;
    }
    BoundedCanonicalLP phase_one(std::move(c_ext), std::move(ext), Vector(lp.b), std::move(l_ext), std::move(u_ext));
    SupportPlan start = make_support_plan(phase_one, std::move(x_ext), std::move(basis));
    SolveOutcome outcome = adaptive_solve(phase_one, start, 0.0);
    if (outcome.status == SolveStatus::IterationLimit) {
        throw Error("initial_support_plan: phase one did not converge");
    }
    if (-outcome.objective > tol::phase_one) {
        return std::nullopt;
    }

    // Recover the final support, swapping any leftover artificial for a structural
    // column with a usable pivot.
    IndexSet final_basis = outcome.final_basis;
    for (std::size_t k = 0; k < m; ++k) {
        if (final_basis[k] < n) {
            continue;
        }
        LuFactorization lu(basis_columns(phase_one.A, final_basis));
        bool swapped = false;
        for (std::size_t j = 0; j < n && !swapped; ++j) {
            if (std::find(final_basis.begin(), final_basis.end(), j) != final_basis.end()) {
                continue;
            }
            Vector w = lu.solve(phase_one.A.column(j));
            if (std::abs(w[k]) > 1e-9) {
                final_basis[k] = j;
                swapped = true;
            }
        }
        if (!swapped) {
            throw Error("initial_support_plan: linearly dependent rows prevent a structural support");
        }
    }

    Vector x_final(outcome.x.begin(), outcome.x.begin() + static_cast<std::ptrdiff_t>(n));
    try {
        return make_support_plan(lp, std::move(x_final), std::move(final_basis));
    } catch (const Error&) {
        // Residual artifacts slightly above tolerance: recompute the basic part.
        Vector rhs = lp.b;
        IndexSet nb = complement_of(final_basis, n);
        Vector x_retry(outcome.x.begin(), outcome.x.begin() + static_cast<std::ptrdiff_t>(n));
        for (std::size_t j : nb) {
            for (std::size_t i = 0; i < m; ++i) {
                rhs[i] -= lp.A(i, j) * x_retry[j];
            }
        }
        LuFactorization lu(basis_columns(lp.A, final_basis));
        Vector xb = lu.solve(rhs);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t j = final_basis[k];
            x_retry[j] = std::clamp(xb[k], lp.lower[j], lp.upper[j]);
        }
        try {
            return make_support_plan(lp, std::move(x_retry), std::move(final_basis));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
}

SolveOutcome solve_canonical(const CanonicalForm& form, double epsilon, std::size_t max_iter, const TraceSink& sink) {
    std::optional<SupportPlan> plan = initial_support_plan(form);
    if (!plan) {
        SolveOutcome out;
        out.status = SolveStatus::Infeasible;
        return out;
    }
    return adaptive_solve(form.lp, *plan, epsilon, max_iter, sink);
}

}  // namespace mlmolp
