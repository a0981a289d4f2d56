#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "mlmolp/core.hpp"

namespace mlmolp {

enum class SolveStatus { Optimal, EpsilonOptimal, IterationLimit, Infeasible };

std::string to_string(SolveStatus s);

// Multipliers K (one per row) and reduced costs E (one per column).
// E is identically zero on the support up to roundoff.
struct ReducedCosts {
    Vector multipliers;
    Vector costs;
};

struct IterationTrace {
    std::size_t iteration{0};
    double beta{0.0};                     // gap bound at the top of the iteration
    std::optional<std::size_t> entering;  // j0
    std::optional<std::size_t> leaving;   // j1 when the support changed
    double theta{0.0};
    double objective{0.0};                // objective at the top of the iteration
    double beta_after_step{0.0};          // beta - theta * |E_j0|
};

struct SolveOutcome {
    Vector x;
    double objective{0.0};
    SolveStatus status{SolveStatus::Infeasible};
    double final_beta{0.0};
    std::vector<IterationTrace> trace;
    std::size_t iterations{0};
    IndexSet final_basis;  // support at termination
};

using TraceSink = std::function<void(const IterationTrace&)>;

ReducedCosts reduced_costs(const BoundedCanonicalLP& lp, const SupportPlan& plan);

// beta(x, J_B) = sum_{E_j>0} E_j (x_j - l_j) + sum_{E_j<0} E_j (x_j - u_j) over nonbasic j.
double suboptimality_estimate(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc);

bool optimality_check(const SupportPlan& plan, const ReducedCosts& rc, const BoundedCanonicalLP& lp);

// { j nonbasic : (E_j < 0 and x_j < u_j) or (E_j > 0 and x_j > l_j) }
IndexSet nonoptimal_indices(const SupportPlan& plan, const ReducedCosts& rc, const BoundedCanonicalLP& lp);

// Direction with d_j0 = -sign(E_j0), zero on other nonbasics, and d_B chosen so A d = 0.
Vector improvement_direction(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc,
                             std::size_t j0);

struct StepLength {
    double theta{0.0};
    std::optional<std::size_t> leaving;  // set when the basic ratio attains the minimum
};

StepLength step_length(const BoundedCanonicalLP& lp, const SupportPlan& plan, const ReducedCosts& rc,
                       const Vector& d, std::size_t j0);

// Primal adaptive method. Stops as Optimal when the gap bound reaches zero (within
// tolerance) and as EpsilonOptimal when it falls below epsilon. max_iter = 0 selects
// the default 50 * (n + m).
SolveOutcome adaptive_solve(const BoundedCanonicalLP& lp, const SupportPlan& initial, double epsilon,
                            std::size_t max_iter = 0, const TraceSink& sink = {});

// Builds a starting supporting plan. The CanonicalForm overload tries the slack
// columns first; both fall back to a phase-one solve. nullopt means infeasible.
std::optional<SupportPlan> initial_support_plan(const CanonicalForm& form);
std::optional<SupportPlan> initial_support_plan(const BoundedCanonicalLP& lp);

// Convenience: initial plan + adaptive solve, mapping a failed start to Infeasible.
SolveOutcome solve_canonical(const CanonicalForm& form, double epsilon, std::size_t max_iter = 0,
                             const TraceSink& sink = {});

}  // namespace mlmolp
