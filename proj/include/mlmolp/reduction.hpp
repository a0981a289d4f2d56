#pragma once

#include "mlmolp/core.hpp"

namespace mlmolp {

using Partition = std::vector<std::size_t>;

std::size_t partition_total(const Partition& p);
std::size_t block_offset(const Partition& p, std::size_t level);  // level is 1-based

// Per-level lower/upper bound vectors. Reductions only ever shrink intervals, so
// consecutive states are nested componentwise.
struct BoundsState {
    std::size_t level{0};
    Vector lower;
    Vector upper;
};

enum class ReductionCase { Interior, AtUpper, AtLower };

// Relative reduction fractions, one per variable; only the entries of the block
// controlled by the acting decision maker are consulted.
struct AlphaParams {
    Vector per_component;
    Vector per_level;  // as supplied on the per-level surface, kept for reporting

    static AlphaParams broadcast(const Partition& partition, const Vector& per_level);
};

// Componentwise min/max of the independent level optima; the result is the
// level-1 state every later reduction starts from.
BoundsState ideal_bounds(const std::vector<Vector>& level_solutions);

// Affine contraction of [d1, d2] onto [d1, d3]; strictly increasing.
double map_L(double d1, double d2, double d3, double x);
// Affine contraction of [d1, d2] onto [d3, d2]; strictly increasing.
double map_U(double d1, double d2, double d3, double x);

// alpha-parameterized variants: [l, u] onto [l, u - alpha_abs] resp. [l + alpha_abs, u].
double map_L_alpha(double l, double u, double alpha_abs, double x);
double map_U_alpha(double l, double u, double alpha_abs, double x);

int sign_of(double v);

// Interior-case contraction keyed on the sign of the controlling objective
// coefficient: negative picks [l, x_opt], positive picks [x_opt, u].
double psi(double l, double u, double x_opt, double c_prev, double x);

// psi gated by both coefficients: identity when either is zero.
double nu(double l, double u, double x_opt, double c_prev, double c_curr, double x);

// Boundary-case contraction: L^alpha when x_opt sits at the upper bound,
// U^alpha when it sits at the lower bound. Interior geometry is rejected.
double psi_hat(double l, double u, double x_opt, double alpha_abs, double x);

// psi_hat gated by both coefficients.
double nu_hat(double l, double u, double x_opt, double alpha_abs, double c_prev, double c_curr, double x);

ReductionCase classify_case(double l, double u, double x_opt);

struct Interval {
    double lower{0.0};
    double upper{0.0};
};

// One component of the reduction map: dispatches on the case of x_opt relative to
// [l, u] and applies the alpha rule on the boundary cases. Identity whenever either
// objective coefficient vanishes. alpha_rel = 1 collapses the interval to a point.
Interval reduce_component(double l, double u, double x_opt, double c_prev, double c_curr, double alpha_rel);

// Applies the reduction map for step p: components of the block controlled by
// decision maker p-1 are reduced around prev_solution; everything else is kept.
BoundsState apply_xi(std::size_t p, const BoundsState& bounds, const Vector& prev_solution, const Vector& c_prev,
                     const Vector& c_curr, const AlphaParams& alphas, const Partition& partition);

}  // namespace mlmolp
