#include "mlmolp/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace mlmolp {

std::size_t partition_total(const Partition& p) {
    std::size_t n = 0;
    for (std::size_t b : p) {
        n += b;
    }
    return n;
}

std::size_t block_offset(const Partition& p, std::size_t level) {
    if (level == 0 || level > p.size()) {
        throw DimensionError("block_offset: level out of range");
    }
    std::size_t off = 0;
    for (std::size_t q = 0; q + 1 < level; ++q) {
        off += p[q];
    }
    return off;
}

AlphaParams AlphaParams::broadcast(const Partition& partition, const Vector& per_level) {
    if (per_level.size() + 1 != partition.size()) {
        throw DimensionError("AlphaParams::broadcast: expected one alpha per level except the last");
    }
    for (double a : per_level) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw Error("AlphaParams: alpha values must lie in [0, 1]");
        }
    }
    AlphaParams out;
    out.per_level = per_level;
    out.per_component.assign(partition_total(partition), 0.0);
    std::size_t off = 0;
    for (std::size_t level = 0; level < partition.size(); ++level) {
        const double a = level < per_level.size() ? per_level[level] : 0.0;
        for (std::size_t j = 0; j < partition[level]; ++j) {
            out.per_component[off + j] = a;
        }
        off += partition[level];
    }
    return out;
}

BoundsState ideal_bounds(const std::vector<Vector>& level_solutions) {
    if (level_solutions.size() < 2) {
        throw DimensionError("ideal_bounds: need at least two level solutions");
    }
    const std::size_t n = level_solutions.front().size();
    for (const Vector& s : level_solutions) {
        if (s.size() != n) {
            throw DimensionError("ideal_bounds: dimension mismatch across solutions");
        }
    }
    BoundsState state;
    state.level = 1;
    state.lower = level_solutions.front();
    state.upper = level_solutions.front();
    for (const Vector& s : level_solutions) {
        for (std::size_t j = 0; j < n; ++j) {
            state.lower[j] = std::min(state.lower[j], s[j]);
            state.upper[j] = std::max(state.upper[j], s[j]);
        }
    }
    return state;
}

namespace {

void require_domain(double d1, double d2, double d3, double x) {
    if (!(d1 < d3 && d3 < d2)) {
        throw Error("reduction map: requires d1 < d3 < d2");
    }
    if (x < d1 - 1e-12 * std::max(1.0, std::abs(d1)) || x > d2 + 1e-12 * std::max(1.0, std::abs(d2))) {
        throw Error("reduction map: point outside the source interval");
    }
}

}  // namespace

double map_L(double d1, double d2, double d3, double x) {
    require_domain(d1, d2, d3, x);
    return ((d3 - d1) * x + d1 * (d2 - d3)) / (d2 - d1);
}

double map_U(double d1, double d2, double d3, double x) {
    require_domain(d1, d2, d3, x);
    return ((d2 - d3) * x + d2 * (d3 - d1)) / (d2 - d1);
}

double map_L_alpha(double l, double u, double alpha_abs, double x) {
    if (!(l < u)) {
        throw Error("map_L_alpha: requires l < u");
    }
    if (!(alpha_abs >= 0.0 && alpha_abs < u - l)) {
        throw Error("map_L_alpha: alpha must satisfy 0 <= alpha < u - l");
    }
    if (x < l - 1e-12 * std::max(1.0, std::abs(l)) || x > u + 1e-12 * std::max(1.0, std::abs(u))) {
        throw Error("map_L_alpha: point outside the interval");
    }
    return ((u - (l + alpha_abs)) * x + alpha_abs * l) / (u - l);
}

double map_U_alpha(double l, double u, double alpha_abs, double x) {
    if (!(l < u)) {
        throw Error("map_U_alpha: requires l < u");
    }
    if (!(alpha_abs >= 0.0 && alpha_abs < u - l)) {
        throw Error("map_U_alpha: alpha must satisfy 0 <= alpha < u - l");
    }
    if (x < l - 1e-12 * std::max(1.0, std::abs(l)) || x > u + 1e-12 * std::max(1.0, std::abs(u))) {
        throw Error("map_U_alpha: point outside the interval");
    }
    return ((u - (l + alpha_abs)) * x + alpha_abs * u) / (u - l);
}

int sign_of(double v) {
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

double psi(double l, double u, double x_opt, double c_prev, double x) {
    const double t_minus = 1.0 - sign_of(c_prev);
    const double t_plus = 1.0 + sign_of(c_prev);
    return 0.5 * (t_minus * map_L(l, u, x_opt, x) + t_plus * map_U(l, u, x_opt, x));
}

double nu(double l, double u, double x_opt, double c_prev, double c_curr, double x) {
    const int s = sign_of(c_curr) * sign_of(c_prev);
    if (s == 0) {
        return x;
    }
    return psi(l, u, x_opt, c_prev, x);
}

double psi_hat(double l, double u, double x_opt, double alpha_abs, double x) {
    switch (classify_case(l, u, x_opt)) {
        case ReductionCase::AtUpper:
            return map_L_alpha(l, u, alpha_abs, x);
        case ReductionCase::AtLower:
            return map_U_alpha(l, u, alpha_abs, x);
        case ReductionCase::Interior:
            break;
    }
    throw Error("psi_hat: requires x_opt at a bound of [l, u]");
}

double nu_hat(double l, double u, double x_opt, double alpha_abs, double c_prev, double c_curr, double x) {
    const int s = sign_of(c_curr) * sign_of(c_prev);
    if (s == 0) {
        return x;
    }
    return psi_hat(l, u, x_opt, alpha_abs, x);
}

ReductionCase classify_case(double l, double u, double x_opt) {
    const double tol_l = tol::classify_rel * std::max(1.0, std::abs(l));
    const double tol_u = tol::classify_rel * std::max(1.0, std::abs(u));
    if (x_opt < l - tol_l || x_opt > u + tol_u) {
        throw Error("classify_case: point outside [l, u]");
    }
    if (l == u) {
        return ReductionCase::AtLower;
    }
    if (std::abs(x_opt - u) <= tol_u) {
        return ReductionCase::AtUpper;
    }
    if (std::abs(x_opt - l) <= tol_l) {
        return ReductionCase::AtLower;
    }
    return ReductionCase::Interior;
}

Interval reduce_component(double l, double u, double x_opt, double c_prev, double c_curr, double alpha_rel) {
    if (l > u) {
        throw Error("reduce_component: requires l <= u");
    }
    if (!(alpha_rel >= 0.0 && alpha_rel <= 1.0)) {
        throw Error("reduce_component: alpha must lie in [0, 1]");
    }
    if (sign_of(c_prev) == 0 || sign_of(c_curr) == 0) {
        return Interval{l, u};
    }
    const double clamped = std::clamp(x_opt, l, u);
    switch (classify_case(l, u, x_opt)) {
        case ReductionCase::Interior:
            return sign_of(c_prev) < 0 ? Interval{l, clamped} : Interval{clamped, u};
        case ReductionCase::AtUpper:
            return Interval{l, u - alpha_rel * (u - l)};
        case ReductionCase::AtLower:
            return Interval{l + alpha_rel * (u - l), u};
    }
    throw Error("reduce_component: unreachable");
}

BoundsState apply_xi(std::size_t p, const BoundsState& bounds, const Vector& prev_solution, const Vector& c_prev,
                     const Vector& c_curr, const AlphaParams& alphas, const Partition& partition) {
    if (p < 2 || p > partition.size()) {
        throw DimensionError("apply_xi: level must be in [2, P]");
    }
    const std::size_t n = partition_total(partition);
    if (bounds.lower.size() != n || bounds.upper.size() != n || prev_solution.size() != n || c_prev.size() != n ||
        c_curr.size() != n || alphas.per_component.size() != n) {
        throw DimensionError("apply_xi: dimension mismatch");
    }

    BoundsState out = bounds;
    out.level = p;
    const std::size_t off = block_offset(partition, p - 1);
    const std::size_t count = partition[p - 2];
    for (std::size_t j = off; j < off + count; ++j) {
        Interval iv = reduce_component(bounds.lower[j], bounds.upper[j], prev_solution[j], c_prev[j], c_curr[j],
                                       alphas.per_component[j]);
        // Exact arithmetic keeps the reduced interval nested; clamp the roundoff.
        out.lower[j] = std::clamp(iv.lower, bounds.lower[j], bounds.upper[j]);
        out.upper[j] = std::clamp(iv.upper, bounds.lower[j], bounds.upper[j]);
        if (out.lower[j] > out.upper[j]) {
            out.upper[j] = out.lower[j];
        }
    }
    return out;
}

}  // namespace mlmolp
