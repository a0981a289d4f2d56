#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "mlmolp/core.hpp"

namespace mlmolp::testing {

// Reference optimum for max c^T x over {Ax <= b, l <= x <= u}, found by
// enumerating every choice of n active constraints among the m rows and the 2n
// bound planes, solving the square system, and keeping feasible candidates.
// Exponential; intended for n <= 5.
inline std::optional<double> enumerate_inequality_optimum(const InequalityLP& lp, const Vector& lower,
                                                          const Vector& upper) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    const std::size_t total = m + 2 * n;

    std::vector<std::size_t> comb(n);
    for (std::size_t i = 0; i < n; ++i) {
        comb[i] = i;
    }
    std::optional<double> best;

    auto feasible = [&](const Vector& x) {
        for (std::size_t j = 0; j < n; ++j) {
            if (x[j] < lower[j] - 1e-7 || x[j] > upper[j] + 1e-7) {
                return false;
            }
        }
        Vector ax = lp.A.multiply(x);
        for (std::size_t i = 0; i < m; ++i) {
            if (ax[i] > lp.b[i] + 1e-7) {
                return false;
            }
        }
        return true;
    };

    while (true) {
        DenseMatrix M(n, n);
        Vector rhs(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t idx = comb[k];
            if (idx < m) {
                for (std::size_t j = 0; j < n; ++j) {
                    M(k, j) = lp.A(idx, j);
                }
                rhs[k] = lp.b[idx];
            } else if (idx < m + n) {
                M(k, idx - m) = 1.0;
                rhs[k] = lower[idx - m];
            } else {
                M(k, idx - m - n) = 1.0;
                rhs[k] = upper[idx - m - n];
            }
        }
        try {
            Vector x = basic_solve(M, rhs);
            if (feasible(x)) {
                const double obj = dot(lp.c, x);
                if (!best || obj > *best) {
                    best = obj;
                }
            }
        } catch (const SingularMatrixError&) {
        }

        std::size_t i = n;
        bool advanced = false;
        while (i-- > 0) {
            if (comb[i] + (n - i) < total) {
                ++comb[i];
                for (std::size_t k = i + 1; k < n; ++k) {
                    comb[k] = comb[k - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            break;
        }
    }
    return best;
}

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() % 100000) / 99999.0);
}

}  // namespace mlmolp::testing
