#include "mlmolp/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mlmolp {

bool all_finite(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot: size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double max_abs(const Vector& v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: entry count does not match rows*cols");
    }
    if (!all_finite(data_)) {
        throw DimensionError("DenseMatrix: non-finite entry");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Vector DenseMatrix::column(std::size_t j) const {
    Vector col(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        col[i] = data_[i * cols_ + j];
    }
    return col;
}

Vector DenseMatrix::multiply(const Vector& x) const {
    if (x.size() != cols_) {
        throw DimensionError("DenseMatrix::multiply: size mismatch");
    }
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* row = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            s += row[j] * x[j];
        }
        y[i] = s;
    }
    return y;
}

Vector DenseMatrix::transpose_multiply(const Vector& y) const {
    if (y.size() != rows_) {
        throw DimensionError("DenseMatrix::transpose_multiply: size mismatch");
    }
    Vector x(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            x[j] += row[j] * y[i];
        }
    }
    return x;
}

InequalityLP::InequalityLP(Vector c_, DenseMatrix A_, Vector b_)
    : c(std::move(c_)), A(std::move(A_)), b(std::move(b_)) {
    if (A.cols() != c.size() || A.rows() != b.size()) {
        throw DimensionError("InequalityLP: inconsistent dimensions");
    }
    if (!all_finite(c) || !all_finite(b)) {
        throw DimensionError("InequalityLP: non-finite data");
    }
}

BoundedCanonicalLP::BoundedCanonicalLP(Vector c_, DenseMatrix A_, Vector b_, Vector lower_, Vector upper_)
    : c(std::move(c_)), A(std::move(A_)), b(std::move(b_)), lower(std::move(lower_)), upper(std::move(upper_)) {
    const std::size_t n = c.size();
    if (A.cols() != n || A.rows() != b.size() || lower.size() != n || upper.size() != n) {
        throw DimensionError("BoundedCanonicalLP: inconsistent dimensions");
    }
    if (A.rows() >= n) {
        throw DimensionError("BoundedCanonicalLP: requires m < n");
    }
    if (!all_finite(c) || !all_finite(b) || !all_finite(lower) || !all_finite(upper)) {
        throw DimensionError("BoundedCanonicalLP: bounds and data must be finite");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (lower[j] > upper[j]) {
            throw DimensionError("BoundedCanonicalLP: lower bound above upper at index " + std::to_string(j));
        }
    }
}

IndexSet complement_of(const IndexSet& basis, std::size_t n) {
    std::vector<bool> in_basis(n, false);
    for (std::size_t j : basis) {
        if (j >= n) {
            throw DimensionError("basis index out of range");
        }
        in_basis[j] = true;
    }
    IndexSet rest;
    rest.reserve(n - basis.size());
    for (std::size_t j = 0; j < n; ++j) {
        if (!in_basis[j]) {
            rest.push_back(j);
        }
    }
    return rest;
}

DenseMatrix basis_columns(const DenseMatrix& A, const IndexSet& basis) {
    DenseMatrix sub(A.rows(), basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (std::size_t i = 0; i < A.rows(); ++i) {
            sub(i, k) = A(i, basis[k]);
        }
    }
    return sub;
}

SupportPlan make_support_plan(const BoundedCanonicalLP& lp, Vector x, IndexSet basis) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    if (x.size() != n) {
        throw DimensionError("make_support_plan: point dimension mismatch");
    }
    if (basis.size() != m) {
        throw DimensionError("make_support_plan: basis must have exactly m indices");
    }
    IndexSet nonbasis = complement_of(basis, n);
    if (nonbasis.size() != n - m) {
        throw DimensionError("make_support_plan: repeated basis index");
    }
    LuFactorization check(basis_columns(lp.A, basis));  // throws if singular
    (void)check;

    Vector residual = lp.A.multiply(x);
    for (std::size_t i = 0; i < m; ++i) {
        residual[i] -= lp.b[i];
    }
    if (max_abs(residual) > tol::feasibility) {
        throw Error("make_support_plan: |Ax - b| exceeds feasibility tolerance");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (x[j] < lp.lower[j] - tol::bounds || x[j] > lp.upper[j] + tol::bounds) {
            throw Error("make_support_plan: bound violated at index " + std::to_string(j));
        }
    }
    return SupportPlan{std::move(x), std::move(basis), std::move(nonbasis)};
}

LuFactorization::LuFactorization(const DenseMatrix& a) : n_(a.rows()), lu_(a.data()), perm_(a.rows()) {
    if (a.rows() != a.cols()) {
        throw DimensionError("LuFactorization: matrix must be square");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        perm_[i] = i;
    }
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu_[k * n_ + k]);
        for (std::size_t i = k + 1; i < n_; ++i) {
            double cand = std::abs(lu_[i * n_ + k]);
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best < tol::pivot_min) {
            throw SingularMatrixError("LuFactorization: pivot below threshold at column " + std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(lu_[k * n_ + j], lu_[pivot * n_ + j]);
            }
            std::swap(perm_[k], perm_[pivot]);
        }
        const double d = lu_[k * n_ + k];
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double f = lu_[i * n_ + k] / d;
            lu_[i * n_ + k] = f;
            for (std::size_t j = k + 1; j < n_; ++j) {
                lu_[i * n_ + j] -= f * lu_[k * n_ + j];
            }
        }
    }
}

Vector LuFactorization::solve(const Vector& rhs) const {
    if (rhs.size() != n_) {
        throw DimensionError("LuFactorization::solve: size mismatch");
    }
    Vector y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = rhs[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) {
            s -= lu_[i * n_ + j] * y[j];
        }
        y[i] = s;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n_; ++j) {
            s -= lu_[ii * n_ + j] * y[j];
        }
        y[ii] = s / lu_[ii * n_ + ii];
    }
    return y;
}

Vector LuFactorization::solve_transposed(const Vector& rhs) const {
    if (rhs.size() != n_) {
        throw DimensionError("LuFactorization::solve_transposed: size mismatch");
    }
    // A = P^T L U, so A^T y = rhs solves as U^T z = rhs, L^T w = z, y = P^T w.
    Vector z(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = rhs[i];
        for (std::size_t j = 0; j < i; ++j) {
            s -= lu_[j * n_ + i] * z[j];
        }
        z[i] = s / lu_[i * n_ + i];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t j = ii + 1; j < n_; ++j) {
            s -= lu_[j * n_ + ii] * z[j];
        }
        z[ii] = s;
    }
    Vector y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        y[perm_[i]] = z[i];
    }
    return y;
}

Vector basic_solve(const DenseMatrix& a_basis, const Vector& rhs) {
    LuFactorization lu(a_basis);
    return lu.solve(rhs);
}

CanonicalForm to_canonical(const InequalityLP& lp, const Vector& lower, const Vector& upper) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    if (lower.size() != n || upper.size() != n) {
        throw DimensionError("to_canonical: bound dimension mismatch");
    }
    if (!all_finite(lower) || !all_finite(upper)) {
        throw DimensionError("to_canonical: bounds must be finite");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (lower[j] > upper[j]) {
            throw DimensionError("to_canonical: lower bound above upper at index " + std::to_string(j));
        }
    }

    DenseMatrix A(m, n + m);
    Vector c(n + m, 0.0);
    Vector l(n + m, 0.0);
    Vector u(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = lp.c[j];
        l[j] = lower[j];
        u[j] = upper[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        double row_min = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = lp.A(i, j);
            A(i, j) = a;
            row_min += a > 0.0 ? a * lower[j] : a * upper[j];
        }
        A(i, n + i) = 1.0;
        double slack_ub = lp.b[i] - row_min;
        // A box whose best point exactly touches the row lands at zero up to
        // roundoff; only a decisively negative margin means the row is cut off.
        const double margin = 1e-9 * std::max({1.0, std::abs(lp.b[i]), std::abs(row_min)});
        if (slack_ub < -margin) {
            throw BoxInfeasibleError(i, "to_canonical: row " + std::to_string(i) +
                                            " cannot be satisfied within the variable box");
        }
        slack_ub = std::max(slack_ub, 0.0);
        u[n + i] = slack_ub;
    }
    return CanonicalForm{BoundedCanonicalLP(std::move(c), std::move(A), Vector(lp.b), std::move(l), std::move(u)), n};
}

}  // namespace mlmolp
