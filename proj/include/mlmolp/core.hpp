#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlmolp {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

// Tolerances used across the solvers. Values are absolute unless noted.
namespace tol {
inline constexpr double feasibility = 1e-8;    // |Ax - b| for accepted plans
inline constexpr double bounds = 1e-10;        // bound violation for accepted plans
inline constexpr double optimality = 1e-9;     // reduced-cost / beta threshold
inline constexpr double strict_cmp = 1e-10;    // strict comparisons in index selection
inline constexpr double pivot_min = 1e-12;     // LU pivot magnitude below which we call it singular
inline constexpr double classify_rel = 1e-7;   // relative tolerance for bound classification
inline constexpr double phase_one = 1e-7;      // residual above which phase one declares infeasible
}  // namespace tol

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

// Raised by to_canonical when a constraint row cannot be satisfied anywhere in the box.
struct BoxInfeasibleError : Error {
    std::size_t row;
    BoxInfeasibleError(std::size_t r, const std::string& what) : Error(what), row(r) {}
};

bool all_finite(const Vector& v);
double dot(const Vector& a, const Vector& b);
double max_abs(const Vector& v);

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector column(std::size_t j) const;
    Vector multiply(const Vector& x) const;             // A x
    Vector transpose_multiply(const Vector& y) const;   // A^T y

    const Vector& data() const noexcept { return data_; }

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    Vector data_;
};

// max c^T x  s.t.  A x <= b, x >= 0
struct InequalityLP {
    Vector c;
    DenseMatrix A;
    Vector b;

    InequalityLP() = default;
    InequalityLP(Vector c_, DenseMatrix A_, Vector b_);

    std::size_t num_vars() const noexcept { return c.size(); }
    std::size_t num_rows() const noexcept { return b.size(); }
};

// max c^T x  s.t.  A x = b, l <= x <= u  with finite l, u and m < n.
struct BoundedCanonicalLP {
    Vector c;
    DenseMatrix A;
    Vector b;
    Vector lower;
    Vector upper;

    BoundedCanonicalLP() = default;
    BoundedCanonicalLP(Vector c_, DenseMatrix A_, Vector b_, Vector lower_, Vector upper_);

    std::size_t num_vars() const noexcept { return c.size(); }
    std::size_t num_rows() const noexcept { return b.size(); }

    double objective(const Vector& x) const { return dot(c, x); }
};

// Result of converting an inequality LP: the equality form plus how many leading
// columns are structural (the rest are the per-row slacks).
struct CanonicalForm {
    BoundedCanonicalLP lp;
    std::size_t structural_count{0};
};

// A feasible point paired with a basis whose column submatrix is invertible.
struct SupportPlan {
    Vector x;
    IndexSet basis;      // ordered, |basis| = m
    IndexSet nonbasis;   // ascending complement
};

// Validating factory; throws when the candidate violates any support-plan invariant.
SupportPlan make_support_plan(const BoundedCanonicalLP& lp, Vector x, IndexSet basis);

IndexSet complement_of(const IndexSet& basis, std::size_t n);

DenseMatrix basis_columns(const DenseMatrix& A, const IndexSet& basis);

// LU factorization with partial pivoting. No explicit inverse is formed.
class LuFactorization {
public:
    explicit LuFactorization(const DenseMatrix& a);

    Vector solve(const Vector& rhs) const;             // A y = rhs
    Vector solve_transposed(const Vector& rhs) const;  // A^T y = rhs

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_{0};
    Vector lu_;
    std::vector<std::size_t> perm_;
};

// Solves A_B y = rhs by LU with partial pivoting.
Vector basic_solve(const DenseMatrix& a_basis, const Vector& rhs);

// Appends one slack per row with interval [0, b_i - min_{l<=x<=u} A_i x].
// A negative slack upper bound means the row is unsatisfiable inside the box.
CanonicalForm to_canonical(const InequalityLP& lp, const Vector& lower, const Vector& upper);

}  // namespace mlmolp
