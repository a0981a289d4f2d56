#pragma once

#include <optional>
#include <string>

#include "mlmolp/adaptive.hpp"
#include "mlmolp/reduction.hpp"
#include "mlmolp/simplex.hpp"

namespace mlmolp {

// P-level problem: one objective per level over a shared region {Ax <= b, x >= 0},
// with the variable vector partitioned into per-level blocks.
struct MultilevelProblem {
    std::size_t levels{0};
    Partition partition;
    std::vector<Vector> objectives;  // one length-n vector per level
    DenseMatrix A;
    Vector b;
    std::vector<std::string> variable_names;  // optional; defaults to x1..xn

    std::size_t num_vars() const noexcept { return partition_total(partition); }
    void validate() const;
    double objective_value(std::size_t level, const Vector& x) const;  // level is 1-based
};

enum class Backend { Adaptive, BoundedSimplex };
enum class Anchor { Chain, Independent };

std::string to_string(Backend b);
std::string to_string(Anchor a);

enum class LevelMethod { Simplex, Adaptive };

struct LevelSolution {
    std::size_t level{0};
    Vector x;
    double objective{0.0};
    LevelMethod method{LevelMethod::Simplex};
    std::size_t iterations{0};
    double wall_ms{0.0};
};

struct LevelSolveStats {
    std::size_t level{0};
    double objective{0.0};
    std::size_t iterations{0};
    double wall_ms{0.0};
};

struct CompromiseReport {
    std::vector<LevelSolution> level_solutions;  // independent solves, levels 1..P
    std::vector<BoundsState> bounds_history;     // states for levels 1..P
    Vector compromise;                           // the level-P solution
    std::vector<double> objective_values;        // f_p(compromise) for p = 1..P
    Vector alphas_per_level;
    Backend backend{Backend::Adaptive};
    Anchor anchor{Anchor::Chain};
    double epsilon{0.0};
    std::vector<LevelSolveStats> reduced_solves;  // the p = 2..P solves
    std::size_t iterations_total{0};
    double wall_ms_total{0.0};
};

struct InfeasibleLevelError : Error {
    std::size_t level;
    BoundsState bounds;
    InfeasibleLevelError(std::size_t lvl, BoundsState snapshot, const std::string& what)
        : Error(what), level(lvl), bounds(std::move(snapshot)) {}
};

// Independent relaxation solves max c_p^T x over {Ax <= b, x >= 0} for each level.
// These run on the simplex baseline regardless of the requested backend: the
// bounded-variable form needs finite boxes, which only exist after the ideal
// bounds are computed from these very solutions.
std::vector<LevelSolution> solve_levels_independently(const MultilevelProblem& problem, Backend backend);

using LevelTraceSink = std::function<void(std::size_t level, const IterationTrace&)>;

// Full top-down resolution: independent solves, ideal bounds, then one reduced
// bounded solve per level from 2 to P. Throws InfeasibleLevelError when a reduced
// model has no feasible point.
CompromiseReport run_algorithm2(const MultilevelProblem& problem, const AlphaParams& alphas, Backend backend,
                                double epsilon, Anchor anchor = Anchor::Chain, const LevelTraceSink& sink = {});

struct SweepResult {
    Vector alphas;
    Backend backend{Backend::Adaptive};
    std::optional<CompromiseReport> report;
    std::string error;  // set when the grid point failed
};

// Runs run_algorithm2 over every grid point x backend combination. Points are
// independent and execute on a small worker pool; output order matches input.
std::vector<SweepResult> alpha_sweep(const MultilevelProblem& problem, const std::vector<Vector>& grid,
                                     const std::vector<Backend>& backends, double epsilon, std::size_t jobs = 0,
                                     Anchor anchor = Anchor::Chain);

// Cartesian grid over P-1 alpha dimensions from one axis of values.
std::vector<Vector> alpha_grid(const Vector& axis, std::size_t dims);

}  // namespace mlmolp
