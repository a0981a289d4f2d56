#include "mlmolp/multilevel.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace mlmolp {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void MultilevelProblem::validate() const {
    if (levels < 2) {
        throw DimensionError("MultilevelProblem: at least two levels required");
    }
    if (partition.size() != levels || objectives.size() != levels) {
        throw DimensionError("MultilevelProblem: partition/objective count must equal the level count");
    }
    const std::size_t n = num_vars();
    if (A.cols() != n || A.rows() != b.size()) {
        throw DimensionError("MultilevelProblem: constraint dimensions inconsistent");
    }
    for (const Vector& c : objectives) {
        if (c.size() != n) {
            throw DimensionError("MultilevelProblem: objective length mismatch");
        }
    }
    if (!variable_names.empty() && variable_names.size() != n) {
        throw DimensionError("MultilevelProblem: variable name count mismatch");
    }
}

double MultilevelProblem::objective_value(std::size_t level, const Vector& x) const {
    if (level == 0 || level > levels) {
        throw DimensionError("MultilevelProblem: level out of range");
    }
    return dot(objectives[level - 1], x);
}

std::string to_string(Backend b) {
    return b == Backend::Adaptive ? "adaptive" : "simplex";
}

std::string to_string(Anchor a) {
    return a == Anchor::Chain ? "chain" : "independent";
}

std::vector<LevelSolution> solve_levels_independently(const MultilevelProblem& problem, Backend backend) {
    (void)backend;
    problem.validate();
    std::vector<LevelSolution> out;
    out.reserve(problem.levels);
    for (std::size_t p = 1; p <= problem.levels; ++p) {
        const auto start = std::chrono::steady_clock::now();
        InequalityLP lp(Vector(problem.objectives[p - 1]), problem.A, Vector(problem.b));
        SimplexOutcome res = simplex_solve(lp);
        if (res.status != SimplexStatus::Optimal) {
            throw Error("independent solve at level " + std::to_string(p) + " is " + to_string(res.status));
        }
        LevelSolution sol;
        sol.level = p;
        sol.x = std::move(res.x);
        sol.objective = res.objective;
        sol.method = LevelMethod::Simplex;
        sol.iterations = res.iterations;
        sol.wall_ms = elapsed_ms(start);
        out.push_back(std::move(sol));
    }
    return out;
}

CompromiseReport run_algorithm2(const MultilevelProblem& problem, const AlphaParams& alphas, Backend backend,
                                double epsilon, Anchor anchor, const LevelTraceSink& sink) {
    problem.validate();
    if (epsilon < 0.0) {
        throw Error("run_algorithm2: epsilon must be nonnegative");
    }
    if (alphas.per_component.size() != problem.num_vars()) {
        throw DimensionError("run_algorithm2: alpha dimension mismatch");
    }
    const auto run_start = std::chrono::steady_clock::now();

    CompromiseReport report;
    report.backend = backend;
    report.anchor = anchor;
    report.epsilon = epsilon;
    report.alphas_per_level = alphas.per_level;

    report.level_solutions = solve_levels_independently(problem, backend);

    std::vector<Vector> solutions;
    solutions.reserve(problem.levels);
    for (const LevelSolution& s : report.level_solutions) {
        solutions.push_back(s.x);
        report.iterations_total += s.iterations;
    }
    BoundsState bounds = ideal_bounds(solutions);
    report.bounds_history.push_back(bounds);

    Vector current;

    // The driver applies a level's reduction to every component its owner's
    // objective references. Whether the *next* objective references the component
    // does not gate the reduction here: coupling rows transmit the restriction
    // even when the variable is absent from the lower objective.
    const Vector downstream_gate(problem.num_vars(), 1.0);

    for (std::size_t p = 2; p <= problem.levels; ++p) {
        // Reductions are anchored on the owning level's independent optimum.
        // Anchoring on the previous compromise instead can wedge the pipeline:
        // a compromise forced onto its lower bounds flips the reduction case and
        // full-strength reductions then demand the unreachable opposite corner.
        const Vector& around = report.level_solutions[p - 2].x;
        bounds = apply_xi(p, bounds, around, problem.objectives[p - 2], downstream_gate, alphas,
                          problem.partition);
        report.bounds_history.push_back(bounds);

        const auto solve_start = std::chrono::steady_clock::now();
        InequalityLP stage(Vector(problem.objectives[p - 1]), problem.A, Vector(problem.b));
        LevelSolveStats stats;
        stats.level = p;
        try {
            CanonicalForm form = to_canonical(stage, bounds.lower, bounds.upper);
            if (backend == Backend::Adaptive) {
                TraceSink level_sink;
                if (sink) {
                    level_sink = [&sink, p](const IterationTrace& row) { sink(p, row); };
                }
                SolveOutcome res = solve_canonical(form, epsilon, 0, level_sink);
                if (res.status == SolveStatus::Infeasible) {
                    throw InfeasibleLevelError(p, bounds, "reduced model at level " + std::to_string(p) +
                                                              " has no feasible point");
                }
                if (res.status == SolveStatus::IterationLimit) {
                    throw Error("reduced model at level " + std::to_string(p) + " hit the iteration limit");
                }
                current.assign(res.x.begin(),
                               res.x.begin() + static_cast<std::ptrdiff_t>(form.structural_count));
                stats.objective = res.objective;
                stats.iterations = res.iterations;
            } else {
                SimplexOutcome res = bounded_simplex_solve(form.lp);
                if (res.status != SimplexStatus::Optimal) {
                    throw InfeasibleLevelError(p, bounds, "reduced model at level " + std::to_string(p) +
                                                              " has no feasible point");
                }
                current.assign(res.x.begin(),
                               res.x.begin() + static_cast<std::ptrdiff_t>(form.structural_count));
                stats.objective = dot(problem.objectives[p - 1], current);
                stats.iterations = res.iterations;
            }
        } catch (const BoxInfeasibleError& e) {
            throw InfeasibleLevelError(p, bounds, "reduced model at level " + std::to_string(p) +
                                                      " has no feasible point (constraint row " +
                                                      std::to_string(e.row) + " excluded by the bounds)");
        }
        stats.wall_ms = elapsed_ms(solve_start);
        report.iterations_total += stats.iterations;
        report.reduced_solves.push_back(stats);
    }

    report.compromise = current;
    for (std::size_t p = 1; p <= problem.levels; ++p) {
        report.objective_values.push_back(problem.objective_value(p, report.compromise));
    }

    // Sanity on the contract: the compromise satisfies the shared constraints and
    // the final box.
    {
        Vector ax = problem.A.multiply(report.compromise);
        for (std::size_t i = 0; i < problem.b.size(); ++i) {
            if (ax[i] > problem.b[i] + tol::feasibility) {
                throw Error("run_algorithm2: compromise violates constraint row " + std::to_string(i));
            }
        }
        const BoundsState& last = report.bounds_history.back();
        for (std::size_t j = 0; j < report.compromise.size(); ++j) {
            if (report.compromise[j] < last.lower[j] - tol::feasibility ||
                report.compromise[j] > last.upper[j] + tol::feasibility || report.compromise[j] < -tol::feasibility) {
                throw Error("run_algorithm2: compromise escapes the reduced bounds at index " + std::to_string(j));
            }
        }
    }

    report.wall_ms_total = elapsed_ms(run_start);
    return report;
}

std::vector<Vector> alpha_grid(const Vector& axis, std::size_t dims) {
    if (axis.empty() || dims == 0) {
        throw Error("alpha_grid: empty axis or zero dimensions");
    }
    std::vector<Vector> grid;
    std::vector<std::size_t> idx(dims, 0);
    while (true) {
        Vector point(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            point[d] = axis[idx[d]];
        }
        grid.push_back(std::move(point));
        std::size_t d = dims;
        while (d-- > 0) {
            if (++idx[d] < axis.size()) {
                break;
            }
            idx[d] = 0;
            if (d == 0) {
                return grid;
            }
        }
    }
}

std::vector<SweepResult> alpha_sweep(const MultilevelProblem& problem, const std::vector<Vector>& grid,
                                     const std::vector<Backend>& backends, double epsilon, std::size_t jobs,
                                     Anchor anchor) {
    if (grid.empty()) {
        throw Error("alpha_sweep: empty grid");
    }
    if (backends.empty()) {
        throw Error("alpha_sweep: no backends selected");
    }
    problem.validate();

    struct Task {
        Vector alphas;
        Backend backend;
    };
    std::vector<Task> tasks;
    tasks.reserve(grid.size() * backends.size());
    for (const Vector& point : grid) {
        for (Backend b : backends) {
            tasks.push_back(Task{point, b});
        }
    }

    std::vector<SweepResult> results(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) {
                return;
            }
            SweepResult& slot = results[k];
            slot.alphas = tasks[k].alphas;
            slot.backend = tasks[k].backend;
            try {
                AlphaParams params = AlphaParams::broadcast(problem.partition, tasks[k].alphas);
                slot.report = run_algorithm2(problem, params, tasks[k].backend, epsilon, anchor);
            } catch (const InfeasibleLevelError& e) {
                slot.error = std::string("level ") + std::to_string(e.level) + ": " + e.what();
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
        }
    };

    if (jobs == 0) {
        jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, tasks.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return results;
}

}  // namespace mlmolp
