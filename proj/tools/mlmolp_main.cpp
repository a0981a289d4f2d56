#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <sys/resource.h>

#include "CLI11.hpp"

#include "mlmolp/oracle.hpp"
#include "mlmolp/report.hpp"
#include "mlmolp/scenario.hpp"

namespace {

using namespace mlmolp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

long peak_rss_kb() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

Backend parse_backend(const std::string& name) {
    if (name == "adaptive") {
        return Backend::Adaptive;
    }
    if (name == "simplex") {
        return Backend::BoundedSimplex;
    }
    throw CLI::ValidationError("--backend", "expected 'adaptive' or 'simplex'");
}

Anchor parse_anchor(const std::string& name) {
    if (name == "chain") {
        return Anchor::Chain;
    }
    if (name == "independent") {
        return Anchor::Independent;
    }
    throw CLI::ValidationError("--anchor", "expected 'chain' or 'independent'");
}

// "0.25" expands to the step grid {0, 0.25, ..., 1}; "0,0.5,1" is taken verbatim.
Vector parse_grid_axis(const std::string& spec) {
    Vector axis;
    std::stringstream ss(spec);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) {
            axis.push_back(std::stod(tok));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "cannot parse '" + spec + "'");
    }
    if (axis.empty()) {
        throw CLI::ValidationError("--grid", "empty grid value");
    }
    if (axis.size() == 1) {
        const double step = axis.front();
        if (!(step > 0.0 && step <= 1.0)) {
            throw CLI::ValidationError("--grid", "step must lie in (0, 1]");
        }
        axis.clear();
        for (double a = 0.0; a < 1.0 - 1e-12; a += step) {
            axis.push_back(a);
        }
        axis.push_back(1.0);
    }
    for (double a : axis) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw CLI::ValidationError("--grid", "values must lie in [0, 1]");
        }
    }
    return axis;
}

std::size_t effective_jobs(std::size_t flag_jobs) {
    if (const char* env = std::getenv("MLMOLP_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return flag_jobs;
}

void print_problem_header(const LoadedProblem& loaded, std::ostream& os) {
    const MultilevelProblem& p = loaded.problem;
    os << "problem: " << p.levels << " levels, " << p.num_vars() << " variables, " << p.b.size()
       << " constraints\n";
    for (const std::string& note : loaded.assembly_notes) {
        os << "  " << note << "\n";
    }
    if (loaded.scenario) {
        os << "  units: millions (scale by 100 for 1e4-dose units, by 1000 for 1e3-dose units)\n";
    }
}

void emit_results(const std::vector<SweepResult>& results, const MultilevelProblem& problem, const std::string& out,
                  const std::string& format) {
    if (out.empty()) {
        return;
    }
    const ReportFormat fmt = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    write_report(results, problem, fmt, out);
}

LevelTraceSink make_trace_sink(bool enabled) {
    if (!enabled) {
        return {};
    }
    return [](std::size_t level, const IterationTrace& row) {
        std::cerr << "trace,level=" << level << "," << row.iteration << "," << format_number(row.beta) << ","
                  << (row.entering ? std::to_string(*row.entering) : "") << ","
                  << (row.leaving ? std::to_string(*row.leaving) : "") << "," << format_number(row.theta) << ","
                  << format_number(row.objective) << "\n";
    };
}

int cmd_levels(const std::string& problem_path, const std::string& out, const std::string& format) {
    LoadedProblem loaded = load_problem(problem_path);
    print_problem_header(loaded, std::cout);
    std::vector<LevelSolution> levels = solve_levels_independently(loaded.problem, Backend::Adaptive);

    std::cout << "independent level solves:\n";
    for (const LevelSolution& s : levels) {
        std::cout << "  level " << s.level << ": f_max = " << format_number(s.objective);
        if (loaded.scenario) {
            std::cout << " million (= " << format_number(s.objective * 100.0) << " x1e4)";
        }
        std::cout << "  [" << s.iterations << " iterations]\n";
    }

    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            throw ScenarioError("cannot open output file: " + out);
        }
        if (format == "json") {
            std::ostringstream tmp;
            write_levels_csv(levels, loaded.problem, tmp);
            // JSON wrapper for the level table
            f << "{\n  \"levels\": [\n";
            for (std::size_t i = 0; i < levels.size(); ++i) {
                f << "    {\"level\": " << levels[i].level << ", \"f_max\": " << format_number(levels[i].objective)
                  << ", \"x\": [";
                for (std::size_t j = 0; j < levels[i].x.size(); ++j) {
                    f << (j ? "," : "") << format_number(levels[i].x[j]);
                }
                f << "], \"iterations\": " << levels[i].iterations << "}" << (i + 1 < levels.size() ? "," : "")
                  << "\n";
            }
            f << "  ]\n}\n";
        } else {
            write_levels_csv(levels, loaded.problem, f);
        }
    }
    return kExitOk;
}

void validate_alphas(const Vector& alphas, std::size_t levels) {
    if (alphas.size() + 1 != levels) {
        throw CLI::ValidationError("--alpha", "expected " + std::to_string(levels - 1) +
                                                  " value(s) for a " + std::to_string(levels) + "-level problem");
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw CLI::ValidationError("--alpha", "values must lie in [0, 1]");
        }
    }
}

int cmd_solve(const std::string& problem_path, const Vector& alphas, const std::string& backend_name, double epsilon,
              const std::string& anchor_name, bool trace, const std::string& out, const std::string& format) {
    LoadedProblem loaded = load_problem(problem_path);
    print_problem_header(loaded, std::cout);

    const Backend backend = parse_backend(backend_name);
    const Anchor anchor = parse_anchor(anchor_name);
    validate_alphas(alphas, loaded.problem.levels);
    AlphaParams params = AlphaParams::broadcast(loaded.problem.partition, alphas);

    CompromiseReport report =
        run_algorithm2(loaded.problem, params, backend, epsilon, anchor, make_trace_sink(trace));

    std::cout << "backend: " << to_string(backend) << ", anchor: " << to_string(anchor) << ", epsilon "
              << format_number(epsilon) << "\n";
    std::cout << "objectives at the compromise:";
    for (std::size_t p = 0; p < report.objective_values.size(); ++p) {
        std::cout << (p ? ", " : " ") << "f" << (p + 1) << " = " << format_number(report.objective_values[p]);
    }
    std::cout << "\ncompromise:";
    const auto& names = loaded.problem.variable_names;
    for (std::size_t j = 0; j < report.compromise.size(); ++j) {
        std::cout << " " << (names.empty() ? "x" + std::to_string(j + 1) : names[j]) << "="
                  << format_number(report.compromise[j]);
    }
    std::cout << "\niterations: " << report.iterations_total << ", wall: " << format_number(report.wall_ms_total)
              << " ms\n";

    std::vector<SweepResult> results(1);
    results[0].alphas = alphas;
    results[0].backend = backend;
    results[0].report = std::move(report);
    emit_results(results, loaded.problem, out, format);
    return kExitOk;
}

int cmd_sweep(const std::string& problem_path, const std::string& grid_spec, const std::string& backends_name,
              double epsilon, const std::string& anchor_name, std::size_t jobs, const std::string& out,
              const std::string& format) {
    LoadedProblem loaded = load_problem(problem_path);
    print_problem_header(loaded, std::cout);

    std::vector<Backend> backends;
    if (backends_name == "both") {
        backends = {Backend::Adaptive, Backend::BoundedSimplex};
    } else {
        backends = {parse_backend(backends_name)};
    }
    const Anchor anchor = parse_anchor(anchor_name);
    const Vector axis = parse_grid_axis(grid_spec);
    const auto grid = alpha_grid(axis, loaded.problem.levels - 1);

    const auto results = alpha_sweep(loaded.problem, grid, backends, epsilon, effective_jobs(jobs), anchor);

    std::size_t ok = 0;
    for (const SweepResult& r : results) {
        if (r.report) {
            ++ok;
        } else {
            std::cout << "point (";
            for (std::size_t d = 0; d < r.alphas.size(); ++d) {
                std::cout << (d ? "," : "") << format_number(r.alphas[d]);
            }
            std::cout << ") " << to_string(r.backend) << ": failed (" << r.error << ")\n";
        }
    }
    std::cout << "sweep: " << ok << "/" << results.size() << " points solved\n";
    emit_results(results, loaded.problem, out, format);
    return ok > 0 ? kExitOk : kExitSolver;
}

int cmd_compare(const std::string& problem_path, const std::string& grid_spec, double epsilon,
                const std::string& anchor_name, std::size_t jobs, const std::string& out, const std::string& format) {
    LoadedProblem loaded = load_problem(problem_path);
    print_problem_header(loaded, std::cout);

    const Anchor anchor = parse_anchor(anchor_name);
    const Vector axis = parse_grid_axis(grid_spec);
    const auto grid = alpha_grid(axis, loaded.problem.levels - 1);

    const auto adaptive =
        alpha_sweep(loaded.problem, grid, {Backend::Adaptive}, epsilon, effective_jobs(jobs), anchor);
    const long rss_adaptive = peak_rss_kb();
    const auto simplex =
        alpha_sweep(loaded.problem, grid, {Backend::BoundedSimplex}, epsilon, effective_jobs(jobs), anchor);
    const long rss_simplex = peak_rss_kb();

    const std::size_t levels = loaded.problem.levels;
    std::cout << "columns: alphas | simplex f1..f" << levels << " iters ms | adaptive f1..f" << levels
              << " iters ms\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::cout << "(";
        for (std::size_t d = 0; d < grid[k].size(); ++d) {
            std::cout << (d ? "," : "") << format_number(grid[k][d]);
        }
        std::cout << ")";
        for (const auto* side : {&simplex, &adaptive}) {
            std::cout << " |";
            const SweepResult& r = (*side)[k];
            if (r.report) {
                for (double f : r.report->objective_values) {
                    std::cout << " " << format_number(f);
                }
                std::cout << " " << r.report->iterations_total << " "
                          << format_number(r.report->wall_ms_total);
            } else {
                std::cout << " failed(" << r.error << ")";
            }
        }
        std::cout << "\n";
    }
    std::cout << "peak rss: simplex run " << rss_simplex << " KB, adaptive run " << rss_adaptive << " KB\n";

    std::vector<SweepResult> combined;
    combined.reserve(adaptive.size() + simplex.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        combined.push_back(adaptive[k]);
        combined.push_back(simplex[k]);
    }
    std::size_t ok = 0;
    for (const SweepResult& r : combined) {
        if (r.report) {
            ++ok;
        }
    }
    emit_results(combined, loaded.problem, out, format);
    return ok > 0 ? kExitOk : kExitSolver;
}

int cmd_oracle(std::size_t count, std::uint64_t seed) {
    CrossCheckStats stats = cross_validate(count, seed);
    std::cout << "cross-validation: " << stats.passed << "/" << stats.total << " instances agree\n";
    for (const std::string& f : stats.failures) {
        std::cout << "  " << f << "\n";
    }
    return stats.passed == stats.total ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mlmolp: multilevel mono-objective linear programming solver"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string out_path;
    std::string format = "csv";
    std::string backend_name = "adaptive";
    std::string backends_name = "adaptive";
    std::string anchor_name = "chain";
    std::string grid_spec = "0.25";
    Vector alphas;
    double epsilon = 1e-9;
    std::size_t jobs = 0;
    bool trace = false;
    std::size_t oracle_count = 200;
    std::uint64_t oracle_seed = 1;

    CLI::App* solve = app.add_subcommand("solve", "resolve the hierarchy for one set of alphas");
    solve->add_option("--problem", problem_path, "scenario or problem file")->required();
    solve->add_option("--alpha", alphas, "per-level reduction fractions")->required()->delimiter(',');
    solve->add_option("--backend", backend_name, "adaptive|simplex");
    solve->add_option("--epsilon", epsilon, "suboptimality target for the adaptive backend");
    solve->add_option("--anchor", anchor_name, "chain|independent");
    solve->add_flag("--trace", trace, "emit per-iteration records on stderr");
    solve->add_option("--out", out_path, "report file");
    solve->add_option("--format", format, "csv|json");

    CLI::App* sweep = app.add_subcommand("sweep", "run a grid of alpha combinations");
    sweep->add_option("--problem", problem_path, "scenario or problem file")->required();
    sweep->add_option("--grid", grid_spec, "step (e.g. 0.25) or explicit list (e.g. 0,0.5,1)");
    sweep->add_option("--backends", backends_name, "adaptive|simplex|both");
    sweep->add_option("--epsilon", epsilon, "suboptimality target for the adaptive backend");
    sweep->add_option("--anchor", anchor_name, "chain|independent");
    sweep->add_option("--jobs", jobs, "worker threads (MLMOLP_JOBS overrides)");
    sweep->add_option("--out", out_path, "report file");
    sweep->add_option("--format", format, "csv|json");

    CLI::App* compare = app.add_subcommand("compare", "side-by-side backend comparison over a grid");
    compare->add_option("--problem", problem_path, "scenario or problem file")->required();
    compare->add_option("--grid", grid_spec, "step or explicit list");
    compare->add_option("--epsilon", epsilon, "suboptimality target for the adaptive backend");
    compare->add_option("--anchor", anchor_name, "chain|independent");
    compare->add_option("--jobs", jobs, "worker threads (MLMOLP_JOBS overrides)");
    compare->add_option("--out", out_path, "report file");
    compare->add_option("--format", format, "csv|json");

    CLI::App* levels = app.add_subcommand("levels", "independent per-level solves only");
    levels->add_option("--problem", problem_path, "scenario or problem file")->required();
    levels->add_option("--out", out_path, "report file");
    levels->add_option("--format", format, "csv|json");

    CLI::App* oracle = app.add_subcommand("oracle", "randomized cross-validation against brute force");
    oracle->add_option("--random", oracle_count, "number of random instances");
    oracle->add_option("--seed", oracle_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(problem_path, alphas, backend_name, epsilon, anchor_name, trace, out_path, format);
        }
        if (sweep->parsed()) {
            return cmd_sweep(problem_path, grid_spec, backends_name, epsilon, anchor_name, jobs, out_path, format);
        }
        if (compare->parsed()) {
            return cmd_compare(problem_path, grid_spec, epsilon, anchor_name, jobs, out_path, format);
        }
        if (levels->parsed()) {
            return cmd_levels(problem_path, out_path, format);
        }
        if (oracle->parsed()) {
            return cmd_oracle(oracle_count, oracle_seed);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleLevelError& e) {
        std::cerr << "error: infeasible at level " << e.level << ": " << e.what() << "\n";
        return kExitSolver;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
