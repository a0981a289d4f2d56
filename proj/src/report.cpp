#include "mlmolp/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace mlmolp {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> variable_names_of(const MultilevelProblem& problem) {
    if (!problem.variable_names.empty()) {
        return problem.variable_names;
    }
    std::vector<std::string> names;
    names.reserve(problem.num_vars());
    for (std::size_t j = 0; j < problem.num_vars(); ++j) {
        names.push_back("x" + std::to_string(j + 1));
    }
    return names;
}

}  // namespace

void write_report_csv(const std::vector<SweepResult>& results, const MultilevelProblem& problem, std::ostream& os) {
    if (results.empty()) {
        throw Error("write_report_csv: no results");
    }
    const std::size_t levels = problem.levels;
    const auto names = variable_names_of(problem);

    for (std::size_t d = 0; d + 1 < levels; ++d) {
        os << "alpha" << (d + 1) << ",";
    }
    os << "backend,status";
    for (std::size_t p = 1; p <= levels; ++p) {
        os << ",f" << p;
    }
    for (const std::string& name : names) {
        os << "," << name;
    }
    os << ",iterations_total,wall_ms\n";

    for (const SweepResult& r : results) {
        for (double a : r.alphas) {
            os << format_number(a) << ",";
        }
        os << to_string(r.backend) << ",";
        if (r.report) {
            os << "ok";
            for (double f : r.report->objective_values) {
                os << "," << format_number(f);
            }
            for (double x : r.report->compromise) {
                os << "," << format_number(x);
            }
            os << "," << r.report->iterations_total << "," << format_number(r.report->wall_ms_total);
        } else {
            os << "failed";
            for (std::size_t p = 0; p < levels + names.size(); ++p) {
                os << ",";
            }
            os << ",0,0";
        }
        os << "\n";
    }
}

namespace {

using nlohmann::json;

json bounds_to_json(const BoundsState& b) {
    return json{{"level", b.level}, {"lower", b.lower}, {"upper", b.upper}};
}

json report_to_json(const CompromiseReport& r) {
    json j;
    j["backend"] = to_string(r.backend);
    j["anchor"] = to_string(r.anchor);
    j["epsilon"] = r.epsilon;
    j["alphas"] = r.alphas_per_level;
    j["level_solutions"] = json::array();
    for (const LevelSolution& s : r.level_solutions) {
        j["level_solutions"].push_back(json{{"level", s.level},
                                            {"x", s.x},
                                            {"objective", s.objective},
                                            {"method", s.method == LevelMethod::Simplex ? "simplex" : "adaptive"},
                                            {"iterations", s.iterations},
                                            {"wall_ms", s.wall_ms}});
    }
    j["bounds_history"] = json::array();
    for (const BoundsState& b : r.bounds_history) {
        j["bounds_history"].push_back(bounds_to_json(b));
    }
    j["compromise"] = r.compromise;
    j["objective_values"] = r.objective_values;
    j["reduced_solves"] = json::array();
    for (const LevelSolveStats& s : r.reduced_solves) {
        j["reduced_solves"].push_back(json{{"level", s.level},
                                           {"objective", s.objective},
                                           {"iterations", s.iterations},
                                           {"wall_ms", s.wall_ms}});
    }
    j["iterations_total"] = r.iterations_total;
    j["wall_ms_total"] = r.wall_ms_total;
    return j;
}

}  // namespace

void write_report_json(const std::vector<SweepResult>& results, const MultilevelProblem& problem, std::ostream& os) {
    if (results.empty()) {
        throw Error("write_report_json: no results");
    }
    json doc;
    doc["variables"] = variable_names_of(problem);
    doc["results"] = json::array();
    for (const SweepResult& r : results) {
        json entry;
        entry["alphas"] = r.alphas;
        entry["backend"] = to_string(r.backend);
        if (r.report) {
            entry["status"] = "ok";
            entry["report"] = report_to_json(*r.report);
        } else {
            entry["status"] = "failed";
            entry["error"] = r.error;
        }
        doc["results"].push_back(std::move(entry));
    }
    os << doc.dump(2) << "\n";
}

void write_report(const std::vector<SweepResult>& results, const MultilevelProblem& problem, ReportFormat format,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("write_report: cannot open " + path);
    }
    if (format == ReportFormat::Csv) {
        write_report_csv(results, problem, out);
    } else {
        write_report_json(results, problem, out);
    }
    if (!out.good()) {
        throw Error("write_report: write failed for " + path);
    }
}

void write_levels_csv(const std::vector<LevelSolution>& levels, const MultilevelProblem& problem, std::ostream& os) {
    const auto names = variable_names_of(problem);
    os << "level,f_max";
    for (const std::string& name : names) {
        os << "," << name;
    }
    os << ",iterations,wall_ms\n";
    for (const LevelSolution& s : levels) {
        os << s.level << "," << format_number(s.objective);
        for (double x : s.x) {
            os << "," << format_number(x);
        }
        os << "," << s.iterations << "," << format_number(s.wall_ms) << "\n";
    }
}

}  // namespace mlmolp
