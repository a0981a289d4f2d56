#pragma once

#include <iosfwd>

#include "mlmolp/multilevel.hpp"

namespace mlmolp {

enum class ReportFormat { Csv, Json };

// Locale-independent formatting with 12 significant digits.
std::string format_number(double v);

// CSV columns: alpha1..alpha{P-1}, backend, status, f1..fP, one column per
// variable, iterations_total, wall_ms. Values are in model units (millions for
// the allocation scenario). Failed sweep points carry their status and blanks.
void write_report_csv(const std::vector<SweepResult>& results, const MultilevelProblem& problem, std::ostream& os);

// JSON mirrors CompromiseReport field by field.
void write_report_json(const std::vector<SweepResult>& results, const MultilevelProblem& problem, std::ostream& os);

void write_report(const std::vector<SweepResult>& results, const MultilevelProblem& problem, ReportFormat format,
                  const std::string& path);

// Level table for the independent solves: level, f_max, variables, iterations, wall_ms.
void write_levels_csv(const std::vector<LevelSolution>& levels, const MultilevelProblem& problem, std::ostream& os);

}  // namespace mlmolp
