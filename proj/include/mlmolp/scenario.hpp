#pragma once

#include <map>

#include "mlmolp/multilevel.hpp"

namespace mlmolp {

struct ScenarioError : Error {
    using Error::Error;
};

struct RegionRecord {
    std::size_t region_id{0};
    std::string name;
    double population{0.0};     // millions
    double cases{0.0};          // millions
    double capacity{0.0};       // millions per year
    double equity_target{0.0};  // percent; carried through reports, not modeled
};

struct HospitalRecord {
    std::size_t region_id{0};
    std::size_t hospital_id{0};
    std::string name;
    double vulnerable{0.0};  // millions
    double beds{0.0};        // millions
};

struct WeightTable {
    Vector lambda;                                        // one per region
    std::map<std::pair<std::size_t, std::size_t>, double> xi;
    std::map<std::pair<std::size_t, std::size_t>, double> omega;
};

struct Scenario {
    std::vector<RegionRecord> regions;
    std::vector<HospitalRecord> hospitals;
    WeightTable weights;
    double production_cap{100.0};  // million doses
};

// Either a three-level allocation scenario or a raw multilevel problem, depending
// on which sections the input file carries.
struct LoadedProblem {
    MultilevelProblem problem;
    std::optional<Scenario> scenario;
    std::vector<std::string> assembly_notes;
};

// Accepts a scenario JSON document, a raw multilevel JSON document, or a
// "regions.csv,hospitals.csv" pair.
LoadedProblem load_problem(const std::string& path_spec);

Scenario load_scenario_json(const std::string& path);
Scenario load_scenario_csv(const std::string& regions_path, const std::string& hospitals_path);

struct BuiltModel {
    MultilevelProblem problem;
    std::vector<std::string> notes;  // row-count bookkeeping for report headers
};

// Assembles the three-level allocation model: P = 3, one production variable,
// one allocation variable per region, one per hospital; constraint blocks are
// cap / population / minimum-cases / minimum-capacity / region coupling /
// beds / minimum-vulnerable / hospital coupling.
BuiltModel build_vaccine_model(const Scenario& scenario);

}  // namespace mlmolp
