#include "mlmolp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mlmolp {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

void validate_scenario(const Scenario& s) {
    if (s.regions.empty()) {
        throw ScenarioError("no regions");
    }
    if (s.hospitals.empty()) {
        throw ScenarioError("no hospitals");
    }
    for (const RegionRecord& r : s.regions) {
        if (!(r.population >= r.cases && r.cases >= 0.0)) {
            throw ScenarioError("region " + std::to_string(r.region_id) +
                                ": population must dominate cases and cases must be nonnegative");
        }
        if (r.capacity < 0.0) {
            throw ScenarioError("region " + std::to_string(r.region_id) + ": negative capacity");
        }
    }
    for (const HospitalRecord& h : s.hospitals) {
        if (!(h.vulnerable >= 0.0 && h.vulnerable <= h.beds)) {
            throw ScenarioError("hospital (" + std::to_string(h.region_id) + "," + std::to_string(h.hospital_id) +
                                "): requires 0 <= vulnerable <= beds");
        }
        if (std::none_of(s.regions.begin(), s.regions.end(),
                         [&](const RegionRecord& r) { return r.region_id == h.region_id; })) {
            throw ScenarioError("hospital (" + std::to_string(h.region_id) + "," + std::to_string(h.hospital_id) +
                                ") references an unknown region");
        }
    }
    if (s.weights.lambda.size() != s.regions.size()) {
        throw ScenarioError("lambda weight count must equal the region count");
    }
    for (double l : s.weights.lambda) {
        if (!(l > 0.0)) {
            throw ScenarioError("lambda weights must be positive");
        }
    }
    for (const HospitalRecord& h : s.hospitals) {
        const auto key = std::make_pair(h.region_id, h.hospital_id);
        const auto xi = s.weights.xi.find(key);
        const auto om = s.weights.omega.find(key);
        if (xi == s.weights.xi.end() || om == s.weights.omega.end()) {
            throw ScenarioError("missing xi/omega weight for hospital (" + std::to_string(h.region_id) + "," +
                                std::to_string(h.hospital_id) + ")");
        }
        if (xi->second < 0.0 || om->second < 0.0) {
            throw ScenarioError("xi/omega weights must be nonnegative");
        }
    }
    if (s.production_cap <= 0.0) {
        throw ScenarioError("production cap must be positive");
    }
}

// Weight table used when a CSV pair omits the optional weight columns and the
// structure matches the bundled four-region dataset.
const Vector kDefaultLambda = {0.4, 0.3, 0.2, 0.1};

}  // namespace

Scenario load_scenario_json(const std::string& path) {
    json doc = read_json_file(path);
    if (!doc.contains("schema_version")) {
        throw ScenarioError(path + ": missing schema_version");
    }
    if (doc["schema_version"].get<int>() != 1) {
        throw ScenarioError(path + ": unsupported schema_version");
    }

    Scenario s;
    s.production_cap = doc.value("production_cap", 100.0);
    for (const json& r : doc.at("regions")) {
        RegionRecord rec;
        rec.region_id = r.at("id").get<std::size_t>();
        rec.name = r.value("name", "region-" + std::to_string(rec.region_id));
        rec.population = r.at("population").get<double>();
        rec.cases = r.at("cases").get<double>();
        rec.capacity = r.at("capacity").get<double>();
        rec.equity_target = r.value("equity_target", 0.0);
        s.regions.push_back(std::move(rec));
    }
    for (const json& h : doc.at("hospitals")) {
        HospitalRecord rec;
        rec.region_id = h.at("region").get<std::size_t>();
        rec.hospital_id = h.at("id").get<std::size_t>();
        rec.name = h.value("name", "");
        rec.vulnerable = h.at("vulnerable").get<double>();
        rec.beds = h.at("beds").get<double>();
        const auto key = std::make_pair(rec.region_id, rec.hospital_id);
        s.weights.xi[key] = h.at("xi").get<double>();
        s.weights.omega[key] = h.at("omega").get<double>();
        s.hospitals.push_back(std::move(rec));
    }
    s.weights.lambda = doc.at("lambda").get<Vector>();
    validate_scenario(s);
    return s;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open file: " + path);
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (line.ends_with(',')) {
            fields.emplace_back();
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) {
        throw ScenarioError(path + ": empty file");
    }
    return rows;
}

double parse_number(const std::string& text, const std::string& path, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ScenarioError(path + ": row " + std::to_string(row + 1) + ": cannot parse number '" + text + "'");
    }
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ScenarioError(path + ": missing column '" + name + "'");
}

std::optional<std::size_t> optional_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace

Scenario load_scenario_csv(const std::string& regions_path, const std::string& hospitals_path) {
    Scenario s;

    const auto region_rows = read_csv(regions_path);
    const auto& rh = region_rows.front();
    const std::size_t r_id = column_index(rh, "region", regions_path);
    const std::size_t r_pop = column_index(rh, "population", regions_path);
    const std::size_t r_cases = column_index(rh, "cases", regions_path);
    const std::size_t r_cap = column_index(rh, "capacity", regions_path);
    const auto r_name = optional_column(rh, "name");
    const auto r_eq = optional_column(rh, "equity_target");
    for (std::size_t i = 1; i < region_rows.size(); ++i) {
        const auto& row = region_rows[i];
        RegionRecord rec;
        rec.region_id = static_cast<std::size_t>(parse_number(row.at(r_id), regions_path, i));
        rec.name = r_name ? row.at(*r_name) : "region-" + std::to_string(rec.region_id);
        rec.population = parse_number(row.at(r_pop), regions_path, i);
        rec.cases = parse_number(row.at(r_cases), regions_path, i);
        rec.capacity = parse_number(row.at(r_cap), regions_path, i);
        rec.equity_target = r_eq ? parse_number(row.at(*r_eq), regions_path, i) : 0.0;
        s.regions.push_back(std::move(rec));
    }

    const auto hospital_rows = read_csv(hospitals_path);
    const auto& hh = hospital_rows.front();
    const std::size_t h_region = column_index(hh, "region", hospitals_path);
    const std::size_t h_id = column_index(hh, "hospital", hospitals_path);
    const std::size_t h_vul = column_index(hh, "vulnerable", hospitals_path);
    const std::size_t h_beds = column_index(hh, "beds", hospitals_path);
    const auto h_name = optional_column(hh, "name");
    const auto h_xi = optional_column(hh, "xi");
    const auto h_omega = optional_column(hh, "omega");
    if (h_xi.has_value() != h_omega.has_value()) {
        throw ScenarioError(hospitals_path + ": xi and omega columns must appear together");
    }
    for (std::size_t i = 1; i < hospital_rows.size(); ++i) {
        const auto& row = hospital_rows[i];
        HospitalRecord rec;
        rec.region_id = static_cast<std::size_t>(parse_number(row.at(h_region), hospitals_path, i));
        rec.hospital_id = static_cast<std::size_t>(parse_number(row.at(h_id), hospitals_path, i));
        rec.name = h_name ? row.at(*h_name) : "";
        rec.vulnerable = parse_number(row.at(h_vul), hospitals_path, i);
        rec.beds = parse_number(row.at(h_beds), hospitals_path, i);
        const auto key = std::make_pair(rec.region_id, rec.hospital_id);
        if (h_xi) {
            s.weights.xi[key] = parse_number(row.at(*h_xi), hospitals_path, i);
            s.weights.omega[key] = parse_number(row.at(*h_omega), hospitals_path, i);
        }
        s.hospitals.push_back(std::move(rec));
    }
    if (!h_xi) {
        throw ScenarioError(hospitals_path + ": xi/omega weight columns are required");
    }

    if (s.regions.size() == kDefaultLambda.size()) {
        s.weights.lambda = kDefaultLambda;
    } else {
        throw ScenarioError(regions_path + ": default lambda weights cover exactly " +
                            std::to_string(kDefaultLambda.size()) + " regions; supply a JSON scenario instead");
    }
    validate_scenario(s);
    return s;
}

BuiltModel build_vaccine_model(const Scenario& scenario) {
    validate_scenario(scenario);

    std::vector<RegionRecord> regions = scenario.regions;
    std::sort(regions.begin(), regions.end(),
              [](const RegionRecord& a, const RegionRecord& b) { return a.region_id < b.region_id; });
    std::vector<HospitalRecord> hospitals = scenario.hospitals;
    std::sort(hospitals.begin(), hospitals.end(), [](const HospitalRecord& a, const HospitalRecord& b) {
        return a.region_id != b.region_id ? a.region_id < b.region_id : a.hospital_id < b.hospital_id;
    });

    const std::size_t num_regions = regions.size();
    const std::size_t num_hospitals = hospitals.size();
    const std::size_t n = 1 + num_regions + num_hospitals;
    const std::size_t m = 1 + 3 * num_regions + 2 * num_hospitals + 2;

    DenseMatrix A(m, n);
    Vector b(m, 0.0);
    std::size_t row = 0;

    // production cap
    A(row, 0) = 1.0;
    b[row] = scenario.production_cap;
    ++row;
    // region allocation <= population
    for (std::size_t i = 0; i < num_regions; ++i) {
        A(row, 1 + i) = 1.0;
        b[row] = regions[i].population;
        ++row;
    }
    // region allocation >= cases
    for (std::size_t i = 0; i < num_regions; ++i) {
        A(row, 1 + i) = -1.0;
        b[row] = -regions[i].cases;
        ++row;
    }
    // region allocation >= administration capacity
    for (std::size_t i = 0; i < num_regions; ++i) {
        A(row, 1 + i) = -1.0;
        b[row] = -regions[i].capacity;
        ++row;
    }
    // sum of regional allocations <= production
    A(row, 0) = -1.0;
    for (std::size_t i = 0; i < num_regions; ++i) {
        A(row, 1 + i) = 1.0;
    }
    b[row] = 0.0;
    ++row;
    // hospital allocation <= beds
    for (std::size_t j = 0; j < num_hospitals; ++j) {
        A(row, 1 + num_regions + j) = 1.0;
        b[row] = hospitals[j].beds;
        ++row;
    }
    // hospital allocation >= vulnerable population
    for (std::size_t j = 0; j < num_hospitals; ++j) {
        A(row, 1 + num_regions + j) = -1.0;
        b[row] = -hospitals[j].vulnerable;
        ++row;
    }
    // sum of hospital allocations <= sum of regional allocations
    for (std::size_t i = 0; i < num_regions; ++i) {
        A(row, 1 + i) = -1.0;
    }
    for (std::size_t j = 0; j < num_hospitals; ++j) {
        A(row, 1 + num_regions + j) = 1.0;
    }
    b[row] = 0.0;
    ++row;
    if (row != m) {
        throw Error("build_vaccine_model: assembled row count mismatch");
    }

    MultilevelProblem problem;
    problem.levels = 3;
    problem.partition = {1, num_regions, num_hospitals};
    problem.A = std::move(A);
    problem.b = std::move(b);

    Vector c1(n, 0.0), c2(n, 0.0), c3(n, 0.0);
    c1[0] = 1.0;
    std::map<std::size_t, std::size_t> region_pos;
    for (std::size_t i = 0; i < num_regions; ++i) {
        region_pos[regions[i].region_id] = i;
        c2[1 + i] = scenario.weights.lambda[i];
    }
    for (std::size_t j = 0; j < num_hospitals; ++j) {
        const auto key = std::make_pair(hospitals[j].region_id, hospitals[j].hospital_id);
        c3[1 + num_regions + j] = scenario.weights.omega.at(key);
    }
    problem.objectives = {std::move(c1), std::move(c2), std::move(c3)};

    problem.variable_names.reserve(n);
    problem.variable_names.push_back("x11");
    for (std::size_t i = 0; i < num_regions; ++i) {
        problem.variable_names.push_back("x2" + std::to_string(regions[i].region_id));
    }
    for (std::size_t j = 0; j < num_hospitals; ++j) {
        problem.variable_names.push_back("x3" + std::to_string(hospitals[j].region_id) + "_" +
                                         std::to_string(hospitals[j].hospital_id));
    }
    problem.validate();

    BuiltModel out;
    out.problem = std::move(problem);
    out.notes.push_back("constraints: " + std::to_string(m) + " rows x " + std::to_string(n) +
                        " variables (blocks 1+" + std::to_string(num_regions) + "+" + std::to_string(num_regions) +
                        "+" + std::to_string(num_regions) + "+1+" + std::to_string(num_hospitals) + "+" +
                        std::to_string(num_hospitals) + "+1)");
    return out;
}

namespace {

MultilevelProblem load_raw_multilevel(const json& doc, const std::string& path) {
    MultilevelProblem p;
    p.partition = doc.at("partition").get<Partition>();
    p.levels = p.partition.size();
    for (const json& c : doc.at("objectives")) {
        p.objectives.push_back(c.get<Vector>());
    }
    const json& cons = doc.at("constraints");
    const auto rows = cons.at("A").get<std::vector<Vector>>();
    p.b = cons.at("b").get<Vector>();
    if (rows.empty()) {
        throw ScenarioError(path + ": empty constraint matrix");
    }
    const std::size_t n = rows.front().size();
    DenseMatrix A(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw ScenarioError(path + ": ragged constraint matrix");
        }
        for (std::size_t j = 0; j < n; ++j) {
            A(i, j) = rows[i][j];
        }
    }
    p.A = std::move(A);
    if (doc.contains("variable_names")) {
        p.variable_names = doc["variable_names"].get<std::vector<std::string>>();
    }
    try {
        p.validate();
    } catch (const Error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return p;
}

}  // namespace

LoadedProblem load_problem(const std::string& path_spec) {
    LoadedProblem out;

    const auto comma = path_spec.find(',');
    if (comma != std::string::npos) {
        Scenario s = load_scenario_csv(path_spec.substr(0, comma), path_spec.substr(comma + 1));
        BuiltModel built = build_vaccine_model(s);
        out.problem = std::move(built.problem);
        out.scenario = std::move(s);
        out.assembly_notes = std::move(built.notes);
        return out;
    }

    json doc = read_json_file(path_spec);
    if (doc.contains("regions")) {
        Scenario s = load_scenario_json(path_spec);
        BuiltModel built = build_vaccine_model(s);
        out.problem = std::move(built.problem);
        out.scenario = std::move(s);
        out.assembly_notes = std::move(built.notes);
        return out;
    }
    if (doc.contains("partition")) {
        out.problem = load_raw_multilevel(doc, path_spec);
        return out;
    }
    throw ScenarioError(path_spec + ": expected either a scenario document (regions/hospitals) or a multilevel "
                        "problem document (partition/objectives/constraints)");
}

}  // namespace mlmolp
