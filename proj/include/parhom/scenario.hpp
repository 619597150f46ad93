#pragma once

#include "parhom/holonomy.hpp"
#include "parhom/nomizu.hpp"
#include "parhom/rspace.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parhom {

// Ordered JSON keeps report field order stable across runs.
using Json = nlohmann::ordered_json;

struct Scenario {
    std::string id;
    Json model_spec;
    std::vector<Json> jet_specs;
    std::vector<std::string> pipelines;
    Tolerances tolerances;
    std::uint64_t rng_seed = 0;
};

struct ScenarioFile {
    int schema = 1;
    std::vector<Scenario> scenarios;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioFile parse_scenario_file(const Json& doc, const Tolerances& default_tol,
                                 std::uint64_t default_seed);
Json scenario_file_to_json(const ScenarioFile& file);

/// Model serialization: {name, params, dim_g, dim_p, basis (row-major), theta,
/// metric, type_tag, ...}. Catalog models round-trip bit-exactly because they
/// are rebuilt from (name, params, scale).
Json model_to_json(const SymmetricSpaceModel& model);
SymmetricSpaceModel model_from_json(const Json& j, const Tolerances& tol);
/// Scenario-side model spec: catalog {name, params, scale}, product
/// {name: "product", factors: [...]}, or a full inline model object.
SymmetricSpaceModel model_from_spec(const Json& spec, const Tolerances& tol);

Json jet_to_json(const TwoJet& jet);
TwoJet jet_from_spec(const Json& spec, const SymmetricSpaceModel& model, const Tolerances& tol);

Json model_verdict_to_json(const ModelVerdict& v);
Json nomizu_to_json(const NomizuResult& r);
Json holonomy_to_json(const HolonomyReport& r, bool minus_nonzero);
Json flat_report_to_json(const FlatReport& r);
Json rspace_to_json(const RSpaceDatum& d, const Tolerances& tol);

struct RunOutcome {
    Json report;
    bool structural_error = false;
};

/// Evaluate every scenario; pipeline failures become structured error entries
/// rather than aborting the run.
RunOutcome run_scenarios(const ScenarioFile& file, const Tolerances& default_tol,
                         std::uint64_t default_seed);

/// CLI-level run: parse -> evaluate -> write. Exit status: 0 clean (verdicts of
/// "not homogeneous" are successes), 2 parse error, 3 structural or tolerance
/// error.
int run(const std::string& scenario_path, const std::string& output_path,
        const std::string& format, const Tolerances& default_tol, std::uint64_t seed,
        std::ostream& diagnostics);

std::string render_text_report(const Json& report, double wall_seconds);

/// Human-readable narrative of a JSON report: the condition chain per jet with
/// residuals and the failing link when one exists.
std::string explain_report(const Json& report);

/// Table of built-in models: name, params, dims, rank.
std::string catalog_table(const Tolerances& tol);

Json tolerances_to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const Json& j, const Tolerances& base);

}  // namespace parhom
