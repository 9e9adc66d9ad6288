#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiskit/expr.hpp"
#include "fiskit/structure.hpp"

namespace fiskit {

struct ScenarioTask {
    std::string kind;
    std::map<std::string, std::string> params;
    int line = 0;

    bool has(const std::string& k) const { return params.count(k) > 0; }
    std::string get(const std::string& k, const std::string& dflt = "") const;
    double get_num(const std::string& k, double dflt) const;
    long long get_int(const std::string& k, long long dflt) const;
};

struct ScenarioRhs {
    int q = 0;
    std::vector<ExprPtr> components; // per increasing omega multi-index
};

/// Parsed scenario: chart, frames and weights as expressions, plus the task
/// list. Loaded from the structured-text format "fiskit/1" or from JSON.
struct Scenario {
    std::string version;
    std::string source;
    std::vector<CoordAxis> axes;
    std::map<std::string, double> params;
    std::vector<std::vector<ExprPtr>> v_frame;
    std::vector<std::vector<ExprPtr>> complement;
    std::optional<std::vector<ExprPtr>> twist;
    std::map<std::string, ExprPtr> weights;
    std::map<std::string, ScenarioRhs> rhs;
    std::optional<NormalForm> normal;
    int bundle_rank = 1;
    std::vector<ScenarioTask> tasks;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& source);
Scenario parse_scenario_json(const std::string& text, const std::string& source);

/// Structural validation (known task kinds, resolvable references, parameter
/// ranges). Throws on violations.
void validate_scenario(const Scenario& s);

/// Realized chart-level objects.
struct ScenarioInstance {
    ChartPtr chart;
    StructurePtr structure;
    StructureForms forms;
    bool forms_valid = false; // false when the structure is not integrable
    TwistForm twist;
    std::map<std::string, ScalarField> weights;
    std::map<std::string, double> params; // scenario params plus builtins
};
ScenarioInstance instantiate(const Scenario& s, int resolution_override = 0);

} // namespace fiskit
