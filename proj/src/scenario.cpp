#include "tm5g/scenario.hpp"

#include <json.hpp>

namespace tm5g {

using nlohmann::json;

std::vector<AttackStep> ScenarioSpec::attack_steps() const {
    std::vector<AttackStep> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back({s.technique, s.tactic, s.target});
    return out;
}

ScenarioSpec parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(ParseError::Kind::Syntax,
                         std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError(ParseError::Kind::Syntax, "top-level value must be an object");

    auto str_field = [&doc](const char* key, bool required) -> std::string {
        if (!doc.contains(key)) {
            if (required)
                throw ParseError(ParseError::Kind::Syntax,
                                 std::string("scenario: missing field \"") + key + "\"");
            return {};
        }
        if (!doc[key].is_string())
            throw ParseError(ParseError::Kind::Syntax,
                             std::string("scenario: field \"") + key +
                                 "\" must be a string");
        return doc[key].get<std::string>();
    };

    ScenarioSpec spec;
    spec.name = str_field("name", true);
    spec.description = str_field("description", false);
    spec.expected_outcome = str_field("expected_outcome", false);

    if (!doc.contains("steps") || !doc["steps"].is_array())
        throw ParseError(ParseError::Kind::Syntax, "scenario: missing \"steps\" array");
    for (const auto& node : doc["steps"]) {
        if (!node.is_object())
            throw ParseError(ParseError::Kind::Syntax, "scenario steps must be objects");
        ScenarioStep step;
        for (const char* key : {"technique", "tactic", "target"}) {
            if (!node.contains(key) || !node[key].is_string())
                throw ParseError(ParseError::Kind::Syntax,
                                 std::string("scenario step: missing string field \"") +
                                     key + "\"");
        }
        step.technique = node["technique"].get<std::string>();
        auto tactic = tactic_from_string(node["tactic"].get<std::string>());
        if (!tactic)
            throw ParseError(ParseError::Kind::Syntax,
                             "scenario step: unknown tactic \"" +
                                 node["tactic"].get<std::string>() + "\"");
        step.tactic = *tactic;
        step.target = node["target"].get<std::string>();
        if (node.contains("note")) {
            if (!node["note"].is_string())
                throw ParseError(ParseError::Kind::Syntax,
                                 "scenario step: note must be a string");
            step.note = node["note"].get<std::string>();
        }
        spec.steps.push_back(std::move(step));
    }
    if (spec.steps.empty())
        throw ParseError(ParseError::Kind::Syntax, "scenario has no steps");
    return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    if (!spec.description.empty()) doc["description"] = spec.description;
    json steps = json::array();
    for (const auto& s : spec.steps) {
        json node;
        node["technique"] = s.technique;
        node["tactic"] = std::string(to_string(s.tactic));
        node["target"] = s.target;
        if (!s.note.empty()) node["note"] = s.note;
        steps.push_back(node);
    }
    doc["steps"] = steps;
    if (!spec.expected_outcome.empty()) doc["expected_outcome"] = spec.expected_outcome;
    return doc.dump(2) + "\n";
}

ValidationReport validate_scenario(const ScenarioSpec& spec, const KnowledgeBase& kb,
                                   const Topology& topology) {
    ValidationReport report;
    report.scenario_name = spec.name;
    report.overall = !spec.steps.empty();

    std::vector<AttackStep> replayed;
    IntrusionState state;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        AttackStep step{spec.steps[i].technique, spec.steps[i].tactic,
                        spec.steps[i].target};
        StepCheck check = check_extension(kb, topology, replayed, state, step);
        StepResult result;
        result.index = i;
        result.passed = check.ok;
        result.rule_id = check.ok ? "admissible" : check.rule_id;
        result.message = check.ok ? "step is admissible" : check.message;
        report.steps.push_back(result);
        if (!check.ok) {
            report.overall = false;
            break;  // later steps depend on a state we no longer trust
        }
        state = apply_step(state, step);
        replayed.push_back(std::move(step));
    }

    if (report.overall && phase_of(spec.steps.back().tactic) != Phase::Objective) {
        report.steps.push_back({spec.steps.size() - 1, "objective-final", false,
                                "path must end with an objective-phase step"});
        report.overall = false;
    }
    return report;
}

}  // namespace tm5g
