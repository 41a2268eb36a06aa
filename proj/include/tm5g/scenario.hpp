#pragma once

#include <string>
#include <vector>

#include "tm5g/attackgraph.hpp"
#include "tm5g/kb.hpp"
#include "tm5g/topology.hpp"

namespace tm5g {

struct ScenarioStep {
    std::string technique;
    Tactic tactic = Tactic::InitialAccess;
    std::string target;
    std::string note;

    bool operator==(const ScenarioStep&) const = default;
};

// A declarative attack narrative that can be replayed against a knowledge
// base and topology to confirm it is a legal path.
struct ScenarioSpec {
    std::string name;
    std::string description;
    std::vector<ScenarioStep> steps;
    std::string expected_outcome;

    bool operator==(const ScenarioSpec&) const = default;

    std::vector<AttackStep> attack_steps() const;
};

struct StepResult {
    std::size_t index = 0;
    std::string rule_id;
    bool passed = true;
    std::string message;
};

struct ValidationReport {
    std::string scenario_name;
    std::vector<StepResult> steps;
    bool overall = false;
};

/// Parses a scenario file. Only structural problems are errors here;
/// unresolvable references surface during validation.
ScenarioSpec parse_scenario(std::string_view text);

std::string serialize_scenario(const ScenarioSpec& spec);

/// Replays the scenario step by step from the empty state. Each step must
/// be admissible at its position; the final step must reach the objective
/// phase. Unknown ids fail the step rather than throwing.
ValidationReport validate_scenario(const ScenarioSpec& spec, const KnowledgeBase& kb,
                                   const Topology& topology);

}  // namespace tm5g
