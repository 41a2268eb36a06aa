#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tm5g/applicability.hpp"
#include "tm5g/attackgraph.hpp"
#include "tm5g/kb.hpp"
#include "tm5g/risk.hpp"

namespace tm5g {

struct LayerEntry {
    std::string technique_id;
    int score = 0;
    std::string comment;
};

// An annotation layer for matrix viewers. The domain tag is fixed; the
// layer format version keeps to the 4.x family the viewers accept.
struct NavigatorLayer {
    std::string name;
    std::string domain = "5gcn-attack";
    std::string layer_version = "4.5";
    std::vector<LayerEntry> techniques;  // sorted by technique id
    int gradient_min = 0;
    int gradient_max = 0;
};

/// Builds a layer scoring each selected technique by its risk weight.
/// Throws std::invalid_argument when the selection names an unknown id.
NavigatorLayer to_navigator_layer(
    const KnowledgeBase& kb, const std::vector<TechniqueWeight>& weights,
    const std::optional<std::set<std::string>>& selection = std::nullopt,
    const std::string& name = "5G core adversarial techniques");

/// Stable JSON rendering: UTF-8, two-space indent, keys ordered.
std::string layer_to_json(const NavigatorLayer& layer);

struct DotGraph {
    std::string text;
};

/// DOT rendering of an attack graph. Entry nodes are boxes, objective nodes
/// double octagons, everything else ellipses; orderings are deterministic.
DotGraph to_dot(const AttackGraph& graph);

// Everything a run of the engine produces, bundled for reporting.
struct Assessment {
    std::string kb_version;
    std::string topology_name;
    LintReport lint;
    std::vector<EntryPoint> entries;
    std::vector<PathScore> ranked_paths;  // already ranked
    bool truncated = false;
    std::size_t paths_found = 0;
    std::vector<std::set<std::string>> cuts;
    std::size_t max_cut_size = 0;
    std::size_t top_paths = 10;  // how many ranked paths to print
};

/// Deterministic plain-text report (LF line endings).
std::string to_report(const Assessment& assessment);

}  // namespace tm5g
