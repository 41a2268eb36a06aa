#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tm5g/kb.hpp"
#include "tm5g/topology.hpp"

namespace tm5g {

// One stage of a multi-stage attack: a technique used for a particular
// tactic against a particular asset.
struct AttackStep {
    std::string technique_id;
    Tactic tactic_in_use = Tactic::InitialAccess;
    std::string target;

    bool operator==(const AttackStep&) const = default;
    // Ordered by technique id, then target, then tactic.
    bool operator<(const AttackStep& other) const {
        if (technique_id != other.technique_id) return technique_id < other.technique_id;
        if (target != other.target) return target < other.target;
        return tactic_in_use < other.tactic_in_use;
    }
};

// What the attacker holds after a sequence of steps. Channels are always a
// subset of the foothold: a relay has to run on something the attacker owns.
struct IntrusionState {
    std::set<std::string> foothold;
    std::set<std::string> knowledge;
    std::set<std::string> channels;
    Phase phase_reached = Phase::Pre;

    bool operator==(const IntrusionState&) const = default;
};

struct AttackPath {
    std::vector<AttackStep> steps;
    IntrusionState final_state;

    bool operator==(const AttackPath&) const = default;
};

struct SearchBounds {
    int max_depth = 8;
    std::size_t max_paths = 10000;
};

// The campaign stage order used by the path model. A path's tactics are
// non-decreasing in this rank; command-and-control sits before discovery
// because a relay is typically staged as soon as the first asset falls.
// Exfiltration and impact share the final rank.
int stage_rank(Tactic t);

/// Applies a step to a state (foothold/knowledge/channel bookkeeping plus
/// the phase watermark). Assumes the step is admissible.
IntrusionState apply_step(const IntrusionState& state, const AttackStep& step);

/// Steps legal from a state in isolation: applicability, locality and
/// reachability, progress, and the objective gates. Path-history rules
/// (stage order, tactic and technique reuse, impact chaining) apply on top
/// of this when a step extends a concrete path.
std::vector<AttackStep> successors(const IntrusionState& state, const KnowledgeBase& kb,
                                   const Topology& topology);

struct StepCheck {
    bool ok = true;
    std::string rule_id;
    std::string message;
};

/// Full admissibility of `step` as the next step of `prior` (with `state`
/// the result of applying `prior`). Returns the first violated rule.
StepCheck check_extension(const KnowledgeBase& kb, const Topology& topology,
                          const std::vector<AttackStep>& prior,
                          const IntrusionState& state, const AttackStep& step);

struct PathEnumeration {
    std::vector<AttackPath> paths;
    bool truncated = false;
};

// Borrowed view of a complete path; valid only during the visitor call.
struct PathView {
    std::span<const AttackStep> steps;
    const IntrusionState& final_state;

    AttackPath to_path() const {
        return {std::vector<AttackStep>(steps.begin(), steps.end()), final_state};
    }
};

// Visitor receives each complete path in enumeration order; return false to
// stop the search early.
using PathVisitor = std::function<bool(const PathView&)>;

/// Depth-first enumeration of every admissible attack path within the
/// bounds, in deterministic order (technique id, then target asset id, then
/// tactic at each branch). If `objective_filter` is set, only the listed
/// techniques may be used for objective-phase steps. Returns true when the
/// search was cut short because one more path existed beyond max_paths.
bool enumerate_paths_visit(const KnowledgeBase& kb, const Topology& topology,
                           const SearchBounds& bounds,
                           const std::optional<std::set<std::string>>& objective_filter,
                           const PathVisitor& visitor);

/// As enumerate_paths_visit, collecting up to max_paths paths. `truncated`
/// reports whether further paths existed beyond the limit.
PathEnumeration enumerate_paths(
    const KnowledgeBase& kb, const Topology& topology, const SearchBounds& bounds,
    const std::optional<std::set<std::string>>& objective_filter = std::nullopt);

// Union of paths as a graph: nodes are distinct steps, edges are observed
// step successions.
struct AttackGraph {
    std::vector<AttackStep> nodes;                        // sorted, unique
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // index pairs, sorted
    std::set<std::size_t> entry_nodes;
    std::set<std::size_t> objective_nodes;
};

AttackGraph build_graph(const std::vector<AttackPath>& paths);

/// Minimal technique sets (up to max_cut_size) whose removal leaves no
/// attack path within the given bounds. Smallest sets first, each order
/// lexicographic. If the topology admits no paths at all, the empty cut is
/// the only minimal answer.
std::vector<std::set<std::string>> technique_cuts(const KnowledgeBase& kb,
                                                  const Topology& topology,
                                                  const SearchBounds& bounds,
                                                  std::size_t max_cut_size);

}  // namespace tm5g
