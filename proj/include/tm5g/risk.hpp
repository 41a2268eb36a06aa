#pragma once

#include <span>
#include <string>
#include <vector>

#include "tm5g/attackgraph.hpp"
#include "tm5g/kb.hpp"

namespace tm5g {

// A technique usable across more lifecycle stages carries more risk weight.
struct TechniqueWeight {
    std::string technique_id;
    int weight = 1;  // cardinality of the technique's tactic set

    bool operator==(const TechniqueWeight&) const = default;
};

struct PathScore {
    AttackPath path;
    int total = 0;          // sum of distinct technique weights on the path
    std::size_t length = 0;  // step count
};

/// Throws std::invalid_argument for unknown technique ids.
TechniqueWeight technique_weight(const KnowledgeBase& kb, const std::string& technique_id);

/// Weights for every technique, sorted by id.
std::vector<TechniqueWeight> technique_weights(const KnowledgeBase& kb);

PathScore path_score(const KnowledgeBase& kb, const AttackPath& path);

/// Descending by total; ties broken by shorter length, then by the lexical
/// order of the serialized steps. A total order, so ranking is stable.
std::vector<PathScore> rank_paths(std::vector<PathScore> scores);

/// The tie-break serialization: "technique@target[Tactic] -> ...".
std::string path_key(std::span<const AttackStep> steps);
std::string path_key(const AttackPath& path);

}  // namespace tm5g
