#include "tm5g/risk.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tm5g {

TechniqueWeight technique_weight(const KnowledgeBase& kb,
                                 const std::string& technique_id) {
    const Technique* t = kb.find(technique_id);
    if (t == nullptr)
        throw std::invalid_argument("unknown technique id \"" + technique_id + "\"");
    return {technique_id, static_cast<int>(t->tactics.size())};
}

std::vector<TechniqueWeight> technique_weights(const KnowledgeBase& kb) {
    std::vector<TechniqueWeight> out;
    for (const auto& t : kb.techniques())
        out.push_back({t.id, static_cast<int>(t.tactics.size())});
    return out;
}

PathScore path_score(const KnowledgeBase& kb, const AttackPath& path) {
    PathScore score;
    score.path = path;
    score.length = path.steps.size();
    std::set<std::string> seen;
    for (const auto& step : path.steps) {
        if (!seen.insert(step.technique_id).second) continue;
        score.total += technique_weight(kb, step.technique_id).weight;
    }
    return score;
}

std::string path_key(std::span<const AttackStep> steps) {
    std::string out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i > 0) out += " -> ";
        const auto& s = steps[i];
        out += s.technique_id;
        out += '@';
        out += s.target;
        out += '[';
        out += to_string(s.tactic_in_use);
        out += ']';
    }
    return out;
}

std::string path_key(const AttackPath& path) { return path_key(path.steps); }

std::vector<PathScore> rank_paths(std::vector<PathScore> scores) {
    std::stable_sort(scores.begin(), scores.end(),
                     [](const PathScore& a, const PathScore& b) {
                         if (a.total != b.total) return a.total > b.total;
                         if (a.length != b.length) return a.length < b.length;
                         return path_key(a.path) < path_key(b.path);
                     });
    return scores;
}

}  // namespace tm5g
