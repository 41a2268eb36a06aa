#include "tm5g/attackgraph.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace tm5g {

int stage_rank(Tactic t) {
    switch (t) {
        case Tactic::InitialAccess: return 0;
        case Tactic::Execution: return 1;
        case Tactic::Persistence: return 2;
        case Tactic::DefenceEvasion: return 3;
        case Tactic::CommandAndControl: return 4;
        case Tactic::Discovery: return 5;
        case Tactic::LateralMovement: return 6;
        case Tactic::Collection: return 7;
        case Tactic::Exfiltration:
        case Tactic::Impact: return 8;
    }
    return 8;
}

IntrusionState apply_step(const IntrusionState& state, const AttackStep& step) {
    IntrusionState next = state;
    switch (resolved_effect(step.tactic_in_use)) {
        case Effect::Foothold:
            next.foothold.insert(step.target);
            break;
        case Effect::Knowledge:
            next.knowledge.insert(step.target);
            break;
        case Effect::Channel:
            next.channels.insert(step.target);
            break;
        case Effect::Outcome:
            break;
    }
    Phase p = phase_of(step.tactic_in_use);
    if (static_cast<int>(p) > static_cast<int>(next.phase_reached))
        next.phase_reached = p;
    return next;
}

namespace {

bool reachable_adjacent(const Topology& topology, const IntrusionState& state,
                        const std::string& target) {
    if (state.foothold.count(target)) return true;
    for (const auto& held : state.foothold) {
        if (topology.adjacency(held).count(target)) return true;
    }
    return false;
}

}  // namespace

std::vector<AttackStep> successors(const IntrusionState& state, const KnowledgeBase& kb,
                                   const Topology& topology) {
    std::vector<AttackStep> out;
    const bool empty_state = state.foothold.empty();
    for (const auto& tech : kb.techniques()) {
        for (const auto& asset : topology.assets()) {
            if (!tech.components.count(asset.kind)) continue;
            for (Tactic tac : tech.tactics) {
                if (empty_state && tac != Tactic::InitialAccess) continue;
                Phase p = phase_of(tac);
                if (static_cast<int>(p) < static_cast<int>(state.phase_reached)) continue;
                switch (tech.locality) {
                    case Locality::Remote:
                        if (p != Phase::Pre) goto next_tactic;
                        if (!std::includes(asset.exposures.begin(), asset.exposures.end(),
                                           tech.required_exposure.begin(),
                                           tech.required_exposure.end()))
                            goto next_tactic;
                        break;
                    case Locality::Local:
                        if (!state.foothold.count(asset.id)) goto next_tactic;
                        break;
                    case Locality::Adjacent:
                        if (!reachable_adjacent(topology, state, asset.id)) goto next_tactic;
                        break;
                }
                switch (resolved_effect(tac)) {
                    case Effect::Foothold:
                        if (state.foothold.count(asset.id)) goto next_tactic;
                        break;
                    case Effect::Knowledge:
                        if (state.knowledge.count(asset.id)) goto next_tactic;
                        break;
                    case Effect::Channel:
                        // A relay must sit on a held asset.
                        if (!state.foothold.count(asset.id)) goto next_tactic;
                        if (state.channels.count(asset.id)) goto next_tactic;
                        break;
                    case Effect::Outcome:
                        if (tac == Tactic::Exfiltration && state.channels.empty())
                            goto next_tactic;
                        break;
                }
                out.push_back({tech.id, tac, asset.id});
            next_tactic:;
            }
        }
    }
    return out;
}

StepCheck check_extension(const KnowledgeBase& kb, const Topology& topology,
                          const std::vector<AttackStep>& prior,
                          const IntrusionState& state, const AttackStep& step) {
    auto fail = [](std::string rule, std::string message) {
        return StepCheck{false, std::move(rule), std::move(message)};
    };

    const Technique* tech = kb.find(step.technique_id);
    if (tech == nullptr)
        return fail("technique-exists", "unknown technique \"" + step.technique_id + "\"");
    const Asset* asset = topology.find(step.target);
    if (asset == nullptr)
        return fail("asset-exists", "unknown asset \"" + step.target + "\"");
    if (!tech->tactics.count(step.tactic_in_use))
        return fail("tactic-of-technique",
                    "technique does not cover tactic " +
                        std::string(to_string(step.tactic_in_use)));
    if (!tech->components.count(asset->kind))
        return fail("component-applicability",
                    "technique does not apply to " + std::string(to_string(asset->kind)) +
                        " components");

    if (prior.empty()) {
        if (step.tactic_in_use != Tactic::InitialAccess ||
            !std::includes(asset->exposures.begin(), asset->exposures.end(),
                           tech->required_exposure.begin(), tech->required_exposure.end()))
            return fail("entry-initial-access",
                        "path must begin with InitialAccess at a viable entry point");
    } else {
        if (stage_rank(step.tactic_in_use) < stage_rank(prior.back().tactic_in_use))
            return fail("stage-order",
                        std::string(to_string(step.tactic_in_use)) +
                            " cannot follow " +
                            std::string(to_string(prior.back().tactic_in_use)) +
                            " in the campaign stage order");
        for (const auto& p : prior) {
            if (p.technique_id == step.technique_id)
                return fail("technique-reuse", "technique already used on this path");
            if (step.tactic_in_use != Tactic::Impact &&
                p.tactic_in_use == step.tactic_in_use)
                return fail("tactic-reuse",
                            "tactic " + std::string(to_string(step.tactic_in_use)) +
                                " already used on this path");
        }
    }

    switch (tech->locality) {
        case Locality::Remote:
            if (phase_of(step.tactic_in_use) != Phase::Pre)
                return fail("remote-pre-phase",
                            "remote techniques are limited to pre-intrusion tactics");
            if (!std::includes(asset->exposures.begin(), asset->exposures.end(),
                               tech->required_exposure.begin(),
                               tech->required_exposure.end()))
                return fail("remote-exposure", "target lacks the required exposure");
            break;
        case Locality::Local:
            if (!state.foothold.count(step.target))
                return fail("local-foothold", "target is not part of the foothold");
            break;
        case Locality::Adjacent:
            if (!reachable_adjacent(topology, state, step.target))
                return fail("adjacent-reachability",
                            "target is not reachable from the current foothold");
            break;
    }

    Effect effect = resolved_effect(step.tactic_in_use);
    if (effect == Effect::Outcome) {
        if (step.tactic_in_use == Tactic::Exfiltration && state.channels.empty())
            return fail("exfiltration-channel",
                        "exfiltration requires an established command channel");
        if (!prior.empty() &&
            phase_of(prior.back().tactic_in_use) == Phase::Objective) {
            const Technique* prev = kb.find(prior.back().technique_id);
            bool enabled = prev != nullptr &&
                           std::find(prev->enables.begin(), prev->enables.end(),
                                     step.technique_id) != prev->enables.end();
            if (!enabled)
                return fail("objective-chain",
                            "follow-on objective step is not enabled by \"" +
                                prior.back().technique_id + "\"");
        }
    } else {
        switch (effect) {
            case Effect::Channel:
                if (!state.foothold.count(step.target))
                    return fail("channel-foothold",
                                "a command channel must sit on a held asset");
                if (state.channels.count(step.target))
                    return fail("no-progress", "step does not advance the intrusion");
                break;
            case Effect::Foothold:
                if (state.foothold.count(step.target))
                    return fail("no-progress", "step does not advance the intrusion");
                break;
            case Effect::Knowledge:
                if (state.knowledge.count(step.target))
                    return fail("no-progress", "step does not advance the intrusion");
                break;
            default:
                break;
        }
    }
    return {};
}

namespace {

// Index-compiled view of the knowledge base and topology for the search.
struct Compiled {
    struct Tech {
        const Technique* tech = nullptr;
        std::vector<Tactic> tactics;              // enum order
        std::vector<std::uint32_t> targets;       // asset indices, id order
        std::vector<std::uint8_t> exposure_ok;    // per asset, Remote viability
        std::vector<std::uint8_t> enables;        // per tech index
        bool objective_allowed = true;
        int max_rank = 0;                         // highest stage rank offered
    };

    std::vector<const Asset*> assets;                     // id order
    std::vector<std::vector<std::uint32_t>> neighbors;    // per asset
    std::vector<Tech> techs;                              // id order

    Compiled(const KnowledgeBase& kb, const Topology& topology,
             const std::optional<std::set<std::string>>& objective_filter) {
        std::map<std::string, std::uint32_t> asset_index;
        for (const auto& a : topology.assets()) {
            asset_index.emplace(a.id, static_cast<std::uint32_t>(assets.size()));
            assets.push_back(&a);
        }
        neighbors.resize(assets.size());
        for (std::size_t i = 0; i < assets.size(); ++i) {
            for (const auto& n : topology.adjacency(assets[i]->id))
                neighbors[i].push_back(asset_index.at(n));
        }
        std::map<std::string, std::uint32_t> tech_index;
        for (const auto& t : kb.techniques()) {
            tech_index.emplace(t.id, static_cast<std::uint32_t>(techs.size()));
            Tech ct;
            ct.tech = &t;
            ct.tactics.assign(t.tactics.begin(), t.tactics.end());
            for (Tactic tac : ct.tactics) ct.max_rank = std::max(ct.max_rank, stage_rank(tac));
            for (std::uint32_t ai = 0; ai < assets.size(); ++ai) {
                if (t.components.count(assets[ai]->kind)) ct.targets.push_back(ai);
            }
            ct.exposure_ok.resize(assets.size(), 0);
            for (std::uint32_t ai = 0; ai < assets.size(); ++ai) {
                ct.exposure_ok[ai] = std::includes(
                    assets[ai]->exposures.begin(), assets[ai]->exposures.end(),
                    t.required_exposure.begin(), t.required_exposure.end());
            }
            if (objective_filter) ct.objective_allowed = objective_filter->count(t.id) > 0;
            techs.push_back(std::move(ct));
        }
        for (auto& ct : techs) {
            ct.enables.resize(techs.size(), 0);
            for (const auto& e : ct.tech->enables) {
                auto it = tech_index.find(e);
                if (it != tech_index.end()) ct.enables[it->second] = 1;
            }
        }
    }
};

struct Search {
    const Compiled& model;
    SearchBounds bounds;
    const PathVisitor& visitor;

    std::vector<std::uint8_t> foothold, knowledge, channel;
    std::vector<std::uint16_t> reach;  // foothold neighbour counts
    std::size_t channel_count = 0;
    std::array<std::uint8_t, kTacticCount> tactic_used{};
    std::vector<std::uint8_t> tech_used;

    // The live path and intrusion state, updated in place as the search
    // moves; step_pool slots are reused so emission allocates nothing.
    std::vector<AttackStep> step_pool;
    std::size_t depth = 0;
    IntrusionState live;
    std::size_t emitted = 0;
    bool truncated = false;
    bool stop = false;

    Search(const Compiled& m, const SearchBounds& b, const PathVisitor& v)
        : model(m), bounds(b), visitor(v) {
        foothold.assign(m.assets.size(), 0);
        knowledge.assign(m.assets.size(), 0);
        channel.assign(m.assets.size(), 0);
        reach.assign(m.assets.size(), 0);
        tech_used.assign(m.techs.size(), 0);
        step_pool.resize(static_cast<std::size_t>(b.max_depth));
    }

    void add_foothold(std::uint32_t ai) {
        foothold[ai] = 1;
        for (std::uint32_t n : model.neighbors[ai]) ++reach[n];
    }
    void remove_foothold(std::uint32_t ai) {
        foothold[ai] = 0;
        for (std::uint32_t n : model.neighbors[ai]) --reach[n];
    }

    void emit() {
        if (emitted == bounds.max_paths) {
            truncated = true;
            stop = true;
            return;
        }
        ++emitted;
        PathView view{std::span<const AttackStep>(step_pool.data(), depth), live};
        if (!visitor(view)) stop = true;
    }

    // last_rank: stage rank of the previous step; prev_objective: technique
    // index of the previous step when it was objective-phase, else -1.
    void dfs(int last_rank, int prev_objective) {
        if (stop || depth >= static_cast<std::size_t>(bounds.max_depth)) return;
        const bool first = depth == 0;
        for (std::uint32_t ti = 0; ti < model.techs.size(); ++ti) {
            if (tech_used[ti]) continue;
            const auto& ct = model.techs[ti];
            if (ct.max_rank < last_rank) continue;
            for (std::uint32_t ai : ct.targets) {
                for (Tactic tac : ct.tactics) {
                    if (first && tac != Tactic::InitialAccess) continue;
                    const int rank = stage_rank(tac);
                    if (rank < last_rank) continue;
                    if (tac != Tactic::Impact && tactic_used[static_cast<int>(tac)])
                        continue;
                    const Phase p = phase_of(tac);
                    switch (ct.tech->locality) {
                        case Locality::Remote:
                            if (p != Phase::Pre || !ct.exposure_ok[ai]) goto skip;
                            break;
                        case Locality::Local:
                            if (!foothold[ai]) goto skip;
                            break;
                        case Locality::Adjacent:
                            if (!foothold[ai] && reach[ai] == 0) goto skip;
                            break;
                    }
                    {
                        const Effect effect = resolved_effect(tac);
                        if (effect == Effect::Outcome) {
                            if (!ct.objective_allowed) goto skip;
                            if (tac == Tactic::Exfiltration && channel_count == 0)
                                goto skip;
                            if (prev_objective >= 0 &&
                                !model.techs[prev_objective].enables[ti])
                                goto skip;
                        } else {
                            switch (effect) {
                                case Effect::Foothold:
                                    if (foothold[ai]) goto skip;
                                    break;
                                case Effect::Knowledge:
                                    if (knowledge[ai]) goto skip;
                                    break;
                                case Effect::Channel:
                                    if (!foothold[ai] || channel[ai]) goto skip;
                                    break;
                                default:
                                    break;
                            }
                        }

                        AttackStep& slot = step_pool[depth];
                        slot.technique_id = ct.tech->id;
                        slot.tactic_in_use = tac;
                        slot.target = model.assets[ai]->id;
                        ++depth;
                        tech_used[ti] = 1;
                        const bool tactic_was_used = tactic_used[static_cast<int>(tac)];
                        tactic_used[static_cast<int>(tac)] = 1;
                        const Phase phase_before = live.phase_reached;
                        if (static_cast<int>(p) > static_cast<int>(live.phase_reached))
                            live.phase_reached = p;
                        switch (effect) {
                            case Effect::Foothold:
                                add_foothold(ai);
                                live.foothold.insert(slot.target);
                                break;
                            case Effect::Knowledge:
                                knowledge[ai] = 1;
                                live.knowledge.insert(slot.target);
                                break;
                            case Effect::Channel:
                                channel[ai] = 1;
                                ++channel_count;
                                live.channels.insert(slot.target);
                                break;
                            case Effect::Outcome:
                                break;
                        }

                        if (p == Phase::Objective) emit();
                        if (!stop)
                            dfs(rank, p == Phase::Objective ? static_cast<int>(ti) : -1);

                        switch (effect) {
                            case Effect::Foothold:
                                remove_foothold(ai);
                                live.foothold.erase(slot.target);
                                break;
                            case Effect::Knowledge:
                                knowledge[ai] = 0;
                                live.knowledge.erase(slot.target);
                                break;
                            case Effect::Channel:
                                channel[ai] = 0;
                                --channel_count;
                                live.channels.erase(slot.target);
                                break;
                            case Effect::Outcome:
                                break;
                        }
                        live.phase_reached = phase_before;
                        tactic_used[static_cast<int>(tac)] = tactic_was_used;
                        tech_used[ti] = 0;
                        --depth;
                        if (stop) return;
                    }
                skip:;
                }
            }
        }
    }
};

}  // namespace

bool enumerate_paths_visit(const KnowledgeBase& kb, const Topology& topology,
                           const SearchBounds& bounds,
                           const std::optional<std::set<std::string>>& objective_filter,
                           const PathVisitor& visitor) {
    if (bounds.max_depth < 1) throw std::invalid_argument("max_depth must be positive");
    if (bounds.max_paths < 1) throw std::invalid_argument("max_paths must be positive");
    Compiled model(kb, topology, objective_filter);
    Search search(model, bounds, visitor);
    search.dfs(0, -1);
    return search.truncated;
}

PathEnumeration enumerate_paths(
    const KnowledgeBase& kb, const Topology& topology, const SearchBounds& bounds,
    const std::optional<std::set<std::string>>& objective_filter) {
    PathEnumeration result;
    result.truncated = enumerate_paths_visit(kb, topology, bounds, objective_filter,
                                             [&result](const PathView& view) {
                                                 result.paths.push_back(view.to_path());
                                                 return true;
                                             });
    return result;
}

AttackGraph build_graph(const std::vector<AttackPath>& paths) {
    AttackGraph graph;
    for (const auto& p : paths) {
        for (const auto& s : p.steps) graph.nodes.push_back(s);
    }
    std::sort(graph.nodes.begin(), graph.nodes.end());
    graph.nodes.erase(std::unique(graph.nodes.begin(), graph.nodes.end()),
                      graph.nodes.end());
    auto index_of = [&](const AttackStep& s) {
        return static_cast<std::size_t>(
            std::lower_bound(graph.nodes.begin(), graph.nodes.end(), s) -
            graph.nodes.begin());
    };
    for (const auto& p : paths) {
        if (p.steps.empty()) continue;
        graph.entry_nodes.insert(index_of(p.steps.front()));
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            std::size_t node = index_of(p.steps[i]);
            if (phase_of(p.steps[i].tactic_in_use) == Phase::Objective)
                graph.objective_nodes.insert(node);
            if (i + 1 < p.steps.size())
                graph.edges.emplace_back(node, index_of(p.steps[i + 1]));
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                      graph.edges.end());
    return graph;
}

std::vector<std::set<std::string>> technique_cuts(const KnowledgeBase& kb,
                                                  const Topology& topology,
                                                  const SearchBounds& bounds,
                                                  std::size_t max_cut_size) {
    if (max_cut_size < 1) throw std::invalid_argument("max_cut_size must be positive");

    std::vector<std::string> ids;
    for (const auto& t : kb.techniques()) ids.push_back(t.id);

    auto has_path = [&](const std::set<std::string>& removed) {
        bool found = false;
        enumerate_paths_visit(kb.without(removed), topology, bounds, std::nullopt,
                              [&found](const PathView&) {
                                  found = true;
                                  return false;
                              });
        return found;
    };

    std::vector<std::set<std::string>> cuts;
    auto is_superset_of_cut = [&](const std::set<std::string>& candidate) {
        for (const auto& cut : cuts) {
            if (std::includes(candidate.begin(), candidate.end(), cut.begin(), cut.end()))
                return true;
        }
        return false;
    };

    // Size 0 first: if nothing is reachable anyway, the empty cut is the
    // unique minimal answer.
    if (!has_path({})) return {{}};

    std::vector<std::size_t> combo;
    for (std::size_t size = 1; size <= std::min(max_cut_size, ids.size()); ++size) {
        combo.assign(size, 0);
        for (std::size_t i = 0; i < size; ++i) combo[i] = i;
        while (true) {
            std::set<std::string> candidate;
            for (std::size_t i : combo) candidate.insert(ids[i]);
            if (!is_superset_of_cut(candidate) && !has_path(candidate))
                cuts.push_back(candidate);
            // next combination
            std::size_t k = size;
            while (k > 0 && combo[k - 1] == ids.size() - size + k - 1) --k;
            if (k == 0) break;
            ++combo[k - 1];
            for (std::size_t i = k; i < size; ++i) combo[i] = combo[i - 1] + 1;
        }
    }
    return cuts;
}

}  // namespace tm5g
