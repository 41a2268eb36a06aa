#include "tm5g/kb.hpp"

#include <algorithm>
#include <array>
#include <map>

#include <json.hpp>

namespace tm5g {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kTacticCount> kTacticNames = {
    "InitialAccess",  "Execution",  "Persistence",       "DefenceEvasion",
    "Discovery",      "LateralMovement", "Collection",   "CommandAndControl",
    "Exfiltration",   "Impact",
};

constexpr std::array<std::string_view, kComponentKindCount> kComponentNames = {
    "Physical", "Virtual", "NF", "SDN", "MANO", "NetworkSlice",
};

constexpr std::array<std::string_view, 4> kExposureNames = {
    "PublicFacing", "ExternalRemoteService", "RoamingInterconnect",
    "ThirdPartyApplication",
};

constexpr std::array<std::string_view, 4> kEffectNames = {
    "Foothold", "Knowledge", "Channel", "Outcome",
};

constexpr std::array<std::string_view, 3> kLocalityNames = {"Remote", "Local",
                                                            "Adjacent"};

constexpr std::array<std::string_view, 3> kProvenanceNames = {
    "New5G", "ExistingAttack", "SubTechnique"};

template <typename E, std::size_t N>
std::optional<E> from_name(const std::array<std::string_view, N>& names,
                           std::string_view s) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<E>(i);
    }
    return std::nullopt;
}

[[noreturn]] void fail_semantic(const std::string& message) {
    throw ParseError(ParseError::Kind::Semantic, message);
}

[[noreturn]] void fail_syntax(const std::string& message) {
    throw ParseError(ParseError::Kind::Syntax, message);
}

json require_object(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_syntax(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail_syntax("top-level value must be an object");
    return doc;
}

std::string require_string(const json& node, const char* key,
                           const std::string& context) {
    if (!node.contains(key) || !node[key].is_string())
        fail_syntax(context + ": missing string field \"" + key + "\"");
    return node[key].get<std::string>();
}

}  // namespace

Phase phase_of(Tactic tactic) {
    switch (tactic) {
        case Tactic::InitialAccess:
        case Tactic::Execution:
            return Phase::Pre;
        case Tactic::Exfiltration:
        case Tactic::Impact:
            return Phase::Objective;
        default:
            return Phase::Post;
    }
}

Effect resolved_effect(Tactic tactic_in_use) {
    if (phase_of(tactic_in_use) == Phase::Objective) return Effect::Outcome;
    switch (tactic_in_use) {
        case Tactic::CommandAndControl:
            return Effect::Channel;
        case Tactic::Discovery:
        case Tactic::Collection:
            return Effect::Knowledge;
        default:
            return Effect::Foothold;
    }
}

std::string_view to_string(Tactic t) { return kTacticNames[static_cast<int>(t)]; }
std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Pre: return "Pre";
        case Phase::Post: return "Post";
        default: return "Objective";
    }
}
std::string_view to_string(ComponentKind k) {
    return kComponentNames[static_cast<int>(k)];
}
std::string_view to_string(Exposure e) { return kExposureNames[static_cast<int>(e)]; }
std::string_view to_string(Effect e) { return kEffectNames[static_cast<int>(e)]; }
std::string_view to_string(Locality l) { return kLocalityNames[static_cast<int>(l)]; }
std::string_view to_string(Provenance::Kind k) {
    return kProvenanceNames[static_cast<int>(k)];
}

std::optional<Tactic> tactic_from_string(std::string_view s) {
    return from_name<Tactic>(kTacticNames, s);
}
std::optional<ComponentKind> component_from_string(std::string_view s) {
    return from_name<ComponentKind>(kComponentNames, s);
}
std::optional<Exposure> exposure_from_string(std::string_view s) {
    return from_name<Exposure>(kExposureNames, s);
}
std::optional<Effect> effect_from_string(std::string_view s) {
    return from_name<Effect>(kEffectNames, s);
}
std::optional<Locality> locality_from_string(std::string_view s) {
    return from_name<Locality>(kLocalityNames, s);
}
std::optional<Provenance::Kind> provenance_kind_from_string(std::string_view s) {
    return from_name<Provenance::Kind>(kProvenanceNames, s);
}

std::vector<Tactic> all_tactics() {
    std::vector<Tactic> out;
    for (std::size_t i = 0; i < kTacticCount; ++i) out.push_back(static_cast<Tactic>(i));
    return out;
}

std::vector<ComponentKind> all_component_kinds() {
    std::vector<ComponentKind> out;
    for (std::size_t i = 0; i < kComponentKindCount; ++i)
        out.push_back(static_cast<ComponentKind>(i));
    return out;
}

KnowledgeBase::KnowledgeBase(std::string version, std::vector<Technique> techniques)
    : version_(std::move(version)), techniques_(std::move(techniques)) {
    std::sort(techniques_.begin(), techniques_.end(),
              [](const Technique& a, const Technique& b) { return a.id < b.id; });
}

const Technique* KnowledgeBase::find(std::string_view id) const {
    auto it = std::lower_bound(
        techniques_.begin(), techniques_.end(), id,
        [](const Technique& t, std::string_view key) { return t.id < key; });
    if (it == techniques_.end() || it->id != id) return nullptr;
    return &*it;
}

KnowledgeBase KnowledgeBase::without(const std::set<std::string>& removed_ids) const {
    std::vector<Technique> kept;
    kept.reserve(techniques_.size());
    for (const auto& t : techniques_) {
        if (!removed_ids.count(t.id)) kept.push_back(t);
    }
    return KnowledgeBase(version_, std::move(kept));
}

namespace {

// Structural and domain validation shared by parse. Rules that refer to a
// single technique are enforced here; cross-technique rules afterwards.
Technique parse_technique(const json& node) {
    if (!node.is_object()) fail_syntax("technique entries must be objects");
    Technique t;
    t.id = require_string(node, "id", "technique");
    const std::string ctx = "technique \"" + t.id + "\"";
    t.name = require_string(node, "name", ctx);

    if (!node.contains("tactics") || !node["tactics"].is_array())
        fail_syntax(ctx + ": missing \"tactics\" array");
    for (const auto& v : node["tactics"]) {
        if (!v.is_string()) fail_syntax(ctx + ": tactics must be strings");
        auto tac = tactic_from_string(v.get<std::string>());
        if (!tac) fail_semantic(ctx + ": unknown tactic \"" + v.get<std::string>() + "\"");
        t.tactics.insert(*tac);
    }
    if (t.tactics.empty()) fail_semantic(ctx + ": empty tactic set");

    if (!node.contains("components") || !node["components"].is_array())
        fail_syntax(ctx + ": missing \"components\" array");
    for (const auto& v : node["components"]) {
        if (!v.is_string()) fail_syntax(ctx + ": components must be strings");
        auto k = component_from_string(v.get<std::string>());
        if (!k)
            fail_semantic(ctx + ": unknown component \"" + v.get<std::string>() + "\"");
        t.components.insert(*k);
    }
    if (t.components.empty()) fail_semantic(ctx + ": empty component set");

    if (!node.contains("provenance") || !node["provenance"].is_object())
        fail_syntax(ctx + ": missing \"provenance\" object");
    const auto& prov = node["provenance"];
    auto pk = provenance_kind_from_string(require_string(prov, "kind", ctx));
    if (!pk) fail_semantic(ctx + ": unknown provenance kind");
    t.provenance.kind = *pk;
    if (t.provenance.kind == Provenance::Kind::SubTechnique) {
        t.provenance.parent = require_string(prov, "parent", ctx);
    } else if (prov.contains("parent")) {
        fail_semantic(ctx + ": parent is only valid for sub-techniques");
    }

    auto effect = effect_from_string(require_string(node, "effect", ctx));
    if (!effect) fail_semantic(ctx + ": unknown effect");
    t.effect = *effect;

    auto locality = locality_from_string(require_string(node, "locality", ctx));
    if (!locality) fail_semantic(ctx + ": unknown locality");
    t.locality = *locality;

    if (node.contains("required_exposure")) {
        if (!node["required_exposure"].is_array())
            fail_syntax(ctx + ": required_exposure must be an array");
        for (const auto& v : node["required_exposure"]) {
            if (!v.is_string()) fail_syntax(ctx + ": exposures must be strings");
            auto e = exposure_from_string(v.get<std::string>());
            if (!e)
                fail_semantic(ctx + ": unknown exposure \"" + v.get<std::string>() + "\"");
            t.required_exposure.insert(*e);
        }
    }

    if (node.contains("enables")) {
        if (!node["enables"].is_array())
            fail_syntax(ctx + ": enables must be an array");
        for (const auto& v : node["enables"]) {
            if (!v.is_string()) fail_syntax(ctx + ": enables entries must be strings");
            t.enables.push_back(v.get<std::string>());
        }
        std::sort(t.enables.begin(), t.enables.end());
        t.enables.erase(std::unique(t.enables.begin(), t.enables.end()),
                        t.enables.end());
    }

    if (node.contains("notes")) {
        if (!node["notes"].is_string()) fail_syntax(ctx + ": notes must be a string");
        t.notes = node["notes"].get<std::string>();
    }

    // Per-technique rules.
    for (Tactic tac : t.tactics) {
        if (phase_of(tac) == Phase::Objective && t.effect != Effect::Outcome)
            fail_semantic(ctx + ": objective-phase techniques must have effect Outcome");
    }
    if (t.tactics.count(Tactic::InitialAccess)) {
        if (t.locality != Locality::Remote)
            fail_semantic(ctx + ": initial-access techniques must be Remote");
        if (t.required_exposure.empty())
            fail_semantic(ctx + ": initial-access techniques need a required exposure");
    }
    return t;
}

}  // namespace

KnowledgeBase parse_knowledge_base(std::string_view text) {
    json doc = require_object(text);
    std::string version = require_string(doc, "version", "knowledge base");
    if (!doc.contains("techniques") || !doc["techniques"].is_array())
        fail_syntax("knowledge base: missing \"techniques\" array");

    std::vector<Technique> techniques;
    for (const auto& node : doc["techniques"]) {
        techniques.push_back(parse_technique(node));
    }

    // Cross-technique rules.
    std::map<std::string, const Technique*> by_id;
    for (const auto& t : techniques) {
        if (!by_id.emplace(t.id, &t).second)
            fail_semantic("duplicate technique id \"" + t.id + "\"");
    }
    std::set<std::pair<std::string, Provenance::Kind>> name_prov;
    for (const auto& t : techniques) {
        if (!name_prov.emplace(t.name, t.provenance.kind).second)
            fail_semantic("techniques share name and provenance: \"" + t.name + "\"");
        if (t.provenance.kind == Provenance::Kind::SubTechnique) {
            auto parent = by_id.find(t.provenance.parent);
            if (parent == by_id.end())
                fail_semantic("technique \"" + t.id + "\": unknown parent \"" +
                              t.provenance.parent + "\"");
            if (parent->second->id == t.id)
                fail_semantic("technique \"" + t.id + "\" cannot be its own parent");
        }
        for (const auto& e : t.enables) {
            auto target = by_id.find(e);
            if (target == by_id.end())
                fail_semantic("technique \"" + t.id + "\": enables unknown technique \"" +
                              e + "\"");
            if (!t.tactics.count(Tactic::Impact) ||
                !target->second->tactics.count(Tactic::Impact))
                fail_semantic("technique \"" + t.id +
                              "\": enables chains are only valid between impact techniques");
        }
    }
    return KnowledgeBase(std::move(version), std::move(techniques));
}

std::string serialize_knowledge_base(const KnowledgeBase& kb) {
    json doc;
    doc["version"] = kb.version();
    json techniques = json::array();
    for (const auto& t : kb.techniques()) {
        json node;
        node["id"] = t.id;
        node["name"] = t.name;
        json tactics = json::array();
        for (Tactic tac : t.tactics) tactics.push_back(std::string(to_string(tac)));
        node["tactics"] = tactics;
        json components = json::array();
        for (ComponentKind k : t.components)
            components.push_back(std::string(to_string(k)));
        node["components"] = components;
        json prov;
        prov["kind"] = std::string(to_string(t.provenance.kind));
        if (t.provenance.kind == Provenance::Kind::SubTechnique)
            prov["parent"] = t.provenance.parent;
        node["provenance"] = prov;
        node["effect"] = std::string(to_string(t.effect));
        node["locality"] = std::string(to_string(t.locality));
        if (!t.required_exposure.empty()) {
            json exposure = json::array();
            for (Exposure e : t.required_exposure)
                exposure.push_back(std::string(to_string(e)));
            node["required_exposure"] = exposure;
        }
        if (!t.enables.empty()) node["enables"] = t.enables;
        if (!t.notes.empty()) node["notes"] = t.notes;
        techniques.push_back(node);
    }
    doc["techniques"] = techniques;
    return doc.dump(2) + "\n";
}

bool LintReport::has_errors() const {
    return std::any_of(findings.begin(), findings.end(), [](const LintFinding& f) {
        return f.severity == LintSeverity::Error;
    });
}

namespace {

// The core component-mapping table: for each mapped technique, the exact set
// of component kinds it applies to. Lint checks any knowledge base against
// this reference.
const std::vector<std::pair<std::string, std::set<ComponentKind>>>& core_table() {
    using K = ComponentKind;
    static const std::vector<std::pair<std::string, std::set<K>>> table = {
        {"valid-accounts", {K::MANO}},
        {"exploit-public-facing-nf", {K::NF}},
        {"external-remote-services", {K::MANO}},
        {"supply-chain-compromise", {K::Virtual, K::NF, K::SDN, K::MANO}},
        {"execution-through-api", {K::NF, K::MANO}},
        {"implant-container-vm-image", {K::Virtual, K::NF}},
        {"network-boundary-bridging", {K::Virtual, K::NF, K::NetworkSlice}},
        {"cp-signalling", {K::NF, K::SDN}},
        {"impair-defences", {K::Physical, K::Virtual, K::NF, K::SDN, K::NetworkSlice}},
        {"nf-service-discovery", {K::NF}},
        {"sdn-flow-table-discovery", {K::SDN}},
        {"configuration-exploit",
         {K::Physical, K::Virtual, K::NF, K::SDN, K::MANO, K::NetworkSlice}},
        {"container-vm-breakout", {K::Virtual, K::NF}},
        {"nf-compromise", {K::Virtual, K::NF}},
        {"data-from-nf-repositories", {K::NF}},
        {"sbi-eavesdropping", {K::Virtual, K::NF, K::NetworkSlice}},
        {"memory-scraping", {K::Physical}},
        {"application-layer-protocol-c2", {K::Virtual, K::NF}},
        {"external-remote-services-c2", {K::MANO}},
        {"encrypted-channel-c2", {K::Virtual, K::NF}},
        {"exfiltration-over-c2", {K::MANO}},
        {"service-fraud", {K::NF}},
        {"loss-of-control",
         {K::Physical, K::Virtual, K::NF, K::SDN, K::MANO, K::NetworkSlice}},
        {"loss-of-security",
         {K::Physical, K::Virtual, K::NF, K::SDN, K::MANO, K::NetworkSlice}},
        {"network-slice-isolation-compromise", {K::NetworkSlice}},
        {"resource-overloading", {K::Physical, K::Virtual}},
        {"data-modification", {K::Virtual, K::NF, K::SDN, K::MANO, K::NetworkSlice}},
        {"denial-of-service",
         {K::Physical, K::Virtual, K::NF, K::SDN, K::MANO, K::NetworkSlice}},
    };
    return table;
}

// Tactic memberships that are fixed facts of the model; a knowledge base
// missing one of these is flagged.
struct TacticFact {
    std::string technique_id;
    Tactic tactic;
};

const std::vector<TacticFact>& tactic_facts() {
    static const std::vector<TacticFact> facts = {
        {"exploit-public-facing-nf", Tactic::InitialAccess},
        {"cp-signalling", Tactic::Persistence},
        {"cp-signalling", Tactic::DefenceEvasion},
        {"cp-signalling", Tactic::Discovery},
        {"cp-signalling", Tactic::LateralMovement},
        {"cp-signalling", Tactic::Collection},
        {"cp-signalling", Tactic::CommandAndControl},
        {"exfiltration-over-c2", Tactic::Exfiltration},
        {"service-fraud", Tactic::Impact},
        {"loss-of-control", Tactic::Impact},
        {"loss-of-security", Tactic::Impact},
        {"network-slice-isolation-compromise", Tactic::Impact},
        {"resource-overloading", Tactic::Impact},
        {"data-modification", Tactic::Impact},
        {"denial-of-service", Tactic::Impact},
        {"abuse-of-lawful-intercept", Tactic::Impact},
    };
    return facts;
}

}  // namespace

const std::vector<std::string>& core_table_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& [id, _] : core_table()) out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }();
    return ids;
}

LintReport lint_knowledge_base(const KnowledgeBase& kb) {
    LintReport report;
    auto add = [&](std::string rule, LintSeverity sev, std::string msg,
                   std::optional<std::string> tech = std::nullopt) {
        report.findings.push_back({std::move(rule), sev, std::move(msg), std::move(tech)});
    };

    // Re-check the structural rules so hand-built knowledge bases get the
    // same scrutiny as parsed ones.
    std::set<std::string> seen_ids;
    for (const auto& t : kb.techniques()) {
        if (!seen_ids.insert(t.id).second)
            add("kb.duplicate-id", LintSeverity::Error, "duplicate technique id", t.id);
        if (t.tactics.empty())
            add("kb.empty-tactics", LintSeverity::Error, "technique has no tactics", t.id);
        if (t.components.empty())
            add("kb.empty-components", LintSeverity::Error,
                "technique has no component mapping", t.id);
        bool objective = std::any_of(t.tactics.begin(), t.tactics.end(), [](Tactic tac) {
            return phase_of(tac) == Phase::Objective;
        });
        if (objective && t.effect != Effect::Outcome)
            add("kb.objective-effect", LintSeverity::Error,
                "objective-phase technique must have effect Outcome", t.id);
        if (t.tactics.count(Tactic::InitialAccess) &&
            (t.locality != Locality::Remote || t.required_exposure.empty()))
            add("kb.initial-access-exposure", LintSeverity::Error,
                "initial-access technique must be Remote with a required exposure", t.id);
        if (t.provenance.kind == Provenance::Kind::SubTechnique &&
            !kb.contains(t.provenance.parent))
            add("kb.dangling-parent", LintSeverity::Error,
                "sub-technique parent \"" + t.provenance.parent + "\" not in knowledge base",
                t.id);
        for (const auto& e : t.enables) {
            if (!kb.contains(e))
                add("kb.dangling-enables", LintSeverity::Error,
                    "enables references unknown technique \"" + e + "\"", t.id);
        }
    }

    // Fidelity against the core component-mapping table.
    report.fingerprint.column_counts.assign(kComponentKindCount, 0);
    for (const auto& [id, expected] : core_table()) {
        const Technique* t = kb.find(id);
        if (t == nullptr) {
            add("kb.table-missing", LintSeverity::Warning,
                "core table technique absent from knowledge base", id);
            continue;
        }
        ++report.fingerprint.mapped_technique_count;
        if (t->components != expected) {
            add("kb.table-components", LintSeverity::Warning,
                "component mapping differs from the core table", id);
        }
        for (ComponentKind k : t->components)
            ++report.fingerprint.column_counts[static_cast<int>(k)];
        if (t->components.size() == kComponentKindCount)
            report.fingerprint.all_component_ids.push_back(id);
    }
    std::sort(report.fingerprint.all_component_ids.begin(),
              report.fingerprint.all_component_ids.end());

    const auto& table_ids = core_table_ids();
    for (const auto& t : kb.techniques()) {
        if (!std::binary_search(table_ids.begin(), table_ids.end(), t.id))
            add("kb.unmapped-technique", LintSeverity::Warning,
                "technique is not part of the core component-mapping table", t.id);
        if (t.notes.find("[inferred]") != std::string::npos)
            add("kb.inferred-tactics", LintSeverity::Warning,
                "tactic assignment marked as inferred", t.id);
    }

    for (const auto& fact : tactic_facts()) {
        const Technique* t = kb.find(fact.technique_id);
        if (t != nullptr && !t->tactics.count(fact.tactic))
            add("kb.prose-tactic-absent", LintSeverity::Warning,
                "documented tactic " + std::string(to_string(fact.tactic)) + " is absent",
                t->id);
    }

    return report;
}

}  // namespace tm5g
