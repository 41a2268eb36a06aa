#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tm5g {

// Adversary lifecycle stages. Every tactic belongs to exactly one phase:
// pre-intrusion (gaining access), post-intrusion (positioning), objective
// (the end goal of the campaign).
enum class Tactic {
    InitialAccess,
    Execution,
    Persistence,
    DefenceEvasion,
    Discovery,
    LateralMovement,
    Collection,
    CommandAndControl,
    Exfiltration,
    Impact,
};

enum class Phase { Pre, Post, Objective };

// Infrastructure component categories a technique can apply to.
enum class ComponentKind { Physical, Virtual, NF, SDN, MANO, NetworkSlice };

// Ways an asset can be reachable from outside the core network.
enum class Exposure {
    PublicFacing,
    ExternalRemoteService,
    RoamingInterconnect,
    ThirdPartyApplication,
};

// What executing a technique gains the attacker.
enum class Effect { Foothold, Knowledge, Channel, Outcome };

// From where a technique can be launched against its target.
enum class Locality { Remote, Local, Adjacent };

struct Provenance {
    enum class Kind { New5G, ExistingAttack, SubTechnique };
    Kind kind = Kind::New5G;
    std::string parent;  // set only for SubTechnique

    bool operator==(const Provenance&) const = default;
};

struct Technique {
    std::string id;    // stable kebab-case key
    std::string name;  // display name
    std::set<Tactic> tactics;
    std::set<ComponentKind> components;
    Provenance provenance;
    Effect effect = Effect::Foothold;
    Locality locality = Locality::Adjacent;
    std::set<Exposure> required_exposure;  // meaningful only for Remote techniques
    std::vector<std::string> enables;      // impact techniques this one can chain into
    std::string notes;

    bool operator==(const Technique&) const = default;
};

class KnowledgeBase {
public:
    KnowledgeBase() = default;
    KnowledgeBase(std::string version, std::vector<Technique> techniques);

    const std::string& version() const { return version_; }
    const std::vector<Technique>& techniques() const { return techniques_; }

    const Technique* find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }
    std::size_t size() const { return techniques_.size(); }

    // Copy with the given technique ids removed (used for cut-set analysis).
    KnowledgeBase without(const std::set<std::string>& removed_ids) const;

    bool operator==(const KnowledgeBase&) const = default;

private:
    std::string version_;
    std::vector<Technique> techniques_;  // sorted by id
};

// Raised by the parsers. Syntax covers malformed documents; Semantic covers
// domain rule violations (duplicate ids, unknown names, dangling references).
class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, Semantic };

    ParseError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

Phase phase_of(Tactic tactic);

// The effect a step actually has depends on the tactic it is used for:
// command-and-control opens a channel, discovery/collection yield knowledge,
// objective tactics are outcomes, everything else extends the foothold.
Effect resolved_effect(Tactic tactic_in_use);

// Name tables (the spellings used in all file formats).
std::string_view to_string(Tactic t);
std::string_view to_string(Phase p);
std::string_view to_string(ComponentKind k);
std::string_view to_string(Exposure e);
std::string_view to_string(Effect e);
std::string_view to_string(Locality l);
std::string_view to_string(Provenance::Kind k);

std::optional<Tactic> tactic_from_string(std::string_view s);
std::optional<ComponentKind> component_from_string(std::string_view s);
std::optional<Exposure> exposure_from_string(std::string_view s);
std::optional<Effect> effect_from_string(std::string_view s);
std::optional<Locality> locality_from_string(std::string_view s);
std::optional<Provenance::Kind> provenance_kind_from_string(std::string_view s);

constexpr std::size_t kTacticCount = 10;
constexpr std::size_t kComponentKindCount = 6;

std::vector<Tactic> all_tactics();
std::vector<ComponentKind> all_component_kinds();

/// Parses a UTF-8 JSON knowledge-base document and validates every
/// technique-level rule. Throws ParseError on failure.
KnowledgeBase parse_knowledge_base(std::string_view text);

/// Canonical JSON serialization; parse(serialize(kb)) == kb.
std::string serialize_knowledge_base(const KnowledgeBase& kb);

enum class LintSeverity { Error, Warning };

struct LintFinding {
    std::string rule_id;
    LintSeverity severity = LintSeverity::Warning;
    std::string message;
    std::optional<std::string> technique_id;
};

// Aggregate fidelity figures over the techniques present in the core
// component-mapping table.
struct KbFingerprint {
    std::size_t mapped_technique_count = 0;          // techniques from the core table
    std::vector<std::size_t> column_counts;          // indexed by ComponentKind
    std::vector<std::string> all_component_ids;      // techniques mapped to every kind
};

struct LintReport {
    std::vector<LintFinding> findings;
    KbFingerprint fingerprint;

    bool has_errors() const;
};

/// Checks a parsed knowledge base against the core component-mapping table
/// and the documented tactic facts. Findings are data, never exceptions.
LintReport lint_knowledge_base(const KnowledgeBase& kb);

/// The technique ids that make up the core component-mapping table.
const std::vector<std::string>& core_table_ids();

}  // namespace tm5g
