#include <doctest.h>

#include <json.hpp>

#include "table_fixture.hpp"
#include "tm5g/builtin.hpp"
#include "tm5g/kb.hpp"

using namespace tm5g;
using nlohmann::json;

namespace {

KnowledgeBase seed() { return parse_knowledge_base(builtin::seed_kb_json()); }

// Mutates one technique record of the seed document and reserializes.
std::string seed_with(const std::string& id,
                      const std::function<void(json&)>& mutate) {
    json doc = json::parse(builtin::seed_kb_json());
    for (auto& t : doc["techniques"]) {
        if (t["id"] == id) mutate(t);
    }
    return doc.dump();
}

bool has_finding(const LintReport& report, const std::string& rule,
                 const std::string& technique) {
    for (const auto& f : report.findings) {
        if (f.rule_id == rule && f.technique_id && *f.technique_id == technique)
            return true;
    }
    return false;
}

}  // namespace

TEST_CASE("phase partition covers all ten tactics") {
    int pre = 0, post = 0, objective = 0;
    for (Tactic t : all_tactics()) {
        switch (phase_of(t)) {
            case Phase::Pre: ++pre; break;
            case Phase::Post: ++post; break;
            case Phase::Objective: ++objective; break;
        }
    }
    CHECK(pre == 2);
    CHECK(post == 6);
    CHECK(objective == 2);
    CHECK(phase_of(Tactic::InitialAccess) == Phase::Pre);
    CHECK(phase_of(Tactic::Execution) == Phase::Pre);
    CHECK(phase_of(Tactic::Exfiltration) == Phase::Objective);
    CHECK(phase_of(Tactic::Impact) == Phase::Objective);
}

TEST_CASE("seed dataset parses with the expected shape") {
    KnowledgeBase kb = seed();
    CHECK(kb.size() == 30);

    const Technique* cps = kb.find("cp-signalling");
    REQUIRE(cps != nullptr);
    CHECK(cps->tactics ==
          std::set<Tactic>{Tactic::Persistence, Tactic::DefenceEvasion, Tactic::Discovery,
                           Tactic::LateralMovement, Tactic::Collection,
                           Tactic::CommandAndControl});
    CHECK(cps->provenance.kind == Provenance::Kind::SubTechnique);
    CHECK(cps->provenance.parent == "application-layer-protocol-c2");

    const Technique* epfn = kb.find("exploit-public-facing-nf");
    REQUIRE(epfn != nullptr);
    CHECK(epfn->tactics.count(Tactic::InitialAccess) == 1);
    CHECK(epfn->locality == Locality::Remote);
    CHECK(epfn->required_exposure == std::set<Exposure>{Exposure::PublicFacing});

    const Technique* eoc2 = kb.find("exfiltration-over-c2");
    REQUIRE(eoc2 != nullptr);
    CHECK(eoc2->tactics == std::set<Tactic>{Tactic::Exfiltration});
    CHECK(eoc2->effect == Effect::Outcome);
}

TEST_CASE("seed component mappings match the transcribed table row for row") {
    KnowledgeBase kb = seed();
    const auto& table = fixture::component_table();
    CHECK(table.size() == 28);
    for (const auto& [id, expected] : table) {
        const Technique* t = kb.find(id);
        REQUIRE_MESSAGE(t != nullptr, id);
        CHECK_MESSAGE(t->components == expected, id);
    }
    // Everything beyond the table is one of the editorial additions.
    for (const auto& t : kb.techniques()) {
        if (!table.count(t.id)) CHECK(fixture::editorial_ids().count(t.id) == 1);
    }
}

TEST_CASE("seed tactic facts hold") {
    KnowledgeBase kb = seed();
    CHECK(kb.find("valid-accounts")->tactics == std::set<Tactic>{Tactic::InitialAccess});
    for (const char* id :
         {"service-fraud", "loss-of-control", "loss-of-security",
          "network-slice-isolation-compromise", "resource-overloading",
          "data-modification", "denial-of-service", "abuse-of-lawful-intercept"}) {
        CHECK_MESSAGE(kb.find(id)->tactics.count(Tactic::Impact) == 1, id);
    }
    // Multi-stage techniques keep objective-phase effect.
    const Technique* alp = kb.find("application-layer-protocol-c2");
    CHECK(alp->tactics.count(Tactic::CommandAndControl) == 1);
    CHECK(alp->tactics.count(Tactic::Exfiltration) == 1);
    CHECK(alp->effect == Effect::Outcome);
}

TEST_CASE("parse/serialize round-trip is identity") {
    KnowledgeBase kb = seed();
    KnowledgeBase again = parse_knowledge_base(serialize_knowledge_base(kb));
    CHECK(kb == again);
}

TEST_CASE("parse rejects malformed and invalid documents") {
    CHECK_THROWS_AS(parse_knowledge_base("not json"), ParseError);
    CHECK_THROWS_AS(parse_knowledge_base("[]"), ParseError);

    try {
        parse_knowledge_base("{\"version\": \"x\"");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Syntax);
    }

    SUBCASE("empty component set") {
        std::string text = seed_with("valid-accounts", [](json& t) {
            t["components"] = json::array();
        });
        CHECK_THROWS_WITH_AS(parse_knowledge_base(text),
                             doctest::Contains("empty component set"), ParseError);
    }
    SUBCASE("duplicate id") {
        json doc = json::parse(builtin::seed_kb_json());
        json copy = doc["techniques"][0];
        doc["techniques"].push_back(copy);
        try {
            parse_knowledge_base(doc.dump());
            FAIL("expected duplicate id rejection");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::Semantic);
            CHECK(std::string(e.what()).find("duplicate technique id") !=
                  std::string::npos);
        }
    }
    SUBCASE("unknown tactic") {
        std::string text = seed_with("valid-accounts", [](json& t) {
            t["tactics"] = {"Reconnaissance"};
        });
        CHECK_THROWS_WITH_AS(parse_knowledge_base(text),
                             doctest::Contains("unknown tactic"), ParseError);
    }
    SUBCASE("unknown component") {
        std::string text = seed_with("valid-accounts", [](json& t) {
            t["components"] = {"Mainframe"};
        });
        CHECK_THROWS_WITH_AS(parse_knowledge_base(text),
                             doctest::Contains("unknown component"), ParseError);
    }
    SUBCASE("dangling sub-technique parent") {
        std::string text = seed_with("cp-signalling", [](json& t) {
            t["provenance"] = {{"kind", "SubTechnique"}, {"parent", "ghost"}};
        });
        CHECK_THROWS_WITH_AS(parse_knowledge_base(text), doctest::Contains("ghost"),
                             ParseError);
    }
    SUBCASE("objective technique with wrong effect") {
        std::string text = seed_with("denial-of-service", [](json& t) {
            t["effect"] = "Foothold";
        });
        CHECK_THROWS_AS(parse_knowledge_base(text), ParseError);
    }
    SUBCASE("initial access without exposure") {
        std::string text = seed_with("valid-accounts", [](json& t) {
            t.erase("required_exposure");
        });
        CHECK_THROWS_AS(parse_knowledge_base(text), ParseError);
    }
    SUBCASE("enables between non-impact techniques") {
        std::string text = seed_with("valid-accounts", [](json& t) {
            t["enables"] = {"denial-of-service"};
        });
        CHECK_THROWS_AS(parse_knowledge_base(text), ParseError);
    }
}

TEST_CASE("lint fingerprint matches the core table") {
    LintReport report = lint_knowledge_base(seed());
    CHECK(report.fingerprint.mapped_technique_count == 28);
    using K = ComponentKind;
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::Physical)] == 7);
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::Virtual)] == 15);
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::NF)] == 20);
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::SDN)] == 9);
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::MANO)] == 11);
    CHECK(report.fingerprint.column_counts[static_cast<int>(K::NetworkSlice)] == 9);
    CHECK(report.fingerprint.all_component_ids ==
          std::vector<std::string>{"configuration-exploit", "denial-of-service",
                                   "loss-of-control", "loss-of-security"});
    CHECK_FALSE(report.has_errors());
}

TEST_CASE("lint flags the expected seed warnings and nothing else at error level") {
    LintReport report = lint_knowledge_base(seed());
    CHECK(has_finding(report, "kb.unmapped-technique", "trusted-relationship"));
    CHECK(has_finding(report, "kb.unmapped-technique", "abuse-of-lawful-intercept"));
    CHECK(has_finding(report, "kb.inferred-tactics", "supply-chain-compromise"));
    CHECK(has_finding(report, "kb.inferred-tactics", "network-boundary-bridging"));
    for (const auto& f : report.findings) CHECK(f.severity == LintSeverity::Warning);
}

TEST_CASE("lint reports a documented tactic going missing") {
    std::string text = seed_with("cp-signalling", [](json& t) {
        t["tactics"] = {"Persistence", "DefenceEvasion", "Discovery", "LateralMovement",
                        "CommandAndControl"};  // Collection dropped
    });
    LintReport report = lint_knowledge_base(parse_knowledge_base(text));
    CHECK(has_finding(report, "kb.prose-tactic-absent", "cp-signalling"));
}

TEST_CASE("lint reports component drift from the core table") {
    std::string text = seed_with("memory-scraping", [](json& t) {
        t["components"] = {"Physical", "Virtual"};
    });
    LintReport report = lint_knowledge_base(parse_knowledge_base(text));
    CHECK(has_finding(report, "kb.table-components", "memory-scraping"));
}

TEST_CASE("lint re-checks invariants on hand-built knowledge bases") {
    Technique bad;
    bad.id = "broken";
    bad.name = "Broken";
    bad.tactics = {Tactic::Impact};
    bad.components = {ComponentKind::NF};
    bad.effect = Effect::Foothold;  // objective techniques must be Outcome
    LintReport report = lint_knowledge_base(KnowledgeBase("x", {bad}));
    CHECK(report.has_errors());
    CHECK(has_finding(report, "kb.objective-effect", "broken"));
}

TEST_CASE("without() removes techniques") {
    KnowledgeBase kb = seed();
    KnowledgeBase smaller = kb.without({"valid-accounts", "denial-of-service"});
    CHECK(smaller.size() == kb.size() - 2);
    CHECK_FALSE(smaller.contains("valid-accounts"));
    CHECK(smaller.contains("cp-signalling"));
}
