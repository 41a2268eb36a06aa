// Acceptance suite: exercises every release gate of the engine and prints
// one PASS/FAIL line per criterion. Exits non-zero if any gate fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dot_check.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "tm5g/applicability.hpp"
#include "tm5g/attackgraph.hpp"
#include "tm5g/builtin.hpp"
#include "tm5g/export.hpp"
#include "tm5g/kb.hpp"
#include "tm5g/risk.hpp"
#include "tm5g/scenario.hpp"
#include "tm5g/topology.hpp"

using namespace tm5g;
using nlohmann::json;

namespace {

int failures = 0;
std::string tm5g_binary;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(int index, const std::string& name, bool ok, double elapsed,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), elapsed, detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++failures;
}

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.str().empty()) detail << "; ";
            detail << what;
        }
    }
};

std::string run_binary(const std::string& args, int& status) {
    std::string full = tm5g_binary + " " + args + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return {};
    }
    std::string out;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
    status = WEXITSTATUS(pclose(pipe));
    return out;
}

// 1. The seeded dataset reproduces the component-mapping table exactly.
void criterion_table_fidelity(const KnowledgeBase& kb) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    LintReport lint = lint_knowledge_base(kb);
    c.expect(lint.fingerprint.mapped_technique_count == 28,
             "mapped technique count != 28");
    using K = ComponentKind;
    const std::vector<std::pair<K, std::size_t>> expected = {
        {K::Physical, 7}, {K::Virtual, 15},     {K::NF, 20},
        {K::SDN, 9},      {K::MANO, 11},        {K::NetworkSlice, 9}};
    for (auto [kind, count] : expected) {
        if (lint.fingerprint.column_counts[static_cast<int>(kind)] != count) {
            c.expect(false, std::string(to_string(kind)) + " column count mismatch");
        }
    }
    c.expect(lint.fingerprint.all_component_ids ==
                 std::vector<std::string>{"configuration-exploit", "denial-of-service",
                                          "loss-of-control", "loss-of-security"},
             "all-component technique set mismatch");
    c.expect(!lint.has_errors(), "seed lint reported errors");
    double elapsed = seconds_since(start);
    c.expect(elapsed < 1.0, "runtime >= 1 s");
    report(1, "component-mapping table fidelity", c.ok, elapsed, c.detail.str());
}

// 2. Documented multi-stage signalling facts and the derived weights.
void criterion_tactic_fidelity(const KnowledgeBase& kb) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    const Technique* cps = kb.find("cp-signalling");
    c.expect(cps != nullptr, "cp-signalling missing");
    if (cps != nullptr) {
        for (Tactic t : {Tactic::Persistence, Tactic::DefenceEvasion, Tactic::Discovery,
                         Tactic::LateralMovement, Tactic::Collection,
                         Tactic::CommandAndControl}) {
            c.expect(cps->tactics.count(t) == 1,
                     std::string("cp-signalling lacks ") + std::string(to_string(t)));
        }
    }
    c.expect(technique_weight(kb, "cp-signalling").weight == 6,
             "cp-signalling weight != 6");
    c.expect(technique_weight(kb, "valid-accounts").weight == 1,
             "valid-accounts weight != 1");
    report(2, "multi-stage technique fidelity", c.ok, seconds_since(start),
           c.detail.str());
}

// 3. Both shipped scenarios replay and appear in the depth-8 enumeration.
void criterion_scenario_replay(const KnowledgeBase& kb, const Topology& topo) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    ScenarioSpec s1 = parse_scenario(builtin::scenario_data_theft_json());
    ScenarioSpec s2 = parse_scenario(builtin::scenario_mano_abuse_json());
    c.expect(validate_scenario(s1, kb, topo).overall, "scenario-1 fails validation");
    c.expect(validate_scenario(s2, kb, topo).overall, "scenario-2 fails validation");

    auto steps1 = s1.attack_steps();
    auto steps2 = s2.attack_steps();
    bool found1 = false, found2 = false;
    bool truncated = enumerate_paths_visit(
        kb, topo, SearchBounds{8, 50000000}, std::nullopt, [&](const PathView& view) {
            if (!found1 && std::equal(view.steps.begin(), view.steps.end(),
                                      steps1.begin(), steps1.end()))
                found1 = true;
            if (!found2 && std::equal(view.steps.begin(), view.steps.end(),
                                      steps2.begin(), steps2.end()))
                found2 = true;
            return !(found1 && found2);
        });
    c.expect(found1, "scenario-1 sequence absent from depth-8 enumeration");
    c.expect(found2, "scenario-2 sequence absent from depth-8 enumeration");
    (void)truncated;
    double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "runtime >= 10 s");
    report(3, "scenario replay and enumeration membership", c.ok, elapsed,
           c.detail.str());
}

// 4. The search agrees with the independent reference enumerator.
void criterion_oracle_equivalence() {
    auto start = std::chrono::steady_clock::now();
    Check c;
    std::mt19937 rng(20240506);
    int rounds = 120, mismatches = 0, non_trivial = 0;
    for (int round = 0; round < rounds; ++round) {
        auto [kb, topo] = gen::random_model(rng);
        auto expected = oracle::enumerate(kb, topo, 5);
        auto actual = enumerate_paths(kb, topo, SearchBounds{5, 10000000});
        bool same = !actual.truncated && actual.paths.size() == expected.size();
        if (same) {
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (actual.paths[i].steps != expected[i]) {
                    same = false;
                    break;
                }
            }
        }
        if (!same) ++mismatches;
        if (!expected.empty()) ++non_trivial;
    }
    c.expect(mismatches == 0,
             std::to_string(mismatches) + " of " + std::to_string(rounds) +
                 " runs disagreed");
    c.expect(non_trivial >= 10, "generator produced too few non-trivial cases");
    double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "runtime >= 60 s");
    std::ostringstream note;
    note << rounds << " runs, " << non_trivial << " with paths";
    if (!c.detail.str().empty()) note << "; " << c.detail.str();
    report(4, "search equals reference enumeration", c.ok, elapsed, note.str());
}

// 5. Every reported cut is sound and minimal when re-checked.
void criterion_cut_soundness(const KnowledgeBase& kb, const Topology& topo) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    SearchBounds bounds{8, 10000};

    auto verify = [&](const KnowledgeBase& base,
                      const std::vector<std::set<std::string>>& cuts) {
        std::size_t checked = 0;
        for (const auto& cut : cuts) {
            bool any = false;
            enumerate_paths_visit(base.without(cut), topo, bounds, std::nullopt,
                                  [&any](const PathView&) {
                                      any = true;
                                      return false;
                                  });
            c.expect(!any, "cut fails to remove all paths");
            for (const auto& id : cut) {
                std::set<std::string> weaker = cut;
                weaker.erase(id);
                bool restored = false;
                enumerate_paths_visit(base.without(weaker), topo, bounds, std::nullopt,
                                      [&restored](const PathView&) {
                                          restored = true;
                                          return false;
                                      });
                c.expect(restored, "cut is not minimal");
            }
            ++checked;
        }
        return checked;
    };

    auto full = technique_cuts(kb, topo, bounds, 2);
    std::size_t checked_full = verify(kb, full);

    // The scenario-restricted base gives the criterion non-vacuous cuts.
    std::set<std::string> keep = {"exploit-public-facing-nf", "nf-compromise",
                                  "nf-service-discovery", "cp-signalling",
                                  "data-from-nf-repositories",
                                  "application-layer-protocol-c2"};
    std::set<std::string> removed;
    for (const auto& t : kb.techniques()) {
        if (!keep.count(t.id)) removed.insert(t.id);
    }
    KnowledgeBase restricted = kb.without(removed);
    auto scoped = technique_cuts(restricted, topo, bounds, 2);
    c.expect(!scoped.empty(), "restricted model produced no cuts");
    bool has_entry_cut =
        std::find(scoped.begin(), scoped.end(),
                  std::set<std::string>{"exploit-public-facing-nf"}) != scoped.end();
    c.expect(has_entry_cut, "entry technique is not reported as a cut");
    std::size_t checked_scoped = verify(restricted, scoped);

    std::ostringstream note;
    note << checked_full << " full-model cuts, " << checked_scoped
         << " restricted-model cuts checked";
    if (!c.detail.str().empty()) note << "; " << c.detail.str();
    report(5, "cut soundness and minimality", c.ok, seconds_since(start), note.str());
}

// 6. Two runs of the reporting pipeline are byte-identical.
void criterion_determinism() {
    auto start = std::chrono::steady_clock::now();
    Check c;
    int status_a = 0, status_b = 0;
    std::string a = run_binary("report", status_a);
    std::string b = run_binary("report", status_b);
    c.expect(status_a == 0 && status_b == 0, "report command failed");
    c.expect(!a.empty(), "report output empty");
    c.expect(a == b, "consecutive report runs differ");
    report(6, "byte-identical reporting", c.ok, seconds_since(start), c.detail.str());
}

// 7. Exported artifacts parse and carry the right cardinalities.
void criterion_export_validity(const KnowledgeBase& kb, const Topology& topo) {
    auto start = std::chrono::steady_clock::now();
    Check c;

    NavigatorLayer layer = to_navigator_layer(kb, technique_weights(kb));
    std::string layer_text = layer_to_json(layer);
    c.expect(json::accept(layer_text), "layer JSON does not parse");
    json doc = json::parse(layer_text);
    c.expect(doc["techniques"].size() == kb.size(),
             "layer entry count != selected technique count");

    std::set<std::string> selection = {"cp-signalling", "denial-of-service"};
    NavigatorLayer small = to_navigator_layer(kb, technique_weights(kb), selection);
    c.expect(small.techniques.size() == selection.size(),
             "selection layer entry count mismatch");

    ScenarioSpec s1 = parse_scenario(builtin::scenario_data_theft_json());
    AttackGraph chain = build_graph({{s1.attack_steps(), {}}});
    c.expect(chain.nodes.size() == s1.steps.size(), "chain graph node count");
    c.expect(chain.edges.size() == s1.steps.size() - 1, "chain graph edge count");
    DotGraph dot = to_dot(chain);
    c.expect(dotcheck::valid_dot(dot.text), "chain DOT rejected by grammar check");

    ScenarioSpec s2 = parse_scenario(builtin::scenario_mano_abuse_json());
    DotGraph both =
        to_dot(build_graph({{s1.attack_steps(), {}}, {s2.attack_steps(), {}}}));
    c.expect(dotcheck::valid_dot(both.text), "combined DOT rejected by grammar check");
    c.expect(dotcheck::valid_dot(to_dot(build_graph({})).text),
             "empty DOT rejected by grammar check");
    (void)topo;
    report(7, "export validity", c.ok, seconds_since(start), c.detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        tm5g_binary = argv[1];
    } else if (const char* env = std::getenv("TM5G_BIN")) {
        tm5g_binary = env;
    } else {
        std::cerr << "usage: tm5g_acceptance <path-to-tm5g-binary>\n";
        return 2;
    }

    KnowledgeBase kb = parse_knowledge_base(builtin::seed_kb_json());
    Topology topo = parse_topology(builtin::ref5gcn_topology_json());

    criterion_table_fidelity(kb);
    criterion_tactic_fidelity(kb);
    criterion_scenario_replay(kb, topo);
    criterion_oracle_equivalence();
    criterion_cut_soundness(kb, topo);
    criterion_determinism();
    criterion_export_validity(kb, topo);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
