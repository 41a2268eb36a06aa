// tm5g — threat modelling for 5G core networks.
//
// Commands work from the builtin seed knowledge base and reference topology
// by default, so `tm5g report` runs out of the box.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tm5g/applicability.hpp"
#include "tm5g/attackgraph.hpp"
#include "tm5g/builtin.hpp"
#include "tm5g/export.hpp"
#include "tm5g/kb.hpp"
#include "tm5g/risk.hpp"
#include "tm5g/scenario.hpp"
#include "tm5g/topology.hpp"

namespace {

using nlohmann::json;
using namespace tm5g;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;

const char* kUsage = R"(usage: tm5g <command> [flags]

commands:
  lint-kb            check a knowledge base and print findings
  matrix             technique-by-asset applicability matrix
  entry-points       viable initial-access pairs for a topology
  paths              enumerate attack paths
  cuts               minimal technique cut sets
  validate-scenario  replay a scenario against the engine
  export-layer       matrix-viewer annotation layer (JSON)
  export-dot         attack graph in DOT form
  report             full assessment report

flags:
  --kb <path|builtin:seed>            knowledge base (default builtin:seed)
  --topology <path|builtin:ref5gcn>   topology (default builtin:ref5gcn)
  --scenario <path|builtin:scenario-1|builtin:scenario-2>
  --max-depth <int>                   search depth limit (default 8)
  --max-paths <int>                   search path limit (default 10000)
  --max-cut-size <int>                cut set size limit (default 2)
  --format <json|text|csv|dot>        output format (per-command default)
  --out <path>                        write output to a file instead of stdout
)";

struct Options {
    std::string command;
    std::string kb = "builtin:seed";
    std::string topology = "builtin:ref5gcn";
    std::string scenario;
    SearchBounds bounds;
    std::size_t max_cut_size = 2;
    std::string format;
    std::string out;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::string* builtin_text(const std::string& name) {
    static const std::string seed{builtin::seed_kb_json()};
    static const std::string ref5gcn{builtin::ref5gcn_topology_json()};
    static const std::string scenario1{builtin::scenario_data_theft_json()};
    static const std::string scenario2{builtin::scenario_mano_abuse_json()};
    if (name == "seed") return &seed;
    if (name == "ref5gcn") return &ref5gcn;
    if (name == "scenario-1" || name == "data-theft") return &scenario1;
    if (name == "scenario-2" || name == "mano-abuse") return &scenario2;
    return nullptr;
}

std::string load_text(const std::string& value) {
    if (value.rfind("builtin:", 0) == 0) {
        if (const std::string* text = builtin_text(value.substr(8))) return *text;
        throw InputError("unknown builtin \"" + value + "\"");
    }
    std::ifstream in(value, std::ios::binary);
    if (!in) {
        // Bare builtin names work too, as long as no file shadows them.
        if (const std::string* text = builtin_text(value)) return *text;
        throw InputError("cannot open file: " + value);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int write_output(const Options& opts, const std::string& content) {
    if (opts.out.empty()) {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write file: " << opts.out << "\n";
        return kExitInput;
    }
    out << content;
    return kExitOk;
}

std::string format_or(const Options& opts, const char* fallback) {
    return opts.format.empty() ? fallback : opts.format;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (format == a) return;
    }
    throw InputError("unsupported format \"" + format + "\" for this command");
}

json findings_to_json(const LintReport& report) {
    json doc;
    json findings = json::array();
    for (const auto& f : report.findings) {
        json node;
        node["rule"] = f.rule_id;
        node["severity"] = f.severity == LintSeverity::Error ? "Error" : "Warning";
        node["message"] = f.message;
        if (f.technique_id) node["technique"] = *f.technique_id;
        findings.push_back(node);
    }
    doc["findings"] = findings;
    json counts;
    for (ComponentKind k : all_component_kinds())
        counts[std::string(to_string(k))] =
            report.fingerprint.column_counts[static_cast<int>(k)];
    doc["fingerprint"] = {
        {"component_mapped", report.fingerprint.mapped_technique_count},
        {"column_counts", counts},
        {"all_components", report.fingerprint.all_component_ids}};
    return doc;
}

std::string lint_text(const LintReport& report, bool parsed) {
    std::ostringstream out;
    if (parsed) {
        out << "component-mapped techniques: "
            << report.fingerprint.mapped_technique_count << "\n";
        out << "applicability per component kind:";
        for (ComponentKind k : all_component_kinds())
            out << " " << to_string(k) << "="
                << report.fingerprint.column_counts[static_cast<int>(k)];
        out << "\n";
        out << "techniques applicable to every kind:";
        for (const auto& id : report.fingerprint.all_component_ids) out << " " << id;
        out << "\n";
    }
    for (const auto& f : report.findings) {
        out << (f.severity == LintSeverity::Error ? "ERROR" : "WARNING") << " ["
            << f.rule_id << "]";
        if (f.technique_id) out << " " << *f.technique_id;
        out << ": " << f.message << "\n";
    }
    return out.str();
}

json step_to_json(const AttackStep& s) {
    return {{"technique", s.technique_id},
            {"tactic", std::string(to_string(s.tactic_in_use))},
            {"target", s.target}};
}

json path_to_json(const AttackPath& p) {
    json steps = json::array();
    for (const auto& s : p.steps) steps.push_back(step_to_json(s));
    json state;
    state["foothold"] = p.final_state.foothold;
    state["knowledge"] = p.final_state.knowledge;
    state["channels"] = p.final_state.channels;
    state["phase"] = std::string(to_string(p.final_state.phase_reached));
    return {{"steps", steps}, {"final_state", state}};
}

int cmd_lint_kb(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    LintReport report;
    bool parsed = false;
    try {
        KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
        report = lint_knowledge_base(kb);
        parsed = true;
    } catch (const ParseError& e) {
        if (e.kind() == ParseError::Kind::Syntax) throw;
        report.findings.push_back(
            {"kb.parse", LintSeverity::Error, e.what(), std::nullopt});
        report.fingerprint.column_counts.assign(kComponentKindCount, 0);
    }
    std::string content = format == "json" ? findings_to_json(report).dump(2) + "\n"
                                           : lint_text(report, parsed);
    int rc = write_output(opts, content);
    if (rc != kExitOk) return rc;
    return report.has_errors() ? kExitValidation : kExitOk;
}

int cmd_matrix(const Options& opts) {
    std::string format = format_or(opts, "csv");
    require_format(format, {"csv", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    ApplicabilityMatrix matrix = applicability_matrix(kb, topology);
    if (format == "csv") return write_output(opts, matrix_to_csv(matrix));
    json doc;
    doc["techniques"] = matrix.technique_ids();
    doc["assets"] = matrix.asset_ids();
    json rows = json::array();
    for (std::size_t r = 0; r < matrix.technique_ids().size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < matrix.asset_ids().size(); ++c)
            row.push_back(matrix.at(r, c) ? 1 : 0);
        rows.push_back(row);
    }
    doc["cells"] = rows;
    return write_output(opts, doc.dump(2) + "\n");
}

int cmd_entry_points(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    auto entries = entry_points(kb, topology);
    if (format == "json") {
        json doc = json::array();
        for (const auto& e : entries)
            doc.push_back({{"asset", e.asset_id}, {"technique", e.technique_id}});
        return write_output(opts, doc.dump(2) + "\n");
    }
    std::ostringstream out;
    for (const auto& e : entries) out << e.asset_id << ": " << e.technique_id << "\n";
    return write_output(opts, out.str());
}

int cmd_paths(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));

    if (format == "text") {
        // Stream paths as they are found; keeps memory flat at any bound.
        std::ostream* sink = &std::cout;
        std::ofstream file;
        if (!opts.out.empty()) {
            file.open(opts.out, std::ios::binary);
            if (!file) {
                std::cerr << "error: cannot write file: " << opts.out << "\n";
                return kExitInput;
            }
            sink = &file;
        }
        std::size_t count = 0;
        std::string line;
        bool truncated = enumerate_paths_visit(kb, topology, opts.bounds, std::nullopt,
                                               [&](const PathView& view) {
                                                   line.clear();
                                                   for (std::size_t i = 0;
                                                        i < view.steps.size(); ++i) {
                                                       if (i > 0) line += " -> ";
                                                       const auto& s = view.steps[i];
                                                       line += s.technique_id;
                                                       line += '@';
                                                       line += s.target;
                                                       line += '[';
                                                       line += to_string(s.tactic_in_use);
                                                       line += "]";
                                                   }
                                                   line += '\n';
                                                   sink->write(line.data(),
                                                               static_cast<std::streamsize>(
                                                                   line.size()));
                                                   ++count;
                                                   return true;
                                               });
        std::cerr << "paths: " << count << (truncated ? " (truncated)" : "") << "\n";
        return kExitOk;
    }

    PathEnumeration result = enumerate_paths(kb, topology, opts.bounds);
    json doc;
    doc["count"] = result.paths.size();
    doc["truncated"] = result.truncated;
    json paths = json::array();
    for (const auto& p : result.paths) paths.push_back(path_to_json(p));
    doc["paths"] = paths;
    return write_output(opts, doc.dump(2) + "\n");
}

int cmd_cuts(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    auto cuts = technique_cuts(kb, topology, opts.bounds, opts.max_cut_size);
    if (format == "json") {
        json doc;
        doc["max_cut_size"] = opts.max_cut_size;
        json list = json::array();
        for (const auto& cut : cuts) list.push_back(cut);
        doc["cuts"] = list;
        return write_output(opts, doc.dump(2) + "\n");
    }
    std::ostringstream out;
    if (cuts.empty()) {
        out << "no cuts within size " << opts.max_cut_size << "\n";
    }
    for (const auto& cut : cuts) {
        if (cut.empty()) {
            out << "(empty cut: no attack paths exist)\n";
            continue;
        }
        bool first = true;
        for (const auto& id : cut) {
            if (!first) out << " + ";
            out << id;
            first = false;
        }
        out << "\n";
    }
    return write_output(opts, out.str());
}

int cmd_validate_scenario(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    if (opts.scenario.empty())
        throw InputError("validate-scenario requires --scenario");
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    ScenarioSpec spec = parse_scenario(load_text(opts.scenario));
    ValidationReport report = validate_scenario(spec, kb, topology);

    std::string content;
    if (format == "json") {
        json doc;
        doc["scenario"] = report.scenario_name;
        doc["overall"] = report.overall;
        json steps = json::array();
        for (const auto& s : report.steps) {
            steps.push_back({{"index", s.index},
                             {"rule", s.rule_id},
                             {"passed", s.passed},
                             {"message", s.message}});
        }
        doc["steps"] = steps;
        content = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "scenario: " << report.scenario_name << "\n";
        for (const auto& s : report.steps) {
            out << "  step " << s.index << ": " << (s.passed ? "pass" : "FAIL") << " ["
                << s.rule_id << "] " << s.message << "\n";
        }
        out << (report.overall ? "overall: pass" : "overall: FAIL") << "\n";
        content = out.str();
    }
    int rc = write_output(opts, content);
    if (rc != kExitOk) return rc;
    return report.overall ? kExitOk : kExitValidation;
}

int cmd_export_layer(const Options& opts) {
    std::string format = format_or(opts, "json");
    require_format(format, {"json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    NavigatorLayer layer = to_navigator_layer(kb, technique_weights(kb));
    return write_output(opts, layer_to_json(layer));
}

int cmd_export_dot(const Options& opts) {
    std::string format = format_or(opts, "dot");
    require_format(format, {"dot", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    PathEnumeration result = enumerate_paths(kb, topology, opts.bounds);
    AttackGraph graph = build_graph(result.paths);
    DotGraph dot = to_dot(graph);
    if (format == "json") {
        json doc;
        json nodes = json::array();
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            json node = step_to_json(graph.nodes[i]);
            node["id"] = i;
            node["entry"] = graph.entry_nodes.count(i) > 0;
            node["objective"] = graph.objective_nodes.count(i) > 0;
            nodes.push_back(node);
        }
        doc["nodes"] = nodes;
        json edges = json::array();
        for (const auto& [from, to] : graph.edges) edges.push_back({from, to});
        doc["edges"] = edges;
        doc["dot"] = dot.text;
        return write_output(opts, doc.dump(2) + "\n");
    }
    return write_output(opts, dot.text);
}

Assessment build_assessment(const KnowledgeBase& kb, const Topology& topology,
                            const SearchBounds& bounds, std::size_t max_cut_size) {
    Assessment a;
    a.kb_version = kb.version();
    a.topology_name = topology.name();
    a.lint = lint_knowledge_base(kb);
    a.entries = entry_points(kb, topology);
    PathEnumeration result = enumerate_paths(kb, topology, bounds);
    a.truncated = result.truncated;
    a.paths_found = result.paths.size();
    std::vector<PathScore> scores;
    scores.reserve(result.paths.size());
    for (const auto& p : result.paths) scores.push_back(path_score(kb, p));
    a.ranked_paths = rank_paths(std::move(scores));
    a.cuts = technique_cuts(kb, topology, bounds, max_cut_size);
    a.max_cut_size = max_cut_size;
    return a;
}

int cmd_report(const Options& opts) {
    std::string format = format_or(opts, "text");
    require_format(format, {"text", "json"});
    KnowledgeBase kb = parse_knowledge_base(load_text(opts.kb));
    Topology topology = parse_topology(load_text(opts.topology));
    Assessment a = build_assessment(kb, topology, opts.bounds, opts.max_cut_size);
    if (format == "text") return write_output(opts, to_report(a));

    json doc;
    doc["kb_version"] = a.kb_version;
    doc["topology"] = a.topology_name;
    doc["lint"] = findings_to_json(a.lint);
    json entries = json::array();
    for (const auto& e : a.entries)
        entries.push_back({{"asset", e.asset_id}, {"technique", e.technique_id}});
    doc["entry_points"] = entries;
    json top = json::array();
    std::size_t shown = std::min(a.top_paths, a.ranked_paths.size());
    for (std::size_t i = 0; i < shown; ++i) {
        json node = path_to_json(a.ranked_paths[i].path);
        node["score"] = a.ranked_paths[i].total;
        top.push_back(node);
    }
    doc["top_paths"] = top;
    doc["paths_found"] = a.paths_found;
    doc["truncated"] = a.truncated;
    json cuts = json::array();
    for (const auto& cut : a.cuts) cuts.push_back(cut);
    doc["cuts"] = cuts;
    return write_output(opts, doc.dump(2) + "\n");
}

int run(const Options& opts) {
    if (opts.command == "lint-kb") return cmd_lint_kb(opts);
    if (opts.command == "matrix") return cmd_matrix(opts);
    if (opts.command == "entry-points") return cmd_entry_points(opts);
    if (opts.command == "paths") return cmd_paths(opts);
    if (opts.command == "cuts") return cmd_cuts(opts);
    if (opts.command == "validate-scenario") return cmd_validate_scenario(opts);
    if (opts.command == "export-layer") return cmd_export_layer(opts);
    if (opts.command == "export-dot") return cmd_export_dot(opts);
    if (opts.command == "report") return cmd_report(opts);
    std::cerr << "error: unknown command \"" << opts.command << "\"\n" << kUsage;
    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return kExitInput;
    }
    Options opts;
    opts.command = argv[1];
    if (opts.command == "--help" || opts.command == "-h" || opts.command == "help") {
        std::cout << kUsage;
        return kExitOk;
    }

    for (int i = 2; i < argc; ++i) {
        std::string flag = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                throw InputError("flag " + flag + " needs a value");
            }
            return argv[++i];
        };
        try {
            if (flag == "--kb") {
                opts.kb = next();
            } else if (flag == "--topology") {
                opts.topology = next();
            } else if (flag == "--scenario") {
                opts.scenario = next();
            } else if (flag == "--max-depth") {
                opts.bounds.max_depth = std::stoi(next());
            } else if (flag == "--max-paths") {
                opts.bounds.max_paths = std::stoul(next());
            } else if (flag == "--max-cut-size") {
                opts.max_cut_size = std::stoul(next());
            } else if (flag == "--format") {
                opts.format = next();
            } else if (flag == "--out") {
                opts.out = next();
            } else {
                std::cerr << "error: unknown flag \"" << flag << "\"\n" << kUsage;
                return kExitInput;
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInput;
        }
    }

    try {
        return run(opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
