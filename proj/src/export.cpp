#include "tm5g/export.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace tm5g {

using nlohmann::json;

NavigatorLayer to_navigator_layer(const KnowledgeBase& kb,
                                  const std::vector<TechniqueWeight>& weights,
                                  const std::optional<std::set<std::string>>& selection,
                                  const std::string& name) {
    if (selection) {
        for (const auto& id : *selection) {
            if (!kb.contains(id))
                throw std::invalid_argument("unknown technique id \"" + id + "\"");
        }
    }
    std::map<std::string, int> weight_by_id;
    for (const auto& w : weights) weight_by_id[w.technique_id] = w.weight;

    NavigatorLayer layer;
    layer.name = name;
    const auto& mapped = core_table_ids();
    for (const auto& t : kb.techniques()) {
        if (selection && !selection->count(t.id)) continue;
        LayerEntry entry;
        entry.technique_id = t.id;
        auto w = weight_by_id.find(t.id);
        entry.score = w == weight_by_id.end() ? 1 : w->second;
        std::ostringstream comment;
        comment << t.name << " (" << to_string(t.provenance.kind) << ")";
        if (!std::binary_search(mapped.begin(), mapped.end(), t.id))
            comment << "; not in the core component-mapping table";
        entry.comment = comment.str();
        layer.techniques.push_back(std::move(entry));
    }
    if (!layer.techniques.empty()) {
        auto [lo, hi] = std::minmax_element(
            layer.techniques.begin(), layer.techniques.end(),
            [](const LayerEntry& a, const LayerEntry& b) { return a.score < b.score; });
        layer.gradient_min = lo->score;
        layer.gradient_max = hi->score;
    }
    return layer;
}

std::string layer_to_json(const NavigatorLayer& layer) {
    json doc;
    doc["name"] = layer.name;
    doc["domain"] = layer.domain;
    doc["versions"] = {{"layer", layer.layer_version}};
    json techniques = json::array();
    for (const auto& e : layer.techniques) {
        json node;
        node["techniqueID"] = e.technique_id;
        node["score"] = e.score;
        node["comment"] = e.comment;
        techniques.push_back(node);
    }
    doc["techniques"] = techniques;
    doc["gradient"] = {{"colors", {"#ffe766", "#ff6666"}},
                       {"minValue", layer.gradient_min},
                       {"maxValue", layer.gradient_max}};
    return doc.dump(2) + "\n";
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string step_label(const AttackStep& s) {
    return s.technique_id + " @ " + s.target + " [" +
           std::string(to_string(s.tactic_in_use)) + "]";
}

}  // namespace

DotGraph to_dot(const AttackGraph& graph) {
    std::ostringstream out;
    out << "digraph attack {\n";
    out << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const char* shape = "ellipse";
        if (graph.entry_nodes.count(i)) shape = "box";
        if (graph.objective_nodes.count(i)) shape = "doubleoctagon";
        out << "  n" << i << " [label=\"" << dot_escape(step_label(graph.nodes[i]))
            << "\", shape=" << shape << "];\n";
    }
    for (const auto& [from, to] : graph.edges) {
        out << "  n" << from << " -> n" << to << ";\n";
    }
    out << "}\n";
    return {out.str()};
}

std::string to_report(const Assessment& a) {
    std::ostringstream out;
    out << "5G core network threat assessment\n";
    out << "=================================\n\n";

    out << "KB Summary\n";
    out << "----------\n";
    out << "knowledge base version: " << a.kb_version << "\n";
    out << "topology: " << a.topology_name << "\n";
    out << "component-mapped techniques: " << a.lint.fingerprint.mapped_technique_count
        << "\n";
    out << "applicability per component kind:";
    for (ComponentKind k : all_component_kinds()) {
        out << " " << to_string(k) << "="
            << a.lint.fingerprint.column_counts[static_cast<int>(k)];
    }
    out << "\n";
    std::size_t errors = 0, warnings = 0;
    for (const auto& f : a.lint.findings) {
        (f.severity == LintSeverity::Error ? errors : warnings) += 1;
    }
    out << "lint: " << errors << " errors, " << warnings << " warnings\n\n";

    out << "Entry Points\n";
    out << "------------\n";
    if (a.entries.empty()) {
        out << "none\n";
    } else {
        for (const auto& e : a.entries) out << e.asset_id << ": " << e.technique_id << "\n";
    }
    out << "\n";

    out << "Top Paths\n";
    out << "---------\n";
    if (a.ranked_paths.empty()) {
        out << "none\n";
    } else {
        std::size_t shown = std::min(a.top_paths, a.ranked_paths.size());
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& s = a.ranked_paths[i];
            out << (i + 1) << ". [score " << s.total << ", " << s.length << " steps] "
                << path_key(s.path) << "\n";
        }
        out << "(showing " << shown << " of " << a.paths_found << " paths"
            << (a.truncated ? ", search truncated" : "") << ")\n";
    }
    out << "\n";

    out << "Minimal Cuts\n";
    out << "------------\n";
    if (a.cuts.empty()) {
        out << "none within size " << a.max_cut_size << "\n";
    } else {
        for (const auto& cut : a.cuts) {
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
    }
    return out.str();
}

}  // namespace tm5g
