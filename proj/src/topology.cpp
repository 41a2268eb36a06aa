#include "tm5g/topology.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

namespace tm5g {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kRelationNames = {
    "Interface", "Trust", "HostedOn", "SliceShared"};

[[noreturn]] void fail_semantic(const std::string& message) {
    throw ParseError(ParseError::Kind::Semantic, message);
}

[[noreturn]] void fail_syntax(const std::string& message) {
    throw ParseError(ParseError::Kind::Syntax, message);
}

// Hosting layer ranks; only these kinds may take part in HostedOn edges.
std::optional<int> layer_of(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::NF: return 2;
        case ComponentKind::Virtual: return 1;
        case ComponentKind::Physical: return 0;
        default: return std::nullopt;
    }
}

}  // namespace

std::string_view to_string(Relation r) { return kRelationNames[static_cast<int>(r)]; }

std::optional<Relation> relation_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kRelationNames.size(); ++i) {
        if (kRelationNames[i] == s) return static_cast<Relation>(i);
    }
    return std::nullopt;
}

Topology::Topology(std::string name, std::vector<Asset> assets, std::vector<Edge> edges)
    : name_(std::move(name)), assets_(std::move(assets)), edges_(std::move(edges)) {
    std::sort(assets_.begin(), assets_.end(),
              [](const Asset& a, const Asset& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end());
    for (const auto& asset : assets_) adjacency_[asset.id];
    for (const auto& edge : edges_) {
        adjacency_[edge.a].insert(edge.b);
        adjacency_[edge.b].insert(edge.a);
    }
}

const Asset* Topology::find(std::string_view id) const {
    auto it = std::lower_bound(
        assets_.begin(), assets_.end(), id,
        [](const Asset& a, std::string_view key) { return a.id < key; });
    if (it == assets_.end() || it->id != id) return nullptr;
    return &*it;
}

const std::set<std::string>& Topology::adjacency(const std::string& asset_id) const {
    auto it = adjacency_.find(asset_id);
    if (it == adjacency_.end())
        throw std::invalid_argument("unknown asset id \"" + asset_id + "\"");
    return it->second;
}

Topology parse_topology(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_syntax(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail_syntax("top-level value must be an object");
    if (!doc.contains("name") || !doc["name"].is_string())
        fail_syntax("topology: missing string field \"name\"");
    std::string name = doc["name"].get<std::string>();

    if (!doc.contains("assets") || !doc["assets"].is_array())
        fail_syntax("topology: missing \"assets\" array");
    std::vector<Asset> assets;
    for (const auto& node : doc["assets"]) {
        if (!node.is_object()) fail_syntax("asset entries must be objects");
        Asset a;
        if (!node.contains("id") || !node["id"].is_string())
            fail_syntax("asset: missing string field \"id\"");
        a.id = node["id"].get<std::string>();
        const std::string ctx = "asset \"" + a.id + "\"";
        if (!node.contains("kind") || !node["kind"].is_string())
            fail_syntax(ctx + ": missing string field \"kind\"");
        auto kind = component_from_string(node["kind"].get<std::string>());
        if (!kind) fail_semantic(ctx + ": unknown kind");
        a.kind = *kind;
        if (node.contains("label")) {
            if (!node["label"].is_string()) fail_syntax(ctx + ": label must be a string");
            a.label = node["label"].get<std::string>();
        }
        if (node.contains("exposures")) {
            if (!node["exposures"].is_array())
                fail_syntax(ctx + ": exposures must be an array");
            for (const auto& v : node["exposures"]) {
                if (!v.is_string()) fail_syntax(ctx + ": exposures must be strings");
                auto e = exposure_from_string(v.get<std::string>());
                if (!e) fail_semantic(ctx + ": unknown exposure");
                a.exposures.insert(*e);
            }
        }
        if (node.contains("slices")) {
            if (!node["slices"].is_array()) fail_syntax(ctx + ": slices must be an array");
            for (const auto& v : node["slices"]) {
                if (!v.is_string()) fail_syntax(ctx + ": slice ids must be strings");
                a.slices.insert(v.get<std::string>());
            }
        }
        assets.push_back(std::move(a));
    }

    std::map<std::string, const Asset*> by_id;
    for (const auto& a : assets) {
        if (!by_id.emplace(a.id, &a).second)
            fail_semantic("duplicate asset id \"" + a.id + "\"");
    }
    for (const auto& a : assets) {
        if (a.kind == ComponentKind::NetworkSlice && !a.slices.empty())
            fail_semantic("asset \"" + a.id + "\": slice assets cannot serve slices");
        for (const auto& s : a.slices) {
            auto it = by_id.find(s);
            if (it == by_id.end())
                fail_semantic("asset \"" + a.id + "\": unknown slice \"" + s + "\"");
            if (it->second->kind != ComponentKind::NetworkSlice)
                fail_semantic("asset \"" + a.id + "\": \"" + s + "\" is not a slice asset");
        }
    }

    if (!doc.contains("edges") || !doc["edges"].is_array())
        fail_syntax("topology: missing \"edges\" array");
    std::vector<Edge> edges;
    for (const auto& node : doc["edges"]) {
        if (!node.is_object()) fail_syntax("edge entries must be objects");
        Edge e;
        if (!node.contains("a") || !node["a"].is_string() || !node.contains("b") ||
            !node["b"].is_string())
            fail_syntax("edge: endpoints \"a\" and \"b\" must be strings");
        e.a = node["a"].get<std::string>();
        e.b = node["b"].get<std::string>();
        if (!node.contains("relation") || !node["relation"].is_string())
            fail_syntax("edge: missing string field \"relation\"");
        auto rel = relation_from_string(node["relation"].get<std::string>());
        if (!rel) fail_semantic("edge: unknown relation");
        e.relation = *rel;

        if (e.a == e.b) fail_semantic("edge cannot connect \"" + e.a + "\" to itself");
        auto ia = by_id.find(e.a);
        auto ib = by_id.find(e.b);
        if (ia == by_id.end())
            fail_semantic("edge references unknown asset \"" + e.a + "\"");
        if (ib == by_id.end())
            fail_semantic("edge references unknown asset \"" + e.b + "\"");
        if (e.relation == Relation::HostedOn) {
            auto la = layer_of(ia->second->kind);
            auto lb = layer_of(ib->second->kind);
            if (!la || !lb || *la <= *lb)
                fail_semantic("edge \"" + e.a + "\" HostedOn \"" + e.b +
                              "\" violates the NF/Virtual/Physical layer order");
        }
        edges.push_back(std::move(e));
    }

    return Topology(std::move(name), std::move(assets), std::move(edges));
}

std::string serialize_topology(const Topology& topology) {
    json doc;
    doc["name"] = topology.name();
    json assets = json::array();
    for (const auto& a : topology.assets()) {
        json node;
        node["id"] = a.id;
        node["kind"] = std::string(to_string(a.kind));
        if (!a.label.empty()) node["label"] = a.label;
        if (!a.exposures.empty()) {
            json exposures = json::array();
            for (Exposure e : a.exposures) exposures.push_back(std::string(to_string(e)));
            node["exposures"] = exposures;
        }
        if (!a.slices.empty()) node["slices"] = a.slices;
        assets.push_back(node);
    }
    doc["assets"] = assets;
    json edges = json::array();
    for (const auto& e : topology.edges()) {
        json node;
        node["a"] = e.a;
        node["b"] = e.b;
        node["relation"] = std::string(to_string(e.relation));
        edges.push_back(node);
    }
    doc["edges"] = edges;
    return doc.dump(2) + "\n";
}

}  // namespace tm5g
