#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tm5g/kb.hpp"

namespace tm5g {

enum class Relation { Interface, Trust, HostedOn, SliceShared };

std::string_view to_string(Relation r);
std::optional<Relation> relation_from_string(std::string_view s);

struct Asset {
    std::string id;
    ComponentKind kind = ComponentKind::NF;
    std::string label;
    std::set<Exposure> exposures;
    std::set<std::string> slices;  // slice assets this asset serves

    bool operator==(const Asset&) const = default;
};

// HostedOn is directed (a runs on b) and must descend the NF > Virtual >
// Physical layering; the other relations are undirected.
struct Edge {
    std::string a;
    std::string b;
    Relation relation = Relation::Interface;

    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

class Topology {
public:
    Topology() = default;
    Topology(std::string name, std::vector<Asset> assets, std::vector<Edge> edges);

    const std::string& name() const { return name_; }
    const std::vector<Asset>& assets() const { return assets_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Asset* find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Undirected neighbourhood over all relations (both directions of
    /// HostedOn included). Throws std::invalid_argument for unknown ids.
    const std::set<std::string>& adjacency(const std::string& asset_id) const;

    bool operator==(const Topology& other) const {
        return name_ == other.name_ && assets_ == other.assets_ && edges_ == other.edges_;
    }

private:
    std::string name_;
    std::vector<Asset> assets_;  // sorted by id
    std::vector<Edge> edges_;    // sorted
    std::map<std::string, std::set<std::string>, std::less<>> adjacency_;
};

/// Parses a UTF-8 JSON topology document; validates referential integrity
/// and the hosting layer rules. Throws ParseError.
Topology parse_topology(std::string_view text);

std::string serialize_topology(const Topology& topology);

}  // namespace tm5g
