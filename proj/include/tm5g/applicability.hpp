#pragma once

#include <set>
#include <string>
#include <vector>

#include "tm5g/kb.hpp"
#include "tm5g/topology.hpp"

namespace tm5g {

// A viable way into the network: an initial-access technique paired with an
// asset whose kind and exposures satisfy it.
struct EntryPoint {
    std::string asset_id;
    std::string technique_id;

    bool operator==(const EntryPoint&) const = default;
    auto operator<=>(const EntryPoint&) const = default;
};

// Technique-by-asset applicability. Applicability depends only on the
// asset's kind; exposures matter for entry viability, not applicability.
class ApplicabilityMatrix {
public:
    ApplicabilityMatrix() = default;
    ApplicabilityMatrix(std::vector<std::string> technique_ids,
                        std::vector<std::string> asset_ids,
                        std::vector<bool> cells);

    const std::vector<std::string>& technique_ids() const { return technique_ids_; }
    const std::vector<std::string>& asset_ids() const { return asset_ids_; }
    bool at(std::size_t technique_row, std::size_t asset_col) const;
    std::size_t cell_count() const { return cells_.size(); }

private:
    std::vector<std::string> technique_ids_;  // rows, sorted
    std::vector<std::string> asset_ids_;      // columns, sorted
    std::vector<bool> cells_;                 // row-major
};

/// Techniques applicable to the asset: { t : kind(asset) in components(t) }.
std::set<std::string> applicable_techniques(const KnowledgeBase& kb, const Asset& asset);

/// All (asset, technique) pairs viable for initial access, sorted.
std::vector<EntryPoint> entry_points(const KnowledgeBase& kb, const Topology& topology);

ApplicabilityMatrix applicability_matrix(const KnowledgeBase& kb,
                                         const Topology& topology);

/// CSV rendering: header row of asset ids, one row per technique, cells 1/0.
std::string matrix_to_csv(const ApplicabilityMatrix& matrix);

}  // namespace tm5g
