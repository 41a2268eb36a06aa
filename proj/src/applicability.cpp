#include "tm5g/applicability.hpp"

#include <algorithm>
#include <sstream>

namespace tm5g {

ApplicabilityMatrix::ApplicabilityMatrix(std::vector<std::string> technique_ids,
                                         std::vector<std::string> asset_ids,
                                         std::vector<bool> cells)
    : technique_ids_(std::move(technique_ids)),
      asset_ids_(std::move(asset_ids)),
      cells_(std::move(cells)) {}

bool ApplicabilityMatrix::at(std::size_t technique_row, std::size_t asset_col) const {
    return cells_.at(technique_row * asset_ids_.size() + asset_col);
}

std::set<std::string> applicable_techniques(const KnowledgeBase& kb, const Asset& asset) {
    std::set<std::string> out;
    for (const auto& t : kb.techniques()) {
        if (t.components.count(asset.kind)) out.insert(t.id);
    }
    return out;
}

std::vector<EntryPoint> entry_points(const KnowledgeBase& kb, const Topology& topology) {
    std::vector<EntryPoint> out;
    for (const auto& asset : topology.assets()) {
        for (const auto& t : kb.techniques()) {
            if (!t.tactics.count(Tactic::InitialAccess)) continue;
            if (!t.components.count(asset.kind)) continue;
            if (!std::includes(asset.exposures.begin(), asset.exposures.end(),
                               t.required_exposure.begin(), t.required_exposure.end()))
                continue;
            out.push_back({asset.id, t.id});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ApplicabilityMatrix applicability_matrix(const KnowledgeBase& kb,
                                         const Topology& topology) {
    std::vector<std::string> technique_ids;
    for (const auto& t : kb.techniques()) technique_ids.push_back(t.id);
    std::vector<std::string> asset_ids;
    for (const auto& a : topology.assets()) asset_ids.push_back(a.id);

    std::vector<bool> cells;
    cells.reserve(technique_ids.size() * asset_ids.size());
    for (const auto& t : kb.techniques()) {
        for (const auto& a : topology.assets()) {
            cells.push_back(t.components.count(a.kind) != 0);
        }
    }
    return ApplicabilityMatrix(std::move(technique_ids), std::move(asset_ids),
                               std::move(cells));
}

std::string matrix_to_csv(const ApplicabilityMatrix& matrix) {
    std::ostringstream out;
    out << "technique";
    for (const auto& a : matrix.asset_ids()) out << "," << a;
    out << "\n";
    for (std::size_t row = 0; row < matrix.technique_ids().size(); ++row) {
        out << matrix.technique_ids()[row];
        for (std::size_t col = 0; col < matrix.asset_ids().size(); ++col) {
            out << "," << (matrix.at(row, col) ? "1" : "0");
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace tm5g
