#pragma once

#include <string_view>

// Datasets embedded at build time from the files under data/; the files are
// the source of truth.
namespace tm5g::builtin {

std::string_view seed_kb_json();
std::string_view ref5gcn_topology_json();
std::string_view scenario_data_theft_json();
std::string_view scenario_mano_abuse_json();

}  // namespace tm5g::builtin
