#pragma once

#include <span>
#include <string>
#include <vector>

#include "latticegen/network.hpp"
#include "latticegen/resources.hpp"

namespace latticegen {

/// from -> to: systems in `to` refer (entry condition or Preselect) to
/// features owned by systems in `from`; weight counts the references.
struct RegionEdge {
    std::string from;
    std::string to;
    std::size_t weight = 0;

    auto operator<=>(const RegionEdge&) const = default;
};

struct RegionGraph {
    std::vector<std::string> nodes;  // sorted
    std::vector<RegionEdge> edges;   // sorted by (from, to)

    bool operator==(const RegionGraph&) const = default;
};

/// Throws MISSING-REGION-TAG. `declared` adds regions without systems.
RegionGraph region_graph(const SystemNetwork& net, std::span<const std::string> declared = {});

/// The region's systems plus one stub per external feature they refer to.
/// Throws UNKNOWN-REGION.
LatticeFragment region_view(const SystemNetwork& net, const std::string& region);

/// Entry-condition references from a region's systems, split by whether
/// the referenced feature is owned inside the region.
struct RegionLint {
    std::string region;
    std::size_t intra = 0;
    std::size_t inter = 0;

    bool operator==(const RegionLint&) const = default;
};

std::vector<RegionLint> region_lint(const SystemNetwork& net);

std::string to_dot(const RegionGraph& graph);
json to_json(const RegionGraph& graph);
RegionGraph region_graph_from_json(const json& j);

std::string to_dot(const LatticeFragment& fragment);
json to_json(const LatticeFragment& fragment);
LatticeFragment fragment_from_json(const json& j);

}  // namespace latticegen
