#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latticegen/generator.hpp"

namespace latticegen {

// --- selection expression views ---------------------------------------------

struct SelectionItem {
    std::string feature;
    std::string system;

    bool operator==(const SelectionItem&) const = default;
};

/// Throws UNKNOWN-UNIT.
const UnitRecord& find_unit(const GenerationResult& result, std::string_view unit);

std::vector<SelectionItem> selection_list(const GenerationResult& result, std::string_view unit);
/// Systems that took part in the unit, every selected feature marked.
LatticeFragment selection_subgraph(const GenerationResult& result, const SystemNetwork& net, std::string_view unit);
std::vector<DecisionEvent> selection_replay(const GenerationResult& result, std::string_view unit);

// --- focusing ----------------------------------------------------------------

struct FocusEntry {
    std::size_t constraint = 0;  // index into the unit's constraints
    std::string statement;       // id
    std::string description;
    std::string system;
    std::string feature;
    std::string context;  // normalized entry condition of the system

    bool operator==(const FocusEntry&) const = default;
};

struct FocusReport {
    std::string unit;
    std::string aspect;
    std::vector<FocusEntry> entries;

    bool operator==(const FocusReport&) const = default;
};

/// Aspects: `token:<i>` (index into result.tokens; reported against the
/// token's own unit), `function:<F>`, `ordering:<A><<B>`,
/// `lexical-class:<F>`. Throws UNKNOWN-UNIT and UNKNOWN-ASPECT; unknown
/// functions give an empty report.
FocusReport where_introduced(const GenerationResult& result, std::string_view unit, std::string_view aspect,
                             const SystemNetwork* net = nullptr);

/// Ordering provenance for the adjacent tokens i and i+1, resolved in the
/// smallest unit containing both.
FocusReport adjacency_provenance(const GenerationResult& result, std::size_t i, const SystemNetwork* net = nullptr);

/// Throws UNKNOWN-UNIT and SYSTEM-NOT-FIRED.
const ChooserOutcome& decision_path(const GenerationResult& result, std::string_view unit, std::string_view system);

// --- contrast ------------------------------------------------------------------

struct Divergence {
    std::string unit;
    std::string system;
    std::string feature_a;  // empty when the system did not fire on that side
    std::string feature_b;
    std::string detail;

    bool operator==(const Divergence&) const = default;
};

struct UnitDiff {
    std::string unit;
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;

    bool operator==(const UnitDiff&) const = default;
};

struct TraceDiff {
    std::optional<Divergence> first_divergence;
    std::vector<UnitDiff> units;
    std::vector<std::string> warnings;

    bool empty() const { return !first_divergence; }
};

TraceDiff diff_traces(const GenerationResult& a, const GenerationResult& b);

json to_json(const TraceDiff& diff);
json to_json(const FocusReport& report);

/// Generates and returns the touches of watched systems, inquiries and
/// statements. Throws UNKNOWN-WATCH-ID.
std::vector<GenerationEvent> conditional_trace(const Grammar& grammar, const SemanticGraph& graph,
                                               const std::set<std::string>& watch);

void save_trace(const std::filesystem::path& path, const GenerationResult& result);
GenerationResult load_trace(const std::filesystem::path& path);

}  // namespace latticegen
