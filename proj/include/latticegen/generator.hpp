#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latticegen/network.hpp"
#include "latticegen/resources.hpp"
#include "latticegen/semantics.hpp"

namespace latticegen {

/// One entry of a selection expression.
struct Selection {
    std::string system;  // empty for the root feature
    std::string feature;
    std::string origin;  // root | preselected | chooser | default
    ChooserOutcome outcome;
    std::string signature;  // the chosen feature's realization statements

    bool operator==(const Selection&) const = default;
};

/// A realization statement instance with its source in the lattice.
struct AppliedStatement {
    RealizationStatement statement;
    std::string system;
    std::string feature;

    bool operator==(const AppliedStatement&) const = default;
};

/// Conflated functions and what fills them.
struct FunctionBundle {
    enum class Kind { Pending, Unit, Lexical, Covert };

    std::vector<std::string> functions;  // insertion order
    std::vector<std::size_t> statements;  // constraint indices touching the bundle
    FeatureSet preselections;
    std::vector<std::size_t> lexical;  // Classify/OutClassify/Lexify constraint indices
    Kind kind = Kind::Pending;
    std::string entity;
    std::string subunit;  // Kind::Unit
    std::string lexeme;   // Kind::Lexical, empty when none was found
    FeatureSet morph;
    std::string text;

    std::string name() const;  // "Subject/Agent"
    bool has_function(std::string_view fn) const;
    bool operator==(const FunctionBundle&) const = default;
};

/// before precedes after; statement is the constraint index (Order,
/// OrderAtFront or OrderAtEnd).
struct Precedence {
    std::size_t before = 0;
    std::size_t after = 0;
    std::size_t statement = 0;

    bool operator==(const Precedence&) const = default;
};

struct UnitStructure {
    std::vector<FunctionBundle> bundles;
    std::vector<Precedence> precedence;
    std::vector<std::size_t> order;  // linearized bundle indices

    const FunctionBundle* bundle_for(std::string_view fn) const;
    std::optional<std::size_t> index_of(std::string_view fn) const;
    bool operator==(const UnitStructure&) const = default;
};

struct UnitRecord {
    std::string id;  // structural path: clause, clause/Subject, ...
    std::string entity;
    std::vector<Selection> selections;
    std::vector<AppliedStatement> constraints;
    UnitStructure structure;
    std::size_t depth = 0;

    FeatureSet features() const;
    const Selection* selection_for(std::string_view system) const;
    bool operator==(const UnitRecord&) const = default;
};

struct DecisionEvent {
    std::size_t sequence = 0;
    std::string unit;
    std::string system;
    std::string feature;
    std::vector<InquiryStep> path;
    std::vector<std::string> statements;

    bool operator==(const DecisionEvent&) const = default;
};

struct Token {
    std::string text;
    std::string unit;
    std::size_t bundle = 0;

    bool operator==(const Token&) const = default;
};

struct GenerationResult {
    std::string text;
    std::vector<Token> tokens;
    std::vector<UnitRecord> units;  // generation order, root first
    std::vector<DecisionEvent> events;
    bool complete = true;
    std::string reason_code;
    std::string reason;
    std::vector<std::string> warnings;
    std::string language;
    std::string version;
    std::size_t chooser_invocations = 0;

    const UnitRecord* unit(std::string_view id) const;
    std::size_t fired_systems() const;
    bool operator==(const GenerationResult&) const = default;
};

/// Touches during generation, for conditional tracing.
struct GenerationEvent {
    enum class Kind { SystemFired, InquiryEvaluated, StatementApplied };
    Kind kind = Kind::SystemFired;
    std::string unit;
    std::string object;  // system name, inquiry name or statement id
    std::string detail;  // chosen feature, answer, or description
};

using GenerationObserver = std::function<void(const GenerationEvent&)>;

struct TraversalLog {
    std::vector<GenerationEvent> events;
    std::size_t chooser_invocations = 0;
};

/// Lattice traversal for one unit. The initial features go into the
/// selection expression first and resolve their systems without firing
/// them. Throws CONTRADICTORY-PRESELECTION, UNKNOWN-FEATURE, CHOOSER-FEATURE
/// and chooser errors.
UnitRecord traverse_unit(const Grammar& grammar, const std::vector<std::string>& init, const std::string& entity,
                         const SemanticGraph& graph, TraversalLog* log = nullptr);

/// Realization statements of the given features, in selection order.
std::vector<AppliedStatement> constraints_for(const Grammar& grammar, std::span<const Selection> selections);

/// Inserts, then conflations, then everything else. Throws
/// CONFLATE-UNKNOWN-FUNCTION and UNKNOWN-FUNCTION.
UnitStructure apply_realizations(std::span<const AppliedStatement> constraints);

/// Topological order, ties by bundle index. Throws ORDER-CYCLE naming the
/// shortest cycle.
std::vector<std::size_t> linearize(const std::vector<FunctionBundle>& bundles, std::span<const Precedence> facts);

/// Lexify wins; otherwise class filter, then the concept preference (when
/// given), then the smallest name. Throws NO-CANDIDATE.
const Lexeme& select_lexeme(std::span<const Lexeme> lexicon, std::span<const RealizationStatement> constraints,
                            const std::string* preference = nullptr);

/// Form keyed by the largest subset of `morph`; base form otherwise.
std::string inflect(const Lexeme& lexeme, const FeatureSet& morph);

GenerationResult generate(const Grammar& grammar, const SemanticGraph& graph, const GenerationObserver& observer = {});
GenerationResult generate(const ResourceSet& res, const SemanticGraph& graph, const std::string& language,
                          const GenerationObserver& observer = {});

inline constexpr std::size_t max_unit_depth = 16;

json to_json(const DecisionEvent& event);
json to_json(const GenerationResult& result);
GenerationResult result_from_json(const json& j);

}  // namespace latticegen
