#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace latticegen {

using LanguageSet = std::set<std::string>;
using FeatureSet = std::set<std::string, std::less<>>;

// ---------------------------------------------------------------------------
// Entry conditions
// ---------------------------------------------------------------------------

/// Boolean tree over feature names (AND/OR only, no negation).
struct EntryCondition {
    enum class Kind { True, Feature, And, Or };

    Kind kind = Kind::True;
    std::string feature;                  // Kind::Feature
    std::vector<EntryCondition> operands;  // Kind::And / Kind::Or

    static EntryCondition always() { return {}; }
    static EntryCondition leaf(std::string name);
    static EntryCondition all_of(std::vector<EntryCondition> ops);
    static EntryCondition any_of(std::vector<EntryCondition> ops);

    bool operator==(const EntryCondition&) const = default;
};

/// Systemic notation: TRUE, feature, AND(a, b), OR(a, AND(b, c)).
std::string to_string(const EntryCondition& cond);

/// Leaves in left-to-right order, duplicates kept.
std::vector<std::string> condition_features(const EntryCondition& cond);

bool eval_entry_condition(const EntryCondition& cond, const FeatureSet& selected);

/// Disjunction of conjunctions, operands sorted, duplicate and absorbed
/// conjunctions removed.
EntryCondition normalize(const EntryCondition& cond);

// ---------------------------------------------------------------------------
// Realization statements, features, systems, lexemes
// ---------------------------------------------------------------------------

enum class RealizationOp {
    Insert,
    Conflate,
    Order,
    OrderAtFront,
    OrderAtEnd,
    Preselect,
    Classify,
    OutClassify,
    Lexify,
};

std::string_view op_name(RealizationOp op);
std::optional<RealizationOp> parse_op(std::string_view name);

/// Argument layout by operator:
///   Insert(F) Conflate(F1,F2) Order(F1,F2) OrderAtFront(F) OrderAtEnd(F)
///   Preselect(F, feature...) Classify(F, class) OutClassify(F, class)
///   Lexify(F, lexeme)
struct RealizationStatement {
    std::string id;
    RealizationOp op = RealizationOp::Insert;
    std::vector<std::string> args;
    LanguageSet languages;

    /// Grammatical function arguments (first one, or first two for
    /// Conflate and Order).
    std::vector<std::string> functions() const;
    /// Feature arguments of a Preselect; empty otherwise.
    std::vector<std::string> preselected() const;
    /// e.g. "Order(Subject, Finite)".
    std::string describe() const;

    bool operator==(const RealizationStatement&) const = default;
};

/// One output alternative of a system.
struct Feature {
    std::string name;
    LanguageSet languages;
    std::vector<RealizationStatement> realizations;

    bool operator==(const Feature&) const = default;
};

/// One disjunction of the lattice.
struct System {
    std::string name;
    EntryCondition entry;
    std::vector<Feature> outputs;
    std::string region;
    LanguageSet languages;
    std::string chooser;  // empty: default chooser

    const Feature* output(std::string_view feature) const;

    bool operator==(const System&) const = default;
};

struct LexicalForm {
    FeatureSet features;  // empty set is the base form
    std::string text;

    bool operator==(const LexicalForm&) const = default;
};

struct Lexeme {
    std::string name;
    std::string spelling;
    std::set<std::string> classes;
    std::vector<LexicalForm> forms;
    LanguageSet languages;
    std::vector<std::string> concepts;  // empty means {name}

    bool expresses(std::string_view meaning) const;

    bool operator==(const Lexeme&) const = default;
};

// ---------------------------------------------------------------------------
// Validation reports
// ---------------------------------------------------------------------------

struct Diagnostic {
    std::string code;
    std::string object;
    std::string message;

    auto operator<=>(const Diagnostic&) const = default;
};

struct ValidationReport {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    bool ok() const { return errors.empty(); }
    void error(std::string code, std::string object, std::string message);
    void warn(std::string code, std::string object, std::string message);
    void append(const ValidationReport& other);
    std::size_t count(std::string_view code) const;
};

// ---------------------------------------------------------------------------
// The indexed lattice
// ---------------------------------------------------------------------------

/// Immutable, indexed view of a set of systems under one root feature.
/// Construction never throws; malformed input is reported by
/// validate_network().
class SystemNetwork {
public:
    SystemNetwork() = default;
    SystemNetwork(std::string root_feature, std::vector<System> systems);

    const std::string& root_feature() const { return root_; }
    std::span<const System> systems() const { return systems_; }

    const System* find_system(std::string_view name) const;
    /// System owning `feature`, nullptr for the root feature or unknown names.
    const System* owner_of(std::string_view feature) const;
    const Feature* find_feature(std::string_view feature) const;
    bool has_feature(std::string_view feature) const;

    /// Position in the global traversal order (topological, lexicographic
    /// tie-break; systems caught in cycles come last).
    std::size_t rank(const System& system) const;

    /// Systems whose entry condition mentions any output of `system`.
    std::vector<const System*> dependents(const System& system) const;
    /// Systems owning the features in `system`'s entry condition.
    std::vector<const System*> prerequisites(const System& system) const;

private:
    std::string root_;
    std::vector<System> systems_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::unordered_map<std::string, std::size_t> owner_;
    std::vector<std::size_t> rank_;
};

ValidationReport validate_network(const SystemNetwork& net, std::span<const Lexeme> lexicon);

/// Systems with a satisfied entry condition that have not fired, in
/// traversal order. Nothing is entered unless the root feature is selected.
std::vector<const System*> entered_systems(const SystemNetwork& net,
                                           const FeatureSet& selected,
                                           const std::set<std::string, std::less<>>& fired);

/// Normalized entry condition of `system`. Throws UNKNOWN-SYSTEM.
EntryCondition paradigmatic_context(const SystemNetwork& net, std::string_view system);

// ---------------------------------------------------------------------------
// Lattice fragments
// ---------------------------------------------------------------------------

/// Pointer from a fragment to a feature owned outside it.
struct BoundaryStub {
    std::string feature;
    std::string owner;         // owning system
    std::string owner_region;
    std::string referenced_by;  // first system in the fragment referring to it
    std::string kind;           // "entry" or "preselect"

    bool operator==(const BoundaryStub&) const = default;
};

/// A selected subregion of the lattice, used by every graphical view.
struct LatticeFragment {
    std::string title;
    std::vector<System> systems;
    std::vector<BoundaryStub> stubs;
    std::set<std::string> marked;               // highlighted features
    std::map<std::string, std::string> labels;  // object name -> label

    bool operator==(const LatticeFragment&) const = default;
};

inline constexpr std::size_t unbounded_radius = std::numeric_limits<std::size_t>::max();

/// Stubs for every feature referenced (entry or preselect) by the fragment's
/// systems and owned outside it. One stub per feature.
std::vector<BoundaryStub> boundary_stubs(const SystemNetwork& net, std::span<const System> members);

/// Systems within `radius` dependency hops of `focus` (a system or a
/// feature). Throws UNKNOWN-FOCUS.
LatticeFragment lattice_subgraph(const SystemNetwork& net, std::string_view focus, std::size_t radius);

}  // namespace latticegen
