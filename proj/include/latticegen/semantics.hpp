#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latticegen/network.hpp"

namespace latticegen {

// ---------------------------------------------------------------------------
// Semantic input
// ---------------------------------------------------------------------------

/// Attribute value: an atom, or a reference to another entity.
struct SemanticValue {
    std::string text;
    bool is_ref = false;

    bool operator==(const SemanticValue&) const = default;
};

struct Entity {
    std::string id;
    std::string type;
    std::vector<std::pair<std::string, SemanticValue>> attributes;  // authored order

    const SemanticValue* attribute(std::string_view role) const;
    bool operator==(const Entity&) const = default;
};

/// Typed term graph. References may be cyclic.
class SemanticGraph {
public:
    const std::string& root() const { return root_; }
    const std::map<std::string, Entity>& entities() const { return entities_; }
    const Entity* find(std::string_view id) const;
    const Entity& entity(std::string_view id) const;

    /// Follow `path` (role names) from entity `from`; nullopt when a step is
    /// missing or lands on an atom.
    std::optional<std::string> resolve(std::string_view from, std::span<const std::string> path) const;

    bool operator==(const SemanticGraph&) const = default;

private:
    friend SemanticGraph parse_spl(std::string_view);
    std::string root_;
    std::map<std::string, Entity> entities_;
};

/// Parses `(id / type :role value ...)` with nesting, `#id` references, bare
/// or double-quoted atoms and `;` comments. Throws SYNTAX-ERROR (with
/// line:column) and UNRESOLVED-REF.
SemanticGraph parse_spl(std::string_view text);

/// Writes a graph back in SPL; nested entities appear at their first
/// reference, later references use #id.
std::string to_spl(const SemanticGraph& graph);

// ---------------------------------------------------------------------------
// Inquiries
// ---------------------------------------------------------------------------

/// A test on the entity bound to `param`. All present fields must hold:
/// type membership, attribute presence, attribute value.
struct InquiryCondition {
    std::string param;
    std::vector<std::string> types;
    std::string attribute;
    std::optional<std::string> value;

    bool operator==(const InquiryCondition&) const = default;
};

struct InquiryRule {
    std::vector<InquiryCondition> when;
    std::string answer;

    bool operator==(const InquiryRule&) const = default;
};

struct Inquiry {
    std::string name;
    std::vector<std::string> parameters;
    std::vector<std::string> answers;
    std::vector<InquiryRule> rules;
    std::string default_answer;
    LanguageSet languages;

    bool operator==(const Inquiry&) const = default;
};

using Bindings = std::map<std::string, std::string>;  // parameter -> entity id

/// First matching rule wins, else the default. Throws UNBOUND-PARAMETER.
std::string evaluate_inquiry(const Inquiry& inquiry, const Bindings& bindings, const SemanticGraph& graph);

ValidationReport validate_inquiry(const Inquiry& inquiry);

// ---------------------------------------------------------------------------
// Choosers
// ---------------------------------------------------------------------------

struct ChooserAction {
    enum class Kind { Choose, Identify };
    Kind kind = Kind::Choose;
    std::string target;             // feature (Choose) or function (Identify)
    std::vector<std::string> path;  // Identify: roles from the unit's entity

    bool operator==(const ChooserAction&) const = default;
};

/// Internal node: ask `inquiry` with parameters bound by role paths, then
/// follow the branch labelled with the answer. Leaf: ordered actions.
struct ChooserNode {
    std::string inquiry;
    std::map<std::string, std::vector<std::string>> bindings;
    std::vector<std::string> answers;    // branch labels
    std::vector<ChooserNode> children;   // parallel to answers
    std::vector<ChooserAction> actions;  // leaf only

    bool is_leaf() const { return inquiry.empty(); }
    const ChooserNode* branch(std::string_view answer) const;
    bool operator==(const ChooserNode&) const = default;
};

struct Chooser {
    std::string name;
    ChooserNode tree;
    LanguageSet languages;

    bool operator==(const Chooser&) const = default;
};

struct InquiryStep {
    std::string inquiry;
    Bindings bindings;
    std::string answer;

    bool operator==(const InquiryStep&) const = default;
};

struct ChooserOutcome {
    std::string feature;
    std::vector<std::pair<std::string, std::string>> identifications;  // function -> entity
    std::vector<InquiryStep> path;
    bool defaulted = false;
    std::vector<std::string> warnings;

    bool operator==(const ChooserOutcome&) const = default;
};

using InquiryLookup = std::function<const Inquiry*(std::string_view)>;

struct ChooserEnv {
    const SemanticGraph& graph;
    std::string entity;  // the current unit's entity
    InquiryLookup inquiries;
    std::function<void(const InquiryStep&)> on_inquiry = {};
};

/// Walks the chooser tree. A null chooser is the default chooser: first
/// output, empty path. Throws UNBOUND-PARAMETER and UNKNOWN-INQUIRY.
ChooserOutcome run_chooser(const Chooser* chooser, const System& system, const ChooserEnv& env);

/// Total branching, exactly one Choose per leaf, chosen features are outputs
/// of `system`, inquiries exist and parameters are bound.
ValidationReport validate_chooser(const Chooser& chooser, const System& system, const InquiryLookup& inquiries);

}  // namespace latticegen
