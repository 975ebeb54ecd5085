#include "latticegen/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "latticegen/error.hpp"

namespace latticegen {

const SemanticValue* Entity::attribute(std::string_view role) const {
    for (const auto& [r, v] : attributes)
        if (r == role) return &v;
    return nullptr;
}

const Entity* SemanticGraph::find(std::string_view id) const {
    auto it = entities_.find(std::string(id));
    return it == entities_.end() ? nullptr : &it->second;
}

const Entity& SemanticGraph::entity(std::string_view id) const {
    if (const Entity* e = find(id)) return *e;
    throw Error("UNRESOLVED-REF", "no entity '" + std::string(id) + "'");
}

std::optional<std::string> SemanticGraph::resolve(std::string_view from, std::span<const std::string> path) const {
    const Entity* cur = find(from);
    if (!cur) return std::nullopt;
    for (const auto& role : path) {
        const SemanticValue* v = cur->attribute(role);
        if (!v || !v->is_ref) return std::nullopt;
        cur = find(v->text);
        if (!cur) return std::nullopt;
    }
    return cur->id;
}

// ---------------------------------------------------------------------------
// SPL reader
// ---------------------------------------------------------------------------

namespace {

class SplReader {
public:
    explicit SplReader(std::string_view text) : text_(text) {}

    void read(std::map<std::string, Entity>& entities, std::string& root) {
        skip_space();
        if (at_end()) fail("empty input");
        root = read_entity(entities);
        skip_space();
        if (!at_end()) fail("unexpected text after the root term");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::vector<std::pair<std::string, std::string>> refs_;  // (entity, target)

public:
    const std::vector<std::pair<std::string, std::string>>& refs() const { return refs_; }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("SYNTAX-ERROR", std::to_string(line_) + ":" + std::to_string(col_) + ": " + what);
    }

    void skip_space() {
        while (!at_end()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == ';') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    static bool symbol_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"' && c != ';' &&
               c != ':' && c != '#' && c != '/';
    }

    std::string read_symbol() {
        std::string out;
        while (!at_end() && symbol_char(peek())) out += advance();
        if (out.empty()) fail(at_end() ? "unexpected end of input" : std::string("unexpected '") + peek() + "'");
        return out;
    }

    void expect(char c) {
        skip_space();
        if (at_end()) fail(std::string("expected '") + c + "' before end of input");
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string read_entity(std::map<std::string, Entity>& entities) {
        expect('(');
        skip_space();
        Entity e;
        e.id = read_symbol();
        expect('/');
        skip_space();
        e.type = read_symbol();
        if (entities.contains(e.id)) fail("entity '" + e.id + "' defined twice");
        entities.emplace(e.id, Entity{e.id, e.type, {}});
        std::set<std::string> roles;
        for (;;) {
            skip_space();
            if (at_end()) fail("unbalanced parenthesis: missing ')'");
            if (peek() == ')') {
                advance();
                break;
            }
            if (peek() != ':') fail("expected ':role' or ')'");
            advance();
            std::string role = read_symbol();
            if (!roles.insert(role).second) fail("role ':" + role + "' repeated");
            skip_space();
            if (at_end()) fail("missing value for ':" + role + "'");
            SemanticValue value;
            if (peek() == '(') {
                value = {read_entity(entities), true};
            } else if (peek() == '#') {
                advance();
                value = {read_symbol(), true};
                refs_.emplace_back(e.id, value.text);
            } else if (peek() == '"') {
                advance();
                std::string s;
                while (!at_end() && peek() != '"') s += advance();
                if (at_end()) fail("unterminated string");
                advance();
                value = {s, false};
            } else {
                value = {read_symbol(), false};
            }
            entities[e.id].attributes.emplace_back(role, value);
        }
        return e.id;
    }
};

}  // namespace

SemanticGraph parse_spl(std::string_view text) {
    SemanticGraph graph;
    SplReader reader(text);
    reader.read(graph.entities_, graph.root_);
    for (const auto& [from, target] : reader.refs()) {
        if (!graph.entities_.contains(target))
            throw Error("UNRESOLVED-REF", "entity '" + from + "' refers to unknown #" + target);
    }
    return graph;
}

static bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    return std::ranges::any_of(s, [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == ':' ||
               c == '#' || c == '/' || c == '"';
    });
}

static void write_entity(const SemanticGraph& g, const Entity& e, std::set<std::string>& written, std::string& out) {
    written.insert(e.id);
    out += "(" + e.id + " / " + e.type;
    for (const auto& [role, v] : e.attributes) {
        out += " :" + role + " ";
        if (v.is_ref) {
            if (written.contains(v.text)) {
                out += "#" + v.text;
            } else {
                write_entity(g, g.entity(v.text), written, out);
            }
        } else {
            out += needs_quotes(v.text) ? "\"" + v.text + "\"" : v.text;
        }
    }
    out += ")";
}

std::string to_spl(const SemanticGraph& graph) {
    if (graph.root().empty()) return {};
    std::string out;
    std::set<std::string> written;
    write_entity(graph, graph.entity(graph.root()), written, out);
    return out;
}

// ---------------------------------------------------------------------------
// Inquiries
// ---------------------------------------------------------------------------

static bool holds(const InquiryCondition& cond, const Entity& e) {
    if (!cond.types.empty() && std::ranges::find(cond.types, e.type) == cond.types.end()) return false;
    if (!cond.attribute.empty()) {
        const SemanticValue* v = e.attribute(cond.attribute);
        if (!v) return false;
        if (cond.value && (v->is_ref || v->text != *cond.value)) return false;
    }
    return true;
}

std::string evaluate_inquiry(const Inquiry& inquiry, const Bindings& bindings, const SemanticGraph& graph) {
    for (const auto& p : inquiry.parameters) {
        auto it = bindings.find(p);
        if (it == bindings.end() || !graph.find(it->second))
            throw Error("UNBOUND-PARAMETER", inquiry.name + ": parameter '" + p + "' is not bound");
    }
    for (const auto& rule : inquiry.rules) {
        bool ok = std::ranges::all_of(rule.when, [&](const InquiryCondition& c) {
            auto it = bindings.find(c.param);
            if (it == bindings.end())
                throw Error("UNBOUND-PARAMETER", inquiry.name + ": parameter '" + c.param + "' is not bound");
            return holds(c, graph.entity(it->second));
        });
        if (ok) return rule.answer;
    }
    return inquiry.default_answer;
}

ValidationReport validate_inquiry(const Inquiry& inquiry) {
    ValidationReport r;
    auto known = [&](const std::string& a) { return std::ranges::find(inquiry.answers, a) != inquiry.answers.end(); };
    if (inquiry.answers.size() < 2) r.error("FEW-ANSWERS", inquiry.name, "an inquiry needs at least two answers");
    if (!known(inquiry.default_answer))
        r.error("BAD-ANSWER", inquiry.name, "default '" + inquiry.default_answer + "' is not a declared answer");
    for (const auto& rule : inquiry.rules) {
        if (!known(rule.answer))
            r.error("BAD-ANSWER", inquiry.name, "rule answer '" + rule.answer + "' is not a declared answer");
        for (const auto& c : rule.when)
            if (std::ranges::find(inquiry.parameters, c.param) == inquiry.parameters.end())
                r.error("UNKNOWN-PARAMETER", inquiry.name, "rule tests undeclared parameter '" + c.param + "'");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Choosers
// ---------------------------------------------------------------------------

const ChooserNode* ChooserNode::branch(std::string_view answer) const {
    for (std::size_t i = 0; i < answers.size(); ++i)
        if (answers[i] == answer) return &children[i];
    return nullptr;
}

ChooserOutcome run_chooser(const Chooser* chooser, const System& system, const ChooserEnv& env) {
    ChooserOutcome out;
    if (!chooser) {
        if (system.outputs.empty()) throw Error("EMPTY-OUTPUTS", system.name);
        out.feature = system.outputs.front().name;
        out.defaulted = true;
        return out;
    }
    const ChooserNode* node = &chooser->tree;
    while (!node->is_leaf()) {
        const Inquiry* inq = env.inquiries ? env.inquiries(node->inquiry) : nullptr;
        if (!inq) throw Error("UNKNOWN-INQUIRY", chooser->name + " asks unknown inquiry '" + node->inquiry + "'");
        Bindings bindings;
        for (const auto& [param, path] : node->bindings) {
            auto target = env.graph.resolve(env.entity, path);
            if (!target)
                throw Error("UNBOUND-PARAMETER", chooser->name + ": cannot bind '" + param + "' for " + inq->name);
            bindings[param] = *target;
        }
        std::string answer = evaluate_inquiry(*inq, bindings, env.graph);
        InquiryStep step{inq->name, bindings, answer};
        if (env.on_inquiry) env.on_inquiry(step);
        out.path.push_back(std::move(step));
        node = node->branch(answer);
        if (!node) throw Error("MISSING-BRANCH", chooser->name + " has no branch for answer '" + answer + "'");
    }
    for (const auto& action : node->actions) {
        if (action.kind == ChooserAction::Kind::Choose) {
            out.feature = action.target;
            continue;
        }
        auto target = env.graph.resolve(env.entity, action.path);
        if (!target) {
            out.warnings.push_back("Identify(" + action.target + ") path unresolved; using the unit's entity");
            target = env.entity;
        }
        out.identifications.emplace_back(action.target, *target);
    }
    return out;
}

static void check_node(const ChooserNode& node, const Chooser& chooser, const System& system,
                       const InquiryLookup& inquiries, ValidationReport& r) {
    if (node.is_leaf()) {
        auto chooses = std::ranges::count_if(
            node.actions, [](const ChooserAction& a) { return a.kind == ChooserAction::Kind::Choose; });
        if (chooses != 1)
            r.error("LEAF-CHOOSE", chooser.name, "a leaf must contain exactly one Choose");
        for (const auto& a : node.actions)
            if (a.kind == ChooserAction::Kind::Choose && !system.output(a.target))
                r.error("CHOOSER-FEATURE", chooser.name,
                        "chooses '" + a.target + "', which is not an output of " + system.name);
        return;
    }
    const Inquiry* inq = inquiries ? inquiries(node.inquiry) : nullptr;
    if (!inq) {
        r.error("UNKNOWN-INQUIRY", chooser.name, "asks unknown inquiry '" + node.inquiry + "'");
    } else {
        for (const auto& p : inq->parameters)
            if (!node.bindings.contains(p))
                r.error("UNBOUND-PARAMETER", chooser.name, node.inquiry + " parameter '" + p + "' has no binding");
        for (const auto& a : inq->answers)
            if (!node.branch(a))
                r.error("MISSING-BRANCH", chooser.name, node.inquiry + " answer '" + a + "' has no branch");
        for (const auto& a : node.answers)
            if (std::ranges::find(inq->answers, a) == inq->answers.end())
                r.error("BAD-ANSWER", chooser.name, "branch '" + a + "' is not an answer of " + node.inquiry);
    }
    for (const auto& child : node.children) check_node(child, chooser, system, inquiries, r);
}

ValidationReport validate_chooser(const Chooser& chooser, const System& system, const InquiryLookup& inquiries) {
    ValidationReport r;
    check_node(chooser.tree, chooser, system, inquiries, r);
    return r;
}

}  // namespace latticegen
