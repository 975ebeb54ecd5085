#include "latticegen/network.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

#include "latticegen/error.hpp"

namespace latticegen {

// ---------------------------------------------------------------------------
// EntryCondition
// ---------------------------------------------------------------------------

EntryCondition EntryCondition::leaf(std::string name) {
    EntryCondition c;
    c.kind = Kind::Feature;
    c.feature = std::move(name);
    return c;
}

EntryCondition EntryCondition::all_of(std::vector<EntryCondition> ops) {
    EntryCondition c;
    c.kind = Kind::And;
    c.operands = std::move(ops);
    return c;
}

EntryCondition EntryCondition::any_of(std::vector<EntryCondition> ops) {
    EntryCondition c;
    c.kind = Kind::Or;
    c.operands = std::move(ops);
    return c;
}

std::string to_string(const EntryCondition& cond) {
    switch (cond.kind) {
    case EntryCondition::Kind::True:
        return "TRUE";
    case EntryCondition::Kind::Feature:
        return cond.feature;
    case EntryCondition::Kind::And:
    case EntryCondition::Kind::Or: {
        std::string out = cond.kind == EntryCondition::Kind::And ? "AND(" : "OR(";
        for (std::size_t i = 0; i < cond.operands.size(); ++i) {
            if (i) out += ", ";
            out += to_string(cond.operands[i]);
        }
        return out + ")";
    }
    }
    return {};
}

static void collect(const EntryCondition& cond, std::vector<std::string>& out) {
    if (cond.kind == EntryCondition::Kind::Feature) out.push_back(cond.feature);
    for (const auto& op : cond.operands) collect(op, out);
}

std::vector<std::string> condition_features(const EntryCondition& cond) {
    std::vector<std::string> out;
    collect(cond, out);
    return out;
}

bool eval_entry_condition(const EntryCondition& cond, const FeatureSet& selected) {
    switch (cond.kind) {
    case EntryCondition::Kind::True:
        return true;
    case EntryCondition::Kind::Feature:
        return selected.contains(cond.feature);
    case EntryCondition::Kind::And:
        return std::ranges::all_of(cond.operands,
                                   [&](const auto& op) { return eval_entry_condition(op, selected); });
    case EntryCondition::Kind::Or:
        return std::ranges::any_of(cond.operands,
                                   [&](const auto& op) { return eval_entry_condition(op, selected); });
    }
    return false;
}

using Conjunction = std::set<std::string>;
using Dnf = std::vector<Conjunction>;

static Dnf to_dnf(const EntryCondition& cond) {
    switch (cond.kind) {
    case EntryCondition::Kind::True:
        return {Conjunction{}};
    case EntryCondition::Kind::Feature:
        return {Conjunction{cond.feature}};
    case EntryCondition::Kind::Or: {
        Dnf out;
        for (const auto& op : cond.operands) {
            auto part = to_dnf(op);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    case EntryCondition::Kind::And: {
        Dnf out{Conjunction{}};
        for (const auto& op : cond.operands) {
            Dnf next;
            for (const auto& left : out)
                for (const auto& right : to_dnf(op)) {
                    Conjunction merged = left;
                    merged.insert(right.begin(), right.end());
                    next.push_back(std::move(merged));
                }
            out = std::move(next);
        }
        return out;
    }
    }
    return {};
}

EntryCondition normalize(const EntryCondition& cond) {
    Dnf dnf = to_dnf(cond);
    std::ranges::sort(dnf);
    dnf.erase(std::unique(dnf.begin(), dnf.end()), dnf.end());
    // absorption: drop any conjunction that strictly contains another
    Dnf kept;
    for (const auto& c : dnf) {
        bool absorbed = std::ranges::any_of(dnf, [&](const Conjunction& other) {
            return other != c && std::ranges::includes(c, other);
        });
        if (!absorbed) kept.push_back(c);
    }
    if (kept.empty()) return EntryCondition::any_of({});
    std::vector<EntryCondition> disjuncts;
    for (const auto& c : kept) {
        if (c.empty()) return EntryCondition::always();
        if (c.size() == 1) {
            disjuncts.push_back(EntryCondition::leaf(*c.begin()));
            continue;
        }
        std::vector<EntryCondition> leaves;
        for (const auto& f : c) leaves.push_back(EntryCondition::leaf(f));
        disjuncts.push_back(EntryCondition::all_of(std::move(leaves)));
    }
    if (disjuncts.size() == 1) return disjuncts.front();
    return EntryCondition::any_of(std::move(disjuncts));
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

namespace {
constexpr std::pair<RealizationOp, std::string_view> op_names[] = {
    {RealizationOp::Insert, "insert"},
    {RealizationOp::Conflate, "conflate"},
    {RealizationOp::Order, "order"},
    {RealizationOp::OrderAtFront, "order-at-front"},
    {RealizationOp::OrderAtEnd, "order-at-end"},
    {RealizationOp::Preselect, "preselect"},
    {RealizationOp::Classify, "classify"},
    {RealizationOp::OutClassify, "outclassify"},
    {RealizationOp::Lexify, "lexify"},
};

constexpr std::string_view op_display[] = {
    "Insert", "Conflate", "Order", "OrderAtFront", "OrderAtEnd",
    "Preselect", "Classify", "OutClassify", "Lexify",
};
}  // namespace

std::string_view op_name(RealizationOp op) {
    for (const auto& [o, name] : op_names)
        if (o == op) return name;
    return "?";
}

std::optional<RealizationOp> parse_op(std::string_view name) {
    for (const auto& [o, n] : op_names)
        if (n == name) return o;
    return std::nullopt;
}

std::vector<std::string> RealizationStatement::functions() const {
    if (args.empty()) return {};
    if ((op == RealizationOp::Conflate || op == RealizationOp::Order) && args.size() >= 2)
        return {args[0], args[1]};
    return {args[0]};
}

std::vector<std::string> RealizationStatement::preselected() const {
    if (op != RealizationOp::Preselect || args.size() < 2) return {};
    return {args.begin() + 1, args.end()};
}

std::string RealizationStatement::describe() const {
    std::string out{op_display[static_cast<std::size_t>(op)]};
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i];
    }
    return out + ')';
}

const Feature* System::output(std::string_view feature) const {
    for (const auto& f : outputs)
        if (f.name == feature) return &f;
    return nullptr;
}

bool Lexeme::expresses(std::string_view meaning) const {
    if (concepts.empty()) return name == meaning;
    return std::ranges::find(concepts, meaning) != concepts.end();
}

// ---------------------------------------------------------------------------
// ValidationReport
// ---------------------------------------------------------------------------

void ValidationReport::error(std::string code, std::string object, std::string message) {
    errors.push_back({std::move(code), std::move(object), std::move(message)});
}

void ValidationReport::warn(std::string code, std::string object, std::string message) {
    warnings.push_back({std::move(code), std::move(object), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
    for (const auto& d : other.errors)
        if (std::ranges::find(errors, d) == errors.end()) errors.push_back(d);
    for (const auto& d : other.warnings)
        if (std::ranges::find(warnings, d) == warnings.end()) warnings.push_back(d);
}

std::size_t ValidationReport::count(std::string_view code) const {
    return static_cast<std::size_t>(
        std::ranges::count_if(errors, [&](const Diagnostic& d) { return d.code == code; }));
}

// ---------------------------------------------------------------------------
// SystemNetwork
// ---------------------------------------------------------------------------

SystemNetwork::SystemNetwork(std::string root_feature, std::vector<System> systems)
    : root_(std::move(root_feature)), systems_(std::move(systems)) {
    for (std::size_t i = 0; i < systems_.size(); ++i) {
        by_name_.emplace(systems_[i].name, i);
        for (const auto& f : systems_[i].outputs) owner_.emplace(f.name, i);
    }

    // Kahn's algorithm with a lexicographic min-heap over system names.
    const std::size_t n = systems_.size();
    std::vector<std::set<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::size_t> preds;
        for (const auto& f : condition_features(systems_[i].entry)) {
            auto it = owner_.find(f);
            if (it != owner_.end()) preds.insert(it->second);
        }
        for (auto p : preds) {
            if (succ[p].insert(i).second) ++indegree[i];
        }
    }
    auto later = [&](std::size_t a, std::size_t b) {
        return std::tie(systems_[a].name, a) > std::tie(systems_[b].name, b);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);
    rank_.assign(n, n);
    std::size_t next = 0;
    while (!ready.empty()) {
        auto i = ready.top();
        ready.pop();
        rank_[i] = next++;
        for (auto s : succ[i])
            if (--indegree[s] == 0) ready.push(s);
    }
    std::vector<std::size_t> stuck;
    for (std::size_t i = 0; i < n; ++i)
        if (rank_[i] == n) stuck.push_back(i);
    std::ranges::sort(stuck, [&](auto a, auto b) { return systems_[a].name < systems_[b].name; });
    for (auto i : stuck) rank_[i] = next++;
}

const System* SystemNetwork::find_system(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &systems_[it->second];
}

const System* SystemNetwork::owner_of(std::string_view feature) const {
    auto it = owner_.find(std::string(feature));
    return it == owner_.end() ? nullptr : &systems_[it->second];
}

const Feature* SystemNetwork::find_feature(std::string_view feature) const {
    const System* s = owner_of(feature);
    return s ? s->output(feature) : nullptr;
}

bool SystemNetwork::has_feature(std::string_view feature) const {
    return feature == root_ || owner_of(feature) != nullptr;
}

std::size_t SystemNetwork::rank(const System& system) const {
    return rank_[static_cast<std::size_t>(&system - systems_.data())];
}

std::vector<const System*> SystemNetwork::dependents(const System& system) const {
    std::vector<const System*> out;
    for (const auto& s : systems_) {
        for (const auto& f : condition_features(s.entry)) {
            if (system.output(f)) {
                out.push_back(&s);
                break;
            }
        }
    }
    return out;
}

std::vector<const System*> SystemNetwork::prerequisites(const System& system) const {
    std::vector<const System*> out;
    for (const auto& f : condition_features(system.entry)) {
        const System* o = owner_of(f);
        if (o && std::ranges::find(out, o) == out.end()) out.push_back(o);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

// Tarjan SCC over the entry-condition dependency graph; returns cyclic
// components (size > 1, or a self-loop).
std::vector<std::vector<std::size_t>> cyclic_components(const SystemNetwork& net) {
    auto systems = net.systems();
    const std::size_t n = systems.size();
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<bool> self_loop(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& f : condition_features(systems[i].entry)) {
            for (std::size_t j = 0; j < n; ++j) {
                if (systems[j].output(f)) {
                    adj[j].push_back(i);
                    if (i == j) self_loop[i] = true;
                }
            }
        }
    }
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    int counter = 0;
    std::function<void(std::size_t)> strong = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto w : adj[v]) {
            if (index[w] < 0) {
                strong(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            if (comp.size() > 1 || self_loop[v]) out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0) strong(v);
    return out;
}

}  // namespace

ValidationReport validate_network(const SystemNetwork& net, std::span<const Lexeme> lexicon) {
    ValidationReport report;
    auto systems = net.systems();

    if (net.root_feature().empty()) report.error("NO-ROOT", "", "no root feature declared");

    std::map<std::string, std::string> feature_owner;
    std::set<std::string> system_names;
    std::set<std::string> statement_ids;
    std::set<std::string> lexeme_names;
    for (const auto& lex : lexicon) lexeme_names.insert(lex.name);

    for (const auto& s : systems) {
        if (!system_names.insert(s.name).second)
            report.error("DUPLICATE-SYSTEM", s.name, "system declared more than once");
        if (s.outputs.empty()) report.error("EMPTY-OUTPUTS", s.name, "system has no output features");
        std::set<std::string> local;
        for (const auto& f : s.outputs) {
            if (!local.insert(f.name).second)
                report.error("DUPLICATE-OUTPUT", s.name, "output '" + f.name + "' repeated");
            else if (f.name == net.root_feature())
                report.error("DUPLICATE-FEATURE", f.name, "root feature used as a system output");
            else if (auto [it, fresh] = feature_owner.emplace(f.name, s.name); !fresh)
                report.error("DUPLICATE-FEATURE", f.name,
                             "feature owned by both " + it->second + " and " + s.name);
            if (!std::ranges::includes(s.languages, f.languages))
                report.error("LANGUAGE-SUPERSET", s.name + "/" + f.name,
                             "feature languages exceed its system's");
            for (const auto& st : f.realizations) {
                if (!statement_ids.insert(st.id).second)
                    report.error("DUPLICATE-STATEMENT", st.id, "statement id reused");
            }
        }
    }

    for (const auto& s : systems) {
        for (const auto& leaf : condition_features(s.entry)) {
            if (leaf != net.root_feature() && !feature_owner.contains(leaf))
                report.error("DANGLING-REF", s.name, "entry condition references unknown feature '" + leaf + "'");
        }
        for (const auto& f : s.outputs) {
            for (const auto& st : f.realizations) {
                std::size_t arity_min = 1;
                switch (st.op) {
                case RealizationOp::Conflate:
                case RealizationOp::Order:
                case RealizationOp::Preselect:
                case RealizationOp::Classify:
                case RealizationOp::OutClassify:
                case RealizationOp::Lexify:
                    arity_min = 2;
                    break;
                default:
                    break;
                }
                if (st.args.size() < arity_min) {
                    report.error("BAD-ARITY", st.id, st.describe() + " is missing arguments");
                    continue;
                }
                for (const auto& target : st.preselected()) {
                    if (target != net.root_feature() && !feature_owner.contains(target))
                        report.error("DANGLING-REF", st.id, "preselects unknown feature '" + target + "'");
                }
                if (st.op == RealizationOp::Lexify && !lexeme_names.contains(st.args[1]))
                    report.error("DANGLING-REF", st.id, "lexifies unknown lexeme '" + st.args[1] + "'");
            }
        }
    }

    auto cycles = cyclic_components(net);
    for (auto& comp : cycles) {
        std::vector<std::string> names;
        for (auto i : comp) names.push_back(systems[i].name);
        std::ranges::sort(names);
        std::string joined;
        for (const auto& nm : names) joined += (joined.empty() ? "" : ",") + nm;
        report.error("CYCLE", joined, "entry conditions form a dependency cycle");
    }

    // Connectivity: over-approximate the features reachable from the root by
    // assuming every reachable feature may co-occur.
    if (cycles.empty() && !net.root_feature().empty()) {
        FeatureSet reachable{net.root_feature()};
        std::set<std::string> entered;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& s : systems) {
                if (entered.contains(s.name)) continue;
                if (eval_entry_condition(s.entry, reachable)) {
                    entered.insert(s.name);
                    for (const auto& f : s.outputs) reachable.insert(f.name);
                    grew = true;
                }
            }
        }
        for (const auto& s : systems)
            if (!entered.contains(s.name))
                report.error("UNREACHABLE", s.name, "system cannot be entered from the root feature");
    }

    std::set<std::string> seen_lexemes;
    for (const auto& lex : lexicon) {
        if (!seen_lexemes.insert(lex.name).second)
            report.error("DUPLICATE-LEXEME", lex.name, "lexeme declared more than once");
        bool has_base = std::ranges::any_of(lex.forms, [](const LexicalForm& f) { return f.features.empty(); });
        if (!has_base) report.error("NO-BASE-FORM", lex.name, "lexeme has no base form");
    }
    return report;
}

std::vector<const System*> entered_systems(const SystemNetwork& net,
                                           const FeatureSet& selected,
                                           const std::set<std::string, std::less<>>& fired) {
    std::vector<const System*> out;
    if (!selected.contains(net.root_feature())) return out;
    for (const auto& s : net.systems()) {
        if (fired.contains(s.name)) continue;
        if (eval_entry_condition(s.entry, selected)) out.push_back(&s);
    }
    std::ranges::sort(out, [&](const System* a, const System* b) { return net.rank(*a) < net.rank(*b); });
    return out;
}

EntryCondition paradigmatic_context(const SystemNetwork& net, std::string_view system) {
    const System* s = net.find_system(system);
    if (!s) throw Error("UNKNOWN-SYSTEM", "no system named '" + std::string(system) + "'");
    return normalize(s->entry);
}

// ---------------------------------------------------------------------------
// Fragments
// ---------------------------------------------------------------------------

std::vector<BoundaryStub> boundary_stubs(const SystemNetwork& net, std::span<const System> members) {
    std::set<std::string> inside;
    for (const auto& s : members) inside.insert(s.name);
    std::vector<BoundaryStub> stubs;
    std::set<std::string> seen;
    auto consider = [&](const std::string& feature, const System& from, const char* kind) {
        const System* owner = net.owner_of(feature);
        if (!owner || inside.contains(owner->name)) return;
        if (!seen.insert(feature).second) return;
        stubs.push_back({feature, owner->name, owner->region, from.name, kind});
    };
    for (const auto& s : members) {
        for (const auto& f : condition_features(s.entry)) consider(f, s, "entry");
        for (const auto& out : s.outputs)
            for (const auto& st : out.realizations)
                for (const auto& target : st.preselected()) consider(target, s, "preselect");
    }
    std::ranges::sort(stubs, [](const auto& a, const auto& b) { return a.feature < b.feature; });
    return stubs;
}

LatticeFragment lattice_subgraph(const SystemNetwork& net, std::string_view focus, std::size_t radius) {
    std::map<const System*, std::size_t> distance;
    std::deque<const System*> frontier;
    if (const System* s = net.find_system(focus)) {
        distance[s] = 0;
        frontier.push_back(s);
    } else if (net.has_feature(focus)) {
        // the feature is a virtual node one hop from its owner and its users
        if (radius >= 1) {
            auto seed = [&](const System* s) {
                if (s && distance.emplace(s, 1).second) frontier.push_back(s);
            };
            seed(net.owner_of(focus));
            for (const auto& s : net.systems()) {
                auto leaves = condition_features(s.entry);
                if (std::ranges::find(leaves, focus) != leaves.end()) seed(&s);
            }
        }
    } else {
        throw Error("UNKNOWN-FOCUS", "no system or feature named '" + std::string(focus) + "'");
    }

    while (!frontier.empty()) {
        const System* s = frontier.front();
        frontier.pop_front();
        std::size_t d = distance[s];
        if (d >= radius) continue;
        auto visit = [&](const System* next) {
            if (distance.emplace(next, d + 1).second) frontier.push_back(next);
        };
        for (const System* n : net.dependents(*s)) visit(n);
        for (const System* n : net.prerequisites(*s)) visit(n);
    }

    std::vector<const System*> members;
    for (const auto& [s, d] : distance) members.push_back(s);
    std::ranges::sort(members, [&](auto a, auto b) { return net.rank(*a) < net.rank(*b); });

    LatticeFragment frag;
    frag.title = std::string(focus);
    for (const System* s : members) frag.systems.push_back(*s);
    frag.stubs = boundary_stubs(net, frag.systems);
    return frag;
}

}  // namespace latticegen
