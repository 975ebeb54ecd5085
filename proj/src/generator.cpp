#include "latticegen/generator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>

#include "latticegen/error.hpp"

namespace latticegen {

std::string FunctionBundle::name() const {
    std::string out;
    for (const auto& f : functions) {
        if (!out.empty()) out += '/';
        out += f;
    }
    return out;
}

bool FunctionBundle::has_function(std::string_view fn) const { return std::ranges::find(functions, fn) != functions.end(); }

std::optional<std::size_t> UnitStructure::index_of(std::string_view fn) const {
    for (std::size_t i = 0; i < bundles.size(); ++i)
        if (bundles[i].has_function(fn)) return i;
    return std::nullopt;
}

const FunctionBundle* UnitStructure::bundle_for(std::string_view fn) const {
    auto i = index_of(fn);
    return i ? &bundles[*i] : nullptr;
}

FeatureSet UnitRecord::features() const {
    FeatureSet out;
    for (const auto& s : selections) out.insert(s.feature);
    return out;
}

const Selection* UnitRecord::selection_for(std::string_view system) const {
    for (const auto& s : selections)
        if (!s.system.empty() && s.system == system) return &s;
    return nullptr;
}

const UnitRecord* GenerationResult::unit(std::string_view id) const {
    for (const auto& u : units)
        if (u.id == id) return &u;
    return nullptr;
}

std::size_t GenerationResult::fired_systems() const {
    std::size_t n = 0;
    for (const auto& u : units)
        for (const auto& s : u.selections)
            if (s.origin == "chooser" || s.origin == "default") ++n;
    return n;
}

// ---------------------------------------------------------------------------
// traversal
// ---------------------------------------------------------------------------

namespace {

std::string signature_of(const Feature& f) {
    std::string out;
    for (const auto& st : f.realizations) {
        if (!out.empty()) out += "; ";
        out += st.describe();
    }
    return out;
}

void note(TraversalLog* log, GenerationEvent::Kind kind, std::string object, std::string detail) {
    if (log) log->events.push_back({kind, {}, std::move(object), std::move(detail)});
}

}  // namespace

// Fills `rec` as it goes so a failure leaves the selections reached so far.
static void traverse_into(UnitRecord& rec, const Grammar& grammar, const std::vector<std::string>& init,
                          const std::string& entity, const SemanticGraph& graph, TraversalLog* log) {
    const SystemNetwork& net = grammar.network();
    rec.entity = entity;
    FeatureSet se;
    std::set<std::string, std::less<>> done;

    auto add = [&](const System* sys, const std::string& feature, std::string origin, ChooserOutcome outcome) {
        Selection sel{sys ? sys->name : std::string(), feature, std::move(origin), std::move(outcome), {}};
        if (sys) {
            const Feature* f = sys->output(feature);
            sel.signature = signature_of(*f);
            for (const auto& st : f->realizations) {
                rec.constraints.push_back({st, sys->name, feature});
                note(log, GenerationEvent::Kind::StatementApplied, st.id, st.describe());
            }
            done.insert(sys->name);
        }
        se.insert(feature);
        rec.selections.push_back(std::move(sel));
    };

    for (const auto& feature : init) {
        if (se.contains(feature)) continue;
        if (feature == net.root_feature()) {
            add(nullptr, feature, "root", {});
            continue;
        }
        const System* owner = net.owner_of(feature);
        if (!owner) throw Error("UNKNOWN-FEATURE", "preselected feature '" + feature + "' is not in the network");
        if (done.contains(owner->name))
            throw Error("CONTRADICTORY-PRESELECTION",
                        "'" + feature + "' and '" + rec.selection_for(owner->name)->feature + "' both select " + owner->name);
        add(owner, feature, "preselected", {});
    }

    InquiryLookup lookup = grammar.inquiry_lookup();
    while (true) {
        auto entered = entered_systems(net, se, done);
        if (entered.empty()) break;
        const System& sys = *entered.front();
        const Chooser* chooser = nullptr;
        if (!sys.chooser.empty()) {
            chooser = grammar.chooser(sys.chooser);
            if (!chooser) throw Error("UNKNOWN-CHOOSER", sys.name + " names missing chooser '" + sys.chooser + "'");
        }
        ChooserEnv env{graph, entity, lookup, [&](const InquiryStep& step) {
                           note(log, GenerationEvent::Kind::InquiryEvaluated, step.inquiry, step.answer);
                       }};
        if (log) ++log->chooser_invocations;
        ChooserOutcome outcome = run_chooser(chooser, sys, env);
        if (!sys.output(outcome.feature))
            throw Error("CHOOSER-FEATURE", sys.name + " chooser chose '" + outcome.feature + "', not an output");
        note(log, GenerationEvent::Kind::SystemFired, sys.name, outcome.feature);
        std::string origin = outcome.defaulted ? "default" : "chooser";
        std::string feature = outcome.feature;
        add(&sys, feature, std::move(origin), std::move(outcome));
    }
}

UnitRecord traverse_unit(const Grammar& grammar, const std::vector<std::string>& init, const std::string& entity,
                         const SemanticGraph& graph, TraversalLog* log) {
    UnitRecord rec;
    traverse_into(rec, grammar, init, entity, graph, log);
    return rec;
}

std::vector<AppliedStatement> constraints_for(const Grammar& grammar, std::span<const Selection> selections) {
    std::vector<AppliedStatement> out;
    for (const auto& sel : selections) {
        if (sel.system.empty()) continue;
        const System* sys = grammar.network().find_system(sel.system);
        if (!sys) throw Error("UNKNOWN-SYSTEM", sel.system);
        const Feature* f = sys->output(sel.feature);
        if (!f) throw Error("UNKNOWN-FEATURE", sel.feature);
        for (const auto& st : f->realizations) out.push_back({st, sys->name, f->name});
    }
    return out;
}

// ---------------------------------------------------------------------------
// realization
// ---------------------------------------------------------------------------

UnitStructure apply_realizations(std::span<const AppliedStatement> constraints) {
    std::vector<std::string> fns;  // insertion order
    std::map<std::string, std::size_t, std::less<>> fn_index;
    std::vector<std::vector<std::size_t>> touching;  // per function

    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& st = constraints[i].statement;
        if (st.op != RealizationOp::Insert) continue;
        if (st.args.empty()) throw Error("BAD-ARITY", st.id);
        auto [it, fresh] = fn_index.emplace(st.args[0], fns.size());
        if (fresh) {
            fns.push_back(st.args[0]);
            touching.emplace_back();
        }
        touching[it->second].push_back(i);
    }

    std::vector<std::size_t> parent(fns.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto lookup = [&](const std::string& fn, const RealizationStatement& st, const char* code) {
        auto it = fn_index.find(fn);
        if (it == fn_index.end())
            throw Error(code, st.id + ": " + st.describe() + " refers to function '" + fn + "', which was never inserted");
        return it->second;
    };

    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& st = constraints[i].statement;
        if (st.op != RealizationOp::Conflate) continue;
        if (st.args.size() < 2) throw Error("BAD-ARITY", st.id);
        std::size_t a = find(lookup(st.args[0], st, "CONFLATE-UNKNOWN-FUNCTION"));
        std::size_t b = find(lookup(st.args[1], st, "CONFLATE-UNKNOWN-FUNCTION"));
        if (a > b) std::swap(a, b);
        parent[b] = a;  // the earlier-inserted function keeps the bundle position
        touching[fn_index[st.args[0]]].push_back(i);
        touching[fn_index[st.args[1]]].push_back(i);
    }

    UnitStructure out;
    std::vector<std::size_t> bundle_of(fns.size());
    std::map<std::size_t, std::size_t> root_bundle;
    for (std::size_t f = 0; f < fns.size(); ++f) {
        std::size_t r = find(f);
        auto [it, fresh] = root_bundle.emplace(r, out.bundles.size());
        if (fresh) out.bundles.emplace_back();
        bundle_of[f] = it->second;
        out.bundles[it->second].functions.push_back(fns[f]);
    }
    auto bundle = [&](const std::string& fn, const RealizationStatement& st) { return bundle_of[lookup(fn, st, "UNKNOWN-FUNCTION")]; };

    std::vector<std::size_t> front, end;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& st = constraints[i].statement;
        if (st.op == RealizationOp::Insert || st.op == RealizationOp::Conflate) continue;
        std::size_t expected = (st.op == RealizationOp::Order || st.op == RealizationOp::Classify ||
                                st.op == RealizationOp::OutClassify || st.op == RealizationOp::Lexify ||
                                st.op == RealizationOp::Preselect)
                                   ? 2
                                   : 1;
        if (st.args.size() < expected) throw Error("BAD-ARITY", st.id);
        std::size_t b = bundle(st.args[0], st);
        touching[fn_index[st.args[0]]].push_back(i);
        switch (st.op) {
        case RealizationOp::Order: {
            std::size_t c = bundle(st.args[1], st);
            touching[fn_index[st.args[1]]].push_back(i);
            out.precedence.push_back({b, c, i});
            break;
        }
        case RealizationOp::OrderAtFront:
            front.push_back(i);
            break;
        case RealizationOp::OrderAtEnd:
            end.push_back(i);
            break;
        case RealizationOp::Preselect:
            for (std::size_t k = 1; k < st.args.size(); ++k) out.bundles[b].preselections.insert(st.args[k]);
            break;
        case RealizationOp::Classify:
        case RealizationOp::OutClassify:
        case RealizationOp::Lexify:
            out.bundles[b].lexical.push_back(i);
            break;
        default:
            break;
        }
    }
    for (std::size_t i : front) {
        std::size_t b = bundle_of[fn_index[constraints[i].statement.args[0]]];
        for (std::size_t o = 0; o < out.bundles.size(); ++o)
            if (o != b) out.precedence.push_back({b, o, i});
    }
    for (std::size_t i : end) {
        std::size_t b = bundle_of[fn_index[constraints[i].statement.args[0]]];
        for (std::size_t o = 0; o < out.bundles.size(); ++o)
            if (o != b) out.precedence.push_back({o, b, i});
    }

    for (std::size_t f = 0; f < fns.size(); ++f) {
        auto& stmts = out.bundles[bundle_of[f]].statements;
        stmts.insert(stmts.end(), touching[f].begin(), touching[f].end());
    }
    for (auto& b : out.bundles) {
        std::ranges::sort(b.statements);
        b.statements.erase(std::unique(b.statements.begin(), b.statements.end()), b.statements.end());
        std::ranges::sort(b.lexical);
    }
    return out;
}

std::vector<std::size_t> linearize(const std::vector<FunctionBundle>& bundles, std::span<const Precedence> facts) {
    const std::size_t n = bundles.size();
    std::vector<std::set<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& p : facts) {
        if (p.before >= n || p.after >= n) throw Error("ORDER-CYCLE", "precedence fact out of range");
        if (succ[p.before].insert(p.after).second) ++indegree[p.after];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        std::size_t b = ready.top();
        ready.pop();
        order.push_back(b);
        for (std::size_t s : succ[b])
            if (--indegree[s] == 0) ready.push(s);
    }
    if (order.size() == n) return order;

    // shortest cycle among the blocked bundles
    std::vector<std::size_t> best;
    for (std::size_t start = 0; start < n; ++start) {
        if (indegree[start] == 0) continue;
        std::vector<std::size_t> prev(n, n);
        std::deque<std::size_t> queue{start};
        std::vector<bool> seen(n, false);
        bool closed = false;
        std::size_t last = start;
        while (!queue.empty() && !closed) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t s : succ[v]) {
                if (s == start) {
                    closed = true;
                    last = v;
                    break;
                }
                if (!seen[s]) {
                    seen[s] = true;
                    prev[s] = v;
                    queue.push_back(s);
                }
            }
        }
        if (!closed) continue;
        std::vector<std::size_t> cycle;
        for (std::size_t v = last; v != start; v = prev[v]) cycle.push_back(v);
        cycle.push_back(start);
        std::ranges::reverse(cycle);
        if (best.empty() || cycle.size() < best.size()) best = cycle;
    }
    std::string names;
    for (std::size_t v : best) names += bundles[v].name() + " < ";
    if (!best.empty()) names += bundles[best.front()].name();
    throw Error("ORDER-CYCLE", names);
}

// ---------------------------------------------------------------------------
// lexical selection, morphology
// ---------------------------------------------------------------------------

const Lexeme& select_lexeme(std::span<const Lexeme> lexicon, std::span<const RealizationStatement> constraints,
                            const std::string* preference) {
    std::set<std::string> in, out;
    for (const auto& st : constraints) {
        if (st.args.size() < 2) continue;
        if (st.op == RealizationOp::Lexify) {
            for (const auto& lex : lexicon)
                if (lex.name == st.args[1]) return lex;
            throw Error("NO-CANDIDATE", "lexeme '" + st.args[1] + "' does not exist");
        }
        if (st.op == RealizationOp::Classify) in.insert(st.args[1]);
        if (st.op == RealizationOp::OutClassify) out.insert(st.args[1]);
    }
    const Lexeme* best = nullptr;
    for (const auto& lex : lexicon) {
        if (!std::ranges::includes(lex.classes, in)) continue;
        if (std::ranges::any_of(out, [&](const std::string& c) { return lex.classes.contains(c); })) continue;
        if (preference && !lex.expresses(*preference)) continue;
        if (!best || lex.name < best->name) best = &lex;
    }
    if (best) return *best;
    std::string classes;
    for (const auto& c : in) classes += (classes.empty() ? "" : ", ") + c;
    throw Error("NO-CANDIDATE", "no lexeme of class {" + classes + "}" +
                                    (preference ? " expresses '" + *preference + "'" : std::string()));
}

std::string inflect(const Lexeme& lexeme, const FeatureSet& morph) {
    const LexicalForm* best = nullptr;
    for (const auto& form : lexeme.forms) {
        if (!std::ranges::includes(morph, form.features)) continue;
        if (!best || form.features.size() > best->features.size()) best = &form;
    }
    return best ? best->text : lexeme.spelling;
}

// ---------------------------------------------------------------------------
// generation
// ---------------------------------------------------------------------------

namespace {

struct Generation {
    const Grammar& grammar;
    const SemanticGraph& graph;
    const GenerationObserver& observer;
    GenerationResult result;

    void fail(const std::string& code, const std::string& message) {
        if (!result.complete) return;
        result.complete = false;
        result.reason_code = code;
        result.reason = message;
    }

    void expand(const std::vector<std::string>& init, const std::string& entity, const std::string& id,
                std::size_t depth) {
        const std::size_t at = result.units.size();
        result.units.emplace_back();
        result.units[at].id = id;
        result.units[at].depth = depth;
        if (depth >= max_unit_depth) {
            result.units[at].entity = entity;
            fail("RECURSION-LIMIT", id + " is nested deeper than " + std::to_string(max_unit_depth) + " units");
            return;
        }

        TraversalLog log;
        std::optional<Error> failure;
        try {
            traverse_into(result.units[at], grammar, init, entity, graph, &log);
        } catch (const Error& e) {
            failure = e;
        }
        UnitRecord& rec = result.units[at];
        if (rec.id == "?") {
            // the root unit is named after its rank
            rec.id = grammar.network().root_feature();
            for (const auto& sel : rec.selections)
                if (sel.origin != "root") {
                    rec.id = sel.feature;
                    break;
                }
        }
        result.chooser_invocations += log.chooser_invocations;
        for (auto& ev : log.events) {
            ev.unit = rec.id;
            if (observer) observer(ev);
        }
        for (const auto& sel : rec.selections) {
            if (sel.origin != "chooser" && sel.origin != "default") continue;
            DecisionEvent ev{result.events.size(), rec.id, sel.system, sel.feature, sel.outcome.path, {}};
            for (const auto& c : rec.constraints)
                if (c.system == sel.system) ev.statements.push_back(c.statement.id);
            result.events.push_back(std::move(ev));
            for (const auto& w : sel.outcome.warnings) result.warnings.push_back(rec.id + " " + sel.system + ": " + w);
        }
        if (failure) {
            fail(failure->code(), rec.id + ": " + failure->message());
            return;
        }

        try {
            rec.structure = apply_realizations(rec.constraints);
        } catch (const Error& e) {
            fail(e.code(), rec.id + ": " + e.message());
            return;
        }
        try {
            rec.structure.order = linearize(rec.structure.bundles, rec.structure.precedence);
        } catch (const Error& e) {
            fail(e.code(), rec.id + ": " + e.message());
        }
        annotate(rec);

        // copy what recursion needs; result.units may reallocate
        const std::vector<std::size_t> order = rec.structure.order;
        const std::string unit_id = rec.id;
        const std::string unit_entity = rec.entity;
        for (std::size_t b : order) {
            FunctionBundle bundle = result.units[at].structure.bundles[b];
            if (bundle.kind == FunctionBundle::Kind::Unit) {
                std::vector<std::string> child_init{grammar.network().root_feature()};
                child_init.insert(child_init.end(), bundle.preselections.begin(), bundle.preselections.end());
                std::string child = unit_id + "/" + bundle.functions.front();
                result.units[at].structure.bundles[b].subunit = child;
                expand(child_init, bundle.entity.empty() ? unit_entity : bundle.entity, child, depth + 1);
            } else if (bundle.kind == FunctionBundle::Kind::Lexical) {
                lexicalize(at, b);
            }
        }
    }

    void annotate(UnitRecord& rec) {
        std::map<std::string, std::string, std::less<>> identified;
        for (const auto& sel : rec.selections)
            for (const auto& [fn, ent] : sel.outcome.identifications) identified.emplace(fn, ent);
        FeatureSet se = rec.features();
        for (auto& b : rec.structure.bundles) {
            for (const auto& fn : b.functions)
                if (auto it = identified.find(fn); it != identified.end()) {
                    b.entity = it->second;
                    break;
                }
            if (!b.preselections.empty())
                b.kind = FunctionBundle::Kind::Unit;
            else if (!b.lexical.empty())
                b.kind = FunctionBundle::Kind::Lexical;
            else
                b.kind = FunctionBundle::Kind::Covert;
            if (b.kind != FunctionBundle::Kind::Lexical) continue;
            for (const auto& rule : grammar.resources().morphology)
                if (se.contains(rule.feature) && (rule.function.empty() || b.has_function(rule.function)))
                    b.morph.insert(rule.morph);
        }
    }

    void lexicalize(std::size_t at, std::size_t b) {
        UnitRecord& rec = result.units[at];
        FunctionBundle& bundle = rec.structure.bundles[b];
        std::vector<RealizationStatement> lexical;
        for (std::size_t i : bundle.lexical) lexical.push_back(rec.constraints[i].statement);
        std::string type;
        if (!bundle.entity.empty())
            if (const Entity* e = graph.find(bundle.entity)) type = e->type;
        try {
            const Lexeme& lex = select_lexeme(grammar.lexicon(), lexical, type.empty() ? nullptr : &type);
            bundle.lexeme = lex.name;
            bundle.text = inflect(lex, bundle.morph);
        } catch (const Error& e) {
            fail(e.code(), rec.id + " " + bundle.name() + ": " + e.message());
            bundle.text = "⟨" + bundle.functions.front() + "⟩";
        }
        result.tokens.push_back({bundle.text, rec.id, b});
    }

    void surface() {
        std::string text;
        for (const auto& t : result.tokens) {
            if (!text.empty()) text += ' ';
            text += t.text;
        }
        if (text.empty()) return;
        if (text[0] >= 'a' && text[0] <= 'z') text[0] = static_cast<char>(text[0] - 'a' + 'A');
        std::string mark = ".";
        FeatureSet root = result.units.front().features();
        for (const auto& p : grammar.resources().punctuation)
            if (root.contains(p.feature)) {
                mark = p.mark;
                break;
            }
        result.text = text + mark;
    }
};

}  // namespace

GenerationResult generate(const Grammar& grammar, const SemanticGraph& graph, const GenerationObserver& observer) {
    Generation gen{grammar, graph, observer, {}};
    gen.result.language = grammar.language();
    gen.result.version = grammar.version_id();
    gen.expand({grammar.network().root_feature()}, graph.root(), "?", 0);
    gen.surface();
    return std::move(gen.result);
}

GenerationResult generate(const ResourceSet& res, const SemanticGraph& graph, const std::string& language,
                          const GenerationObserver& observer) {
    Grammar grammar(res, language);
    return generate(grammar, graph, observer);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kind_names[] = {"pending", "unit", "lexical", "covert"};

FunctionBundle::Kind kind_from(const std::string& s) {
    for (int i = 0; i < 4; ++i)
        if (s == kind_names[i]) return static_cast<FunctionBundle::Kind>(i);
    throw Error("PARSE-ERROR", "unknown bundle kind '" + s + "'");
}

RealizationStatement statement_from(const json& j) {
    RealizationStatement st;
    st.id = j.at("id").get<std::string>();
    auto op = parse_op(j.at("op").get<std::string>());
    if (!op) throw Error("PARSE-ERROR", "unknown operator in trace");
    st.op = *op;
    st.args = j.at("args").get<std::vector<std::string>>();
    st.languages = j.value("languages", LanguageSet{});
    return st;
}

json path_json(const std::vector<InquiryStep>& path) {
    json out = json::array();
    for (const auto& s : path) out.push_back({{"inquiry", s.inquiry}, {"bindings", s.bindings}, {"answer", s.answer}});
    return out;
}

}  // namespace

json to_json(const DecisionEvent& e) {
    return {{"sequence", e.sequence}, {"unit", e.unit}, {"system", e.system}, {"feature", e.feature},
            {"path", path_json(e.path)}, {"statements", e.statements}};
}

json to_json(const GenerationResult& r) {
    json units = json::array();
    for (const auto& u : r.units) {
        json sels = json::array();
        for (const auto& s : u.selections)
            sels.push_back({{"system", s.system}, {"feature", s.feature}, {"origin", s.origin},
                            {"outcome", to_json(s.outcome)}, {"signature", s.signature}});
        json cons = json::array();
        for (const auto& c : u.constraints)
            cons.push_back({{"statement", to_json(c.statement)}, {"system", c.system}, {"feature", c.feature}});
        json bundles = json::array();
        for (const auto& b : u.structure.bundles)
            bundles.push_back({{"functions", b.functions},
                               {"statements", b.statements},
                               {"preselections", std::vector<std::string>(b.preselections.begin(), b.preselections.end())},
                               {"lexical", b.lexical},
                               {"kind", kind_names[static_cast<int>(b.kind)]},
                               {"entity", b.entity},
                               {"subunit", b.subunit},
                               {"lexeme", b.lexeme},
                               {"morph", std::vector<std::string>(b.morph.begin(), b.morph.end())},
                               {"text", b.text}});
        json prec = json::array();
        for (const auto& p : u.structure.precedence)
            prec.push_back({{"before", p.before}, {"after", p.after}, {"statement", p.statement}});
        units.push_back({{"id", u.id},
                         {"entity", u.entity},
                         {"depth", u.depth},
                         {"selections", sels},
                         {"constraints", cons},
                         {"bundles", bundles},
                         {"precedence", prec},
                         {"order", u.structure.order}});
    }
    json tokens = json::array();
    for (const auto& t : r.tokens) tokens.push_back({{"text", t.text}, {"unit", t.unit}, {"bundle", t.bundle}});
    json events = json::array();
    for (const auto& e : r.events) events.push_back(to_json(e));
    return {{"text", r.text},
            {"status", r.complete ? "complete" : "partial"},
            {"reason_code", r.reason_code},
            {"reason", r.reason},
            {"warnings", r.warnings},
            {"language", r.language},
            {"version", r.version},
            {"chooser_invocations", r.chooser_invocations},
            {"tokens", tokens},
            {"units", units},
            {"events", events}};
}

GenerationResult result_from_json(const json& j) {
    try {
        GenerationResult r;
        r.text = j.at("text").get<std::string>();
        r.complete = j.at("status").get<std::string>() == "complete";
        r.reason_code = j.value("reason_code", "");
        r.reason = j.value("reason", "");
        r.warnings = j.value("warnings", std::vector<std::string>{});
        r.language = j.value("language", "");
        r.version = j.value("version", "");
        r.chooser_invocations = j.value("chooser_invocations", std::size_t{0});
        for (const auto& t : j.at("tokens"))
            r.tokens.push_back({t.at("text").get<std::string>(), t.at("unit").get<std::string>(), t.at("bundle").get<std::size_t>()});
        for (const auto& uj : j.at("units")) {
            UnitRecord u;
            u.id = uj.at("id").get<std::string>();
            u.entity = uj.at("entity").get<std::string>();
            u.depth = uj.value("depth", std::size_t{0});
            for (const auto& s : uj.at("selections"))
                u.selections.push_back({s.at("system").get<std::string>(), s.at("feature").get<std::string>(),
                                        s.at("origin").get<std::string>(), outcome_from_json(s.at("outcome")),
                                        s.value("signature", "")});
            for (const auto& c : uj.at("constraints"))
                u.constraints.push_back({statement_from(c.at("statement")), c.at("system").get<std::string>(),
                                         c.at("feature").get<std::string>()});
            for (const auto& bj : uj.at("bundles")) {
                FunctionBundle b;
                b.functions = bj.at("functions").get<std::vector<std::string>>();
                b.statements = bj.at("statements").get<std::vector<std::size_t>>();
                auto pre = bj.at("preselections").get<std::vector<std::string>>();
                b.preselections = {pre.begin(), pre.end()};
                b.lexical = bj.at("lexical").get<std::vector<std::size_t>>();
                b.kind = kind_from(bj.at("kind").get<std::string>());
                b.entity = bj.at("entity").get<std::string>();
                b.subunit = bj.at("subunit").get<std::string>();
                b.lexeme = bj.at("lexeme").get<std::string>();
                auto morph = bj.at("morph").get<std::vector<std::string>>();
                b.morph = {morph.begin(), morph.end()};
                b.text = bj.at("text").get<std::string>();
                u.structure.bundles.push_back(std::move(b));
            }
            for (const auto& p : uj.at("precedence"))
                u.structure.precedence.push_back(
                    {p.at("before").get<std::size_t>(), p.at("after").get<std::size_t>(), p.at("statement").get<std::size_t>()});
            u.structure.order = uj.at("order").get<std::vector<std::size_t>>();
            r.units.push_back(std::move(u));
        }
        for (const auto& e : j.at("events")) {
            DecisionEvent ev;
            ev.sequence = e.at("sequence").get<std::size_t>();
            ev.unit = e.at("unit").get<std::string>();
            ev.system = e.at("system").get<std::string>();
            ev.feature = e.at("feature").get<std::string>();
            for (const auto& s : e.at("path"))
                ev.path.push_back({s.at("inquiry").get<std::string>(), s.at("bindings").get<Bindings>(),
                                   s.at("answer").get<std::string>()});
            ev.statements = e.at("statements").get<std::vector<std::string>>();
            r.events.push_back(std::move(ev));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error("PARSE-ERROR", std::string("trace: ") + e.what());
    }
}

}  // namespace latticegen
