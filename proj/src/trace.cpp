#include "latticegen/trace.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "latticegen/error.hpp"

namespace latticegen {

const UnitRecord& find_unit(const GenerationResult& result, std::string_view unit) {
    const UnitRecord* u = result.unit(unit);
    if (!u) throw Error("UNKNOWN-UNIT", "no unit '" + std::string(unit) + "' in this result");
    return *u;
}

std::vector<SelectionItem> selection_list(const GenerationResult& result, std::string_view unit) {
    std::vector<SelectionItem> out;
    for (const auto& s : find_unit(result, unit).selections) out.push_back({s.feature, s.system});
    return out;
}

LatticeFragment selection_subgraph(const GenerationResult& result, const SystemNetwork& net, std::string_view unit) {
    const UnitRecord& u = find_unit(result, unit);
    LatticeFragment frag;
    frag.title = u.id;
    for (const auto& s : u.selections) {
        frag.marked.insert(s.feature);
        if (s.system.empty()) continue;
        if (const System* sys = net.find_system(s.system)) {
            frag.systems.push_back(*sys);
            frag.labels[sys->name] = s.origin;
        }
    }
    frag.stubs = boundary_stubs(net, frag.systems);
    return frag;
}

std::vector<DecisionEvent> selection_replay(const GenerationResult& result, std::string_view unit) {
    const UnitRecord& u = find_unit(result, unit);
    std::vector<DecisionEvent> out;
    for (const auto& e : result.events)
        if (e.unit == u.id) out.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// focusing
// ---------------------------------------------------------------------------

namespace {

FocusEntry entry_for(const UnitRecord& u, std::size_t i, const SystemNetwork* net) {
    const auto& c = u.constraints[i];
    FocusEntry e{i, c.statement.id, c.statement.describe(), c.system, c.feature, {}};
    if (net && net->find_system(c.system)) e.context = to_string(paradigmatic_context(*net, c.system));
    return e;
}

void add_entries(FocusReport& report, const UnitRecord& u, const std::vector<std::size_t>& indices,
                 const SystemNetwork* net) {
    std::vector<std::size_t> sorted = indices;
    std::ranges::sort(sorted);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i : sorted) report.entries.push_back(entry_for(u, i, net));
}

// Facts explaining why bundle a precedes bundle b: direct edges, else the
// first shortest chain of edges.
std::vector<std::size_t> ordering_facts(const UnitStructure& s, std::size_t a, std::size_t b) {
    std::vector<std::size_t> direct;
    for (const auto& p : s.precedence)
        if (p.before == a && p.after == b) direct.push_back(p.statement);
    if (!direct.empty()) return direct;
    const std::size_t n = s.bundles.size();
    std::vector<std::optional<std::size_t>> via(n);  // precedence index reaching the bundle
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{a};
    seen[a] = true;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        if (v == b) break;
        for (std::size_t k = 0; k < s.precedence.size(); ++k) {
            const auto& p = s.precedence[k];
            if (p.before != v || seen[p.after]) continue;
            seen[p.after] = true;
            via[p.after] = k;
            queue.push_back(p.after);
        }
    }
    std::vector<std::size_t> chain;
    if (!seen[b]) return chain;
    for (std::size_t v = b; v != a;) {
        const auto& p = s.precedence[*via[v]];
        chain.push_back(p.statement);
        v = p.before;
    }
    return chain;
}

}  // namespace

FocusReport where_introduced(const GenerationResult& result, std::string_view unit, std::string_view aspect,
                             const SystemNetwork* net) {
    auto colon = aspect.find(':');
    if (colon == std::string_view::npos) throw Error("UNKNOWN-ASPECT", "aspect '" + std::string(aspect) + "'");
    std::string kind(aspect.substr(0, colon));
    std::string arg(aspect.substr(colon + 1));
    FocusReport report{std::string(unit), std::string(aspect), {}};

    if (kind == "token") {
        std::size_t i = 0;
        try {
            i = std::stoul(arg);
        } catch (const std::exception&) {
            throw Error("UNKNOWN-ASPECT", "token index '" + arg + "' is not a number");
        }
        if (i >= result.tokens.size()) throw Error("UNKNOWN-ASPECT", "no token " + arg);
        const Token& t = result.tokens[i];
        const UnitRecord& u = find_unit(result, t.unit);
        report.unit = u.id;
        add_entries(report, u, u.structure.bundles.at(t.bundle).statements, net);
        return report;
    }

    const UnitRecord& u = find_unit(result, unit);
    const UnitStructure& s = u.structure;
    if (kind == "function") {
        if (auto b = s.index_of(arg)) add_entries(report, u, s.bundles[*b].statements, net);
        return report;
    }
    if (kind == "lexical-class") {
        if (auto b = s.index_of(arg)) add_entries(report, u, s.bundles[*b].lexical, net);
        return report;
    }
    if (kind == "ordering") {
        auto lt = arg.find('<');
        if (lt == std::string::npos) throw Error("UNKNOWN-ASPECT", "ordering aspect needs A<B");
        auto a = s.index_of(arg.substr(0, lt));
        auto b = s.index_of(arg.substr(lt + 1));
        if (a && b && *a != *b) add_entries(report, u, ordering_facts(s, *a, *b), net);
        return report;
    }
    throw Error("UNKNOWN-ASPECT", "unknown aspect kind '" + kind + "'");
}

FocusReport adjacency_provenance(const GenerationResult& result, std::size_t i, const SystemNetwork* net) {
    if (i + 1 >= result.tokens.size()) throw Error("UNKNOWN-ASPECT", "no token pair at " + std::to_string(i));
    // parent link of every sub-unit
    std::map<std::string, std::pair<std::string, std::size_t>> parent;
    for (const auto& u : result.units)
        for (std::size_t b = 0; b < u.structure.bundles.size(); ++b)
            if (!u.structure.bundles[b].subunit.empty()) parent[u.structure.bundles[b].subunit] = {u.id, b};
    auto chain = [&](const Token& t) {
        std::vector<std::pair<std::string, std::size_t>> c{{t.unit, t.bundle}};
        for (auto it = parent.find(t.unit); it != parent.end(); it = parent.find(it->second.first))
            c.push_back(it->second);
        std::ranges::reverse(c);
        return c;
    };
    auto ca = chain(result.tokens[i]);
    auto cb = chain(result.tokens[i + 1]);
    for (std::size_t k = 0; k < std::min(ca.size(), cb.size()); ++k) {
        if (ca[k].first != cb[k].first) break;
        if (ca[k].second == cb[k].second) continue;
        const UnitRecord& u = find_unit(result, ca[k].first);
        const auto& bundles = u.structure.bundles;
        std::string aspect =
            "ordering:" + bundles[ca[k].second].functions.front() + "<" + bundles[cb[k].second].functions.front();
        return where_introduced(result, u.id, aspect, net);
    }
    return FocusReport{result.tokens[i].unit, "adjacency:" + std::to_string(i), {}};
}

const ChooserOutcome& decision_path(const GenerationResult& result, std::string_view unit, std::string_view system) {
    const UnitRecord& u = find_unit(result, unit);
    const Selection* s = u.selection_for(system);
    if (!s || (s->origin != "chooser" && s->origin != "default"))
        throw Error("SYSTEM-NOT-FIRED", std::string(system) + " did not fire in " + u.id);
    return s->outcome;
}

// ---------------------------------------------------------------------------
// diffing
// ---------------------------------------------------------------------------

namespace {

std::optional<Divergence> first_in_unit(const UnitRecord& a, const UnitRecord& b) {
    auto fired = [](const UnitRecord& u) {
        std::vector<const Selection*> out;
        for (const auto& s : u.selections)
            if (!s.system.empty()) out.push_back(&s);
        return out;
    };
    auto sa = fired(a);
    auto sb = fired(b);
    auto differs = [&](const std::string& system) {
        const Selection* x = a.selection_for(system);
        const Selection* y = b.selection_for(system);
        return !x || !y || x->feature != y->feature || x->signature != y->signature;
    };
    auto make = [&](const std::string& system) {
        const Selection* x = a.selection_for(system);
        const Selection* y = b.selection_for(system);
        Divergence d{a.id, system, x ? x->feature : "", y ? y->feature : "", {}};
        if (x && y && x->feature == y->feature)
            d.detail = "realization differs: " + x->signature + " | " + y->signature;
        else if (!x || !y)
            d.detail = "fired on one side only";
        else
            d.detail = "different choice";
        return d;
    };
    for (std::size_t k = 0; k < std::max(sa.size(), sb.size()); ++k) {
        const Selection* x = k < sa.size() ? sa[k] : nullptr;
        const Selection* y = k < sb.size() ? sb[k] : nullptr;
        if (x && y && x->system == y->system) {
            if (differs(x->system)) return make(x->system);
            continue;
        }
        if (x && differs(x->system)) return make(x->system);
        if (y && differs(y->system)) return make(y->system);
        return make(y ? y->system : x->system);  // same choices, shifted order
    }
    return std::nullopt;
}

std::vector<std::string> minus(const FeatureSet& a, const FeatureSet& b) {
    std::vector<std::string> out;
    std::ranges::set_difference(a, b, std::back_inserter(out));
    return out;
}

}  // namespace

TraceDiff diff_traces(const GenerationResult& a, const GenerationResult& b) {
    TraceDiff diff;
    if (a.language != b.language) diff.warnings.push_back("results are in different languages");
    if (!a.version.empty() && !b.version.empty() && a.version != b.version) diff.warnings.push_back("results come from different resource versions");

    auto note = [&](Divergence d) {
        if (!diff.first_divergence) diff.first_divergence = std::move(d);
    };
    for (const auto& ua : a.units) {
        const UnitRecord* ub = b.unit(ua.id);
        if (!ub) {
            note({ua.id, "", "", "", "unit present only in the first result"});
            diff.units.push_back({ua.id, minus(ua.features(), {}), {}});
            continue;
        }
        if (auto d = first_in_unit(ua, *ub)) note(*d);
        auto fa = ua.features();
        auto fb = ub->features();
        if (fa != fb) diff.units.push_back({ua.id, minus(fa, fb), minus(fb, fa)});
    }
    for (const auto& ub : b.units) {
        if (a.unit(ub.id)) continue;
        note({ub.id, "", "", "", "unit present only in the second result"});
        diff.units.push_back({ub.id, {}, minus(ub.features(), {})});
    }
    return diff;
}

json to_json(const TraceDiff& diff) {
    json j;
    if (diff.first_divergence) {
        const auto& d = *diff.first_divergence;
        j["first_divergence"] = {{"unit", d.unit}, {"system", d.system}, {"feature_a", d.feature_a},
                                 {"feature_b", d.feature_b}, {"detail", d.detail}};
    } else {
        j["first_divergence"] = nullptr;
    }
    j["units"] = json::array();
    for (const auto& u : diff.units) j["units"].push_back({{"unit", u.unit}, {"only_a", u.only_a}, {"only_b", u.only_b}});
    j["warnings"] = diff.warnings;
    return j;
}

json to_json(const FocusReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"constraint", e.constraint}, {"statement", e.statement}, {"description", e.description},
                           {"system", e.system}, {"feature", e.feature}, {"context", e.context}});
    return {{"unit", report.unit}, {"aspect", report.aspect}, {"entries", entries}};
}

// ---------------------------------------------------------------------------
// conditional tracing, files
// ---------------------------------------------------------------------------

std::vector<GenerationEvent> conditional_trace(const Grammar& grammar, const SemanticGraph& graph,
                                               const std::set<std::string>& watch) {
    for (const auto& id : watch)
        if (!grammar.network().find_system(id) && !grammar.inquiry(id) && !grammar.statement(id).statement)
            throw Error("UNKNOWN-WATCH-ID", "'" + id + "' is not a system, inquiry or statement");
    std::vector<GenerationEvent> events;
    generate(grammar, graph, [&](const GenerationEvent& ev) {
        if (watch.contains(ev.object)) events.push_back(ev);
    });
    return events;
}

void save_trace(const std::filesystem::path& path, const GenerationResult& result) {
    write_text_file(path, canonical_text(to_json(result)));
}

GenerationResult load_trace(const std::filesystem::path& path) { return result_from_json(read_json_file(path)); }

}  // namespace latticegen
