#include "latticegen/regions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "latticegen/error.hpp"

namespace latticegen {

namespace {

std::vector<std::string> references(const System& s, bool with_preselect) {
    auto refs = condition_features(s.entry);
    if (with_preselect)
        for (const auto& f : s.outputs)
            for (const auto& st : f.realizations)
                for (const auto& p : st.preselected()) refs.push_back(p);
    return refs;
}

std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

RegionGraph region_graph(const SystemNetwork& net, std::span<const std::string> declared) {
    std::set<std::string> nodes(declared.begin(), declared.end());
    std::map<std::pair<std::string, std::string>, std::size_t> weights;
    for (const auto& s : net.systems()) {
        if (s.region.empty()) throw Error("MISSING-REGION-TAG", s.name + " has no region");
        nodes.insert(s.region);
    }
    for (const auto& s : net.systems())
        for (const auto& ref : references(s, true)) {
            const System* owner = net.owner_of(ref);
            if (owner && owner->region != s.region) ++weights[{owner->region, s.region}];
        }
    RegionGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    for (const auto& [k, w] : weights) g.edges.push_back({k.first, k.second, w});
    return g;
}

LatticeFragment region_view(const SystemNetwork& net, const std::string& region) {
    LatticeFragment frag;
    frag.title = region;
    for (const auto& s : net.systems())
        if (s.region == region) frag.systems.push_back(s);
    if (frag.systems.empty()) throw Error("UNKNOWN-REGION", "no system belongs to region '" + region + "'");
    frag.stubs = boundary_stubs(net, frag.systems);
    return frag;
}

std::vector<RegionLint> region_lint(const SystemNetwork& net) {
    std::map<std::string, RegionLint> lint;
    for (const auto& s : net.systems()) {
        auto& l = lint[s.region];
        l.region = s.region;
        for (const auto& ref : references(s, false)) {
            const System* owner = net.owner_of(ref);
            if (!owner) continue;
            ++(owner->region == s.region ? l.intra : l.inter);
        }
    }
    std::vector<RegionLint> out;
    for (auto& [_, l] : lint) out.push_back(l);
    return out;
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

std::string to_dot(const RegionGraph& g) {
    std::string out = "digraph regions {\n";
    for (const auto& n : g.nodes) out += "  " + dot_id(n) + ";\n";
    for (const auto& e : g.edges)
        out += "  " + dot_id(e.from) + " -> " + dot_id(e.to) + " [weight=" + std::to_string(e.weight) +
               ", label=" + dot_id(std::to_string(e.weight)) + "];\n";
    return out + "}\n";
}

json to_json(const RegionGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    return {{"nodes", g.nodes}, {"edges", edges}};
}

RegionGraph region_graph_from_json(const json& j) {
    RegionGraph g;
    g.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges"))
        g.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("weight").get<std::size_t>()});
    return g;
}

std::string to_dot(const LatticeFragment& frag) {
    std::vector<const System*> systems;
    for (const auto& s : frag.systems) systems.push_back(&s);
    std::ranges::sort(systems, {}, &System::name);
    std::string out = "digraph " + dot_id(frag.title) + " {\n  rankdir=LR;\n";
    for (const System* s : systems) {
        std::string label = s->name;
        if (auto it = frag.labels.find(s->name); it != frag.labels.end()) label += "\\n" + it->second;
        out += "  " + dot_id("system:" + s->name) + " [shape=box, label=" + dot_id(label) + "];\n";
        for (const auto& f : s->outputs) {
            std::string attrs = frag.marked.contains(f.name) ? ", style=bold" : "";
            out += "  " + dot_id("feature:" + f.name) + " [shape=plaintext, label=" + dot_id(f.name) + attrs + "];\n";
            out += "  " + dot_id("system:" + s->name) + " -> " + dot_id("feature:" + f.name) + ";\n";
        }
        std::set<std::string> entry;
        for (const auto& ref : condition_features(s->entry)) entry.insert(ref);
        for (const auto& ref : entry) out += "  " + dot_id("feature:" + ref) + " -> " + dot_id("system:" + s->name) + ";\n";
    }
    for (const auto& stub : frag.stubs)
        out += "  " + dot_id("feature:" + stub.feature) + " [shape=plaintext, style=dashed, label=" +
               dot_id(stub.feature + "\\n(" + stub.owner_region + ")") + "];\n";
    return out + "}\n";
}

json to_json(const LatticeFragment& frag) {
    json systems = json::array();
    for (const auto& s : frag.systems) systems.push_back(to_json(s));
    json stubs = json::array();
    for (const auto& s : frag.stubs)
        stubs.push_back({{"feature", s.feature}, {"owner", s.owner}, {"owner_region", s.owner_region},
                         {"referenced_by", s.referenced_by}, {"kind", s.kind}});
    return {{"title", frag.title}, {"systems", systems}, {"stubs", stubs}, {"marked", frag.marked}, {"labels", frag.labels}};
}

LatticeFragment fragment_from_json(const json& j) {
    LatticeFragment frag;
    frag.title = j.at("title").get<std::string>();
    for (const auto& s : j.at("systems")) frag.systems.push_back(system_from_json(s, {}));
    for (const auto& s : j.at("stubs"))
        frag.stubs.push_back({s.at("feature").get<std::string>(), s.at("owner").get<std::string>(),
                              s.at("owner_region").get<std::string>(), s.at("referenced_by").get<std::string>(),
                              s.at("kind").get<std::string>()});
    frag.marked = j.at("marked").get<std::set<std::string>>();
    frag.labels = j.at("labels").get<std::map<std::string, std::string>>();
    return frag;
}

}  // namespace latticegen
