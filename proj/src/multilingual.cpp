#include "latticegen/multilingual.hpp"

#include <algorithm>
#include <optional>

#include "latticegen/error.hpp"

namespace latticegen {

namespace {

constexpr const char* named_kinds[] = {"systems", "lexemes", "choosers", "inquiries"};
constexpr const char* rule_kinds[] = {"morphology", "punctuation"};

LanguageSet langs_of(const json& j) { return j.at("languages").get<LanguageSet>(); }

// Drops every language-tagged element not applicable to `keep`, and rewrites
// the surviving language arrays with `retag` (or the intersection).
std::optional<json> restrict(const json& j, const LanguageSet& keep, const LanguageSet* retag) {
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j)
            if (auto r = restrict(e, keep, retag)) out.push_back(std::move(*r));
        return out;
    }
    if (!j.is_object()) return j;
    json out = json::object();
    for (const auto& [k, v] : j.items()) {
        if (k == "languages" && v.is_array()) {
            LanguageSet inter;
            for (const auto& code : v)
                if (keep.contains(code.get<std::string>())) inter.insert(code.get<std::string>());
            if (inter.empty()) return std::nullopt;
            out[k] = retag ? *retag : inter;
            continue;
        }
        auto r = restrict(v, keep, retag);
        out[k] = r ? std::move(*r) : json(nullptr);
    }
    return out;
}

// Content as seen by one language, without language tags.
std::optional<json> view(const json& j, const std::string& lang) {
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j)
            if (auto r = view(e, lang)) out.push_back(std::move(*r));
        return out;
    }
    if (!j.is_object()) return j;
    json out = json::object();
    for (const auto& [k, v] : j.items()) {
        if (k == "languages" && v.is_array()) {
            if (std::ranges::find(v, json(lang)) == v.end()) return std::nullopt;
            continue;
        }
        auto r = view(v, lang);
        out[k] = r ? std::move(*r) : json(nullptr);
    }
    return out;
}

std::string key_of(const json& obj, bool named) {
    if (named) return obj.at("name").get<std::string>();
    json stripped = obj;
    stripped.erase("languages");
    return stripped.dump();
}

}  // namespace

ResourceSet merge(std::span<const ResourceSet> inputs) {
    struct Slot {
        std::string view;
        json object;
    };
    std::string root;
    LanguageSet languages;
    std::set<std::string> regions;
    // kind -> key -> language -> slot
    std::map<std::string, std::map<std::string, std::map<std::string, Slot>>> table;

    for (const auto& input : inputs) {
        if (!input.root.empty()) {
            if (!root.empty() && root != input.root)
                throw Error("INCOMPATIBLE-SCHEMA", "root features differ: " + root + " vs " + input.root);
            root = input.root;
        }
        languages.insert(input.languages.begin(), input.languages.end());
        regions.insert(input.regions.begin(), input.regions.end());
        json doc = to_json(input);
        auto absorb = [&](const char* kind, bool named) {
            for (const auto& obj : doc[kind]) {
                std::string key = key_of(obj, named);
                auto& per_lang = table[kind][key];
                for (const auto& lang : langs_of(obj)) {
                    std::string v = view(obj, lang)->dump();
                    auto [it, fresh] = per_lang.emplace(lang, Slot{v, obj});
                    if (!fresh && it->second.view != v)
                        throw Error("INCOMPATIBLE-SCHEMA",
                                    std::string(kind) + " '" + (named ? key : obj.dump()) + "' differs for language " + lang);
                }
            }
        };
        for (const char* k : named_kinds) absorb(k, true);
        for (const char* k : rule_kinds) absorb(k, false);
    }

    json out;
    out["root"] = root;
    out["language-codes"] = languages;
    out["regions"] = regions;
    auto emit = [&](const char* kind) {
        json arr = json::array();
        for (const auto& [key, per_lang] : table[kind]) {
            std::map<std::string, LanguageSet> classes;  // view -> languages
            for (const auto& [lang, slot] : per_lang) classes[slot.view].insert(lang);
            for (const auto& [v, cls] : classes) {
                const Slot& rep = per_lang.at(*cls.begin());
                arr.push_back(*restrict(rep.object, LanguageSet{*cls.begin()}, &cls));
            }
        }
        out[kind] = arr;
    };
    for (const char* k : named_kinds) emit(k);
    for (const char* k : rule_kinds) emit(k);
    return canonicalize(resources_from_json(out));
}

ResourceSet merge(const ResourceSet& a, const ResourceSet& b) {
    std::vector<ResourceSet> both{a, b};
    return merge(both);
}

ResourceSet extract(const ResourceSet& res, const LanguageSet& langs) {
    if (langs.empty()) throw Error("UNKNOWN-LANGUAGE", "no language requested");
    for (const auto& l : langs)
        if (!res.languages.contains(l)) throw Error("UNKNOWN-LANGUAGE", "resources do not declare '" + l + "'");
    json doc = to_json(res);
    json out;
    out["root"] = doc["root"];
    out["language-codes"] = langs;
    std::set<std::string> used;
    for (const char* kind : named_kinds) {
        json arr = json::array();
        for (const auto& obj : doc[kind])
            if (auto r = restrict(obj, langs, nullptr)) {
                if (std::string(kind) == "systems") used.insert((*r)["region"].get<std::string>());
                arr.push_back(std::move(*r));
            }
        out[kind] = arr;
    }
    for (const char* kind : rule_kinds) {
        json arr = json::array();
        for (const auto& obj : doc[kind])
            if (auto r = restrict(obj, langs, nullptr)) arr.push_back(std::move(*r));
        out[kind] = arr;
    }
    json regions = json::array();
    for (const auto& r : res.regions)
        if (used.contains(r)) regions.push_back(r);
    out["regions"] = regions;
    return canonicalize(resources_from_json(out));
}

// ---------------------------------------------------------------------------
// segments
// ---------------------------------------------------------------------------

namespace {

void collect_inquiries(const ChooserNode& node, std::set<std::string>& out) {
    if (!node.is_leaf()) out.insert(node.inquiry);
    for (const auto& c : node.children) collect_inquiries(c, out);
}

}  // namespace

ResourceSet import_segment(const ResourceSet& src, const SegmentSelector& selector, const std::string& src_lang,
                           const ResourceSet& dst, const std::string& dst_lang) {
    if (selector.empty()) return dst;
    ResourceSet view = language_view(src, src_lang);

    std::set<std::string> names;
    if (!selector.region.empty()) {
        if (std::ranges::find(view.regions, selector.region) == view.regions.end())
            throw Error("UNKNOWN-REGION", "'" + selector.region + "' is not a region of the source");
        for (const auto& s : view.systems)
            if (s.region == selector.region) names.insert(s.name);
    }
    for (const auto& n : selector.systems) {
        if (std::ranges::none_of(view.systems, [&](const System& s) { return s.name == n; }))
            throw Error("UNKNOWN-SYSTEM", "'" + n + "' is not a system of the source");
        names.insert(n);
    }

    const LanguageSet tag{dst_lang};
    ResourceSet seg;
    seg.root = dst.root.empty() ? view.root : dst.root;
    seg.languages = tag;

    std::set<std::string> owned, choosers, inquiries, lexemes, regions;
    for (const auto& s : view.systems) {
        if (!names.contains(s.name)) continue;
        seg.systems.push_back(s);
        regions.insert(s.region);
        if (!s.chooser.empty()) choosers.insert(s.chooser);
        for (const auto& f : s.outputs) {
            owned.insert(f.name);
            for (const auto& st : f.realizations)
                if (st.op == RealizationOp::Lexify && st.args.size() > 1) lexemes.insert(st.args[1]);
        }
    }

    std::set<std::string> known = owned;
    known.insert(seg.root);
    for (const auto& s : dst.systems)
        for (const auto& f : s.outputs) known.insert(f.name);
    for (const auto& s : seg.systems) {
        auto refs = condition_features(s.entry);
        for (const auto& f : s.outputs)
            for (const auto& st : f.realizations)
                for (const auto& p : st.preselected()) refs.push_back(p);
        for (const auto& r : refs)
            if (!known.contains(r))
                throw Error("DANGLING-CLOSURE", s.name + " refers to '" + r + "', found neither in the segment nor in the target");
    }

    for (const auto& c : view.choosers)
        if (choosers.contains(c.name)) {
            seg.choosers.push_back(c);
            collect_inquiries(c.tree, inquiries);
        }
    for (const auto& i : view.inquiries)
        if (inquiries.contains(i.name)) seg.inquiries.push_back(i);
    for (const auto& l : view.lexemes)
        if (lexemes.contains(l.name)) seg.lexemes.push_back(l);
    for (const auto& m : view.morphology)
        if (owned.contains(m.feature)) seg.morphology.push_back(m);
    for (const auto& p : view.punctuation)
        if (owned.contains(p.feature)) seg.punctuation.push_back(p);
    seg.regions.assign(regions.begin(), regions.end());

    // retag everything, nested tags included, to the target language
    json doc = to_json(seg);
    for (auto& [k, v] : doc.items())
        if (v.is_array() && k != "regions" && k != "language-codes") v = *restrict(v, LanguageSet{src_lang, dst_lang}, &tag);
    seg = resources_from_json(doc);
    seg.languages = tag;

    ResourceSet target = dst;
    target.languages.insert(dst_lang);
    if (target.root.empty()) target.root = seg.root;
    std::vector<ResourceSet> inputs{target, seg};
    ResourceSet out = merge(inputs);
    out.version = dst.version;
    return out;
}

// ---------------------------------------------------------------------------
// statistics and views
// ---------------------------------------------------------------------------

std::size_t object_count(const ResourceSet& res) {
    return res.systems.size() + res.choosers.size() + res.inquiries.size() + res.lexemes.size();
}

SharingReport sharing_stats(const ResourceSet& merged, std::span<const ResourceSet> originals) {
    SharingReport r;
    r.merged_object_count = object_count(merged);
    for (const auto& s : merged.systems) ++r.regions[s.region].merged;
    for (const auto& o : originals) {
        std::string label;
        for (const auto& l : o.languages) label += (label.empty() ? "" : "+") + l;
        r.original_counts.emplace_back(label, object_count(o));
        r.original_total += object_count(o);
        for (const auto& s : o.systems) ++r.regions[s.region].original;
    }
    r.ratio = r.original_total ? static_cast<double>(r.merged_object_count) / static_cast<double>(r.original_total) : 0.0;
    return r;
}

json to_json(const SharingReport& r) {
    json originals = json::array();
    for (const auto& [label, n] : r.original_counts) originals.push_back({{"languages", label}, {"objects", n}});
    json regions = json::object();
    for (const auto& [name, s] : r.regions) regions[name] = {{"merged", s.merged}, {"original", s.original}};
    return {{"merged_objects", r.merged_object_count},
            {"originals", originals},
            {"original_total", r.original_total},
            {"ratio", r.ratio},
            {"regions", regions}};
}

LatticeFragment contrastive_view(const ResourceSet& res, const LanguageSet& langs, const std::string& region) {
    if (std::ranges::find(res.regions, region) == res.regions.end())
        throw Error("UNKNOWN-REGION", "'" + region + "' is not a region");
    ResourceSet part = extract(res, langs);
    auto label = [&](const LanguageSet& l) -> std::string {
        if (langs.size() >= 2 && std::ranges::includes(l, langs)) return "SHARED";
        std::string codes;
        for (const auto& c : l) codes += (codes.empty() ? "" : ",") + c;
        return "restricted-to-" + codes;
    };
    std::map<std::string, int> variants;
    for (const auto& s : part.systems)
        if (s.region == region) ++variants[s.name];

    LatticeFragment frag;
    frag.title = region;
    for (const auto& s : part.systems) {
        if (s.region != region) continue;
        std::string key = s.name;
        if (variants[s.name] > 1) {
            key += '@';
            for (const auto& c : s.languages) key += (key.back() == '@' ? "" : ",") + c;
        }
        frag.labels[key] = label(s.languages);
        for (const auto& f : s.outputs) frag.labels[key + "/" + f.name] = label(f.languages);
        frag.systems.push_back(s);
    }
    SystemNetwork net(part.root, part.systems);
    frag.stubs = boundary_stubs(net, frag.systems);
    return frag;
}

}  // namespace latticegen
