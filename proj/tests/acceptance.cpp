// One line per acceptance criterion; exits non-zero when any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "latticegen/multilingual.hpp"
#include "latticegen/regions.hpp"
#include "latticegen/suite.hpp"
#include "latticegen/trace.hpp"
#include "latticegen/workspace.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace latticegen;
using namespace testing;

namespace {

struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

const Suite& en_suite() {
    static const Suite suite = load_suite(fixture("toy-en.suite.json"));
    return suite;
}

void determinism(Check& c) {
    const Suite& suite = en_suite();
    c.expect(suite.examples.size() >= 15, "suite has " + std::to_string(suite.examples.size()) + " examples");
    std::vector<std::string> first;
    for (int run = 0; run < 10; ++run) {
        std::vector<std::string> texts;
        for (const auto& e : suite.examples) {
            GenerationResult r = generate(en_grammar(), parse_spl(e.spl));
            c.expect(r.text == e.expected, e.name + ": '" + r.text + "' != '" + e.expected + "'");
            c.expect(r.chooser_invocations == r.fired_systems(),
                     e.name + ": " + std::to_string(r.chooser_invocations) + " invocations for " +
                         std::to_string(r.fired_systems()) + " fired systems");
            texts.push_back(canonical_text(to_json(r)));
        }
        if (run == 0) first = texts;
        c.expect(texts == first, "run " + std::to_string(run) + " differs from run 0");
    }
    auto start = std::chrono::steady_clock::now();
    SuiteReport report = run_suite(toy_en(), suite);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    c.expect(report.ok(), std::to_string(report.failed()) + " suite failures");
    c.expect(ms < 1000, "suite took " + std::to_string(ms) + "ms");
    c.notes.push_back(std::to_string(suite.examples.size()) + " sentences x 10, suite " + std::to_string(ms) + "ms");
}

void provenance(Check& c) {
    const SystemNetwork& net = en_grammar().network();
    std::size_t tokens = 0, adjacencies = 0, constituents = 0;
    for (const auto& e : en_suite().examples) {
        GenerationResult r = generate(en_grammar(), parse_spl(e.spl));
        for (std::size_t i = 0; i < r.tokens.size(); ++i, ++tokens)
            c.expect(!where_introduced(r, r.tokens[i].unit, "token:" + std::to_string(i), &net).entries.empty(),
                     e.name + ": token " + std::to_string(i));
        for (std::size_t i = 0; i + 1 < r.tokens.size(); ++i, ++adjacencies)
            c.expect(!adjacency_provenance(r, i, &net).entries.empty(), e.name + ": adjacency " + std::to_string(i));
        for (const auto& u : r.units)
            for (std::size_t b : u.structure.order)
                for (const auto& fn : u.structure.bundles[b].functions) {
                    ++constituents;
                    c.expect(!where_introduced(r, u.id, "function:" + fn, &net).entries.empty(),
                             e.name + ": " + u.id + " " + fn);
                }
    }
    c.notes.push_back(std::to_string(tokens) + " tokens, " + std::to_string(adjacencies) + " adjacencies, " +
                      std::to_string(constituents) + " functions");
}

struct Mutation {
    std::string system;
    std::function<void(json&)> apply;
};

std::function<void(json&)> chooser_leaf(const std::string& chooser, const std::string& branch, const std::string& feature) {
    return [=](json& doc) {
        for (auto& ch : doc["choosers"])
            if (ch["name"] == chooser) ch["tree"]["branches"][branch]["actions"][0]["choose"] = feature;
    };
}

std::function<void(json&)> realization_arg(const std::string& system, std::size_t output, std::size_t arg,
                                           const std::string& value) {
    return [=](json& doc) {
        for (auto& s : doc["systems"])
            if (s["name"] == system) s["outputs"][output]["realizations"][0]["args"][arg] = value;
    };
}

void error_localization(Check& c) {
    std::vector<Mutation> mutations{
        {"MOOD-TYPE", chooser_leaf("MOOD-TYPE-chooser", "question", "imperative")},
        {"INDICATIVE-TYPE", chooser_leaf("INDICATIVE-TYPE-chooser", "statement", "interrogative")},
        {"TENSE", chooser_leaf("TENSE-chooser", "present", "past")},
        {"AGREEMENT", chooser_leaf("AGREEMENT-chooser", "single", "plural-agreement")},
        {"POLARITY", chooser_leaf("POLARITY-chooser", "positive", "negative")},
        {"NUMBER", chooser_leaf("NUMBER-chooser", "single", "plural")},
        {"DEIXIS", chooser_leaf("DEIXIS-chooser", "identifiable", "nonspecific")},
        {"DEMONSTRATION", chooser_leaf("DEMONSTRATION-chooser", "neutral", "far-demonstrative")},
        {"TEMPORAL-SEQUENCE", chooser_leaf("TEMPORAL-SEQUENCE-chooser", "successive", "simultaneous")},
        {"SPATIAL-RELATION", chooser_leaf("SPATIAL-RELATION-chooser", "interior", "proximal-place")},
        {"THEME-MARKING", chooser_leaf("THEME-MARKING-chooser", "unmarked", "marked-theme")},
        {"CAUSAL-TYPE", chooser_leaf("CAUSAL-TYPE-chooser", "concessive", "consequential")},
        {"TEMPORAL-SEQUENCE", realization_arg("TEMPORAL-SEQUENCE", 0, 1, "meanwhile-conj")},
    };
    std::size_t localized = 0;
    for (const auto& m : mutations) {
        json doc = to_json(toy_en());
        m.apply(doc);
        SuiteReport report = run_suite(resources_from_json(doc), en_suite());
        bool ok = !report.ok();
        std::string detail = m.system + ": suite still passes";
        for (const auto& row : report.rows) {
            if (row.pass) continue;
            std::string named = row.diff && row.diff->first_divergence ? row.diff->first_divergence->system : "";
            if (named != m.system) {
                ok = false;
                detail = m.system + ": " + row.name + " names '" + named + "'" + (row.error.empty() ? "" : " " + row.error);
                break;
            }
        }
        c.expect(ok, detail);
        localized += ok;
    }
    c.notes.push_back(std::to_string(localized) + "/" + std::to_string(mutations.size()) + " mutations localized");
}

void multilingual(Check& c) {
    std::vector<ResourceSet> fixtures{toy_en(), toy_de()};
    ResourceSet merged = merge(fixtures);
    c.expect(canonical_text(extract(merged, {"en"})) == canonical_text(toy_en()), "en round trip");
    c.expect(canonical_text(extract(merged, {"de"})) == canonical_text(toy_de()), "de round trip");

    std::size_t en_count = 0, de_count = 0;
    auto all = raw_objects(fixture("toy-en.json"), en_count);
    auto de = raw_objects(fixture("toy-de.json"), de_count);
    all.insert(de.begin(), de.end());
    SharingReport r = sharing_stats(merged, fixtures);
    c.expect(r.original_total == en_count + de_count && r.merged_object_count == all.size(),
             "sharing " + std::to_string(r.merged_object_count) + "/" + std::to_string(r.original_total) + " vs " +
                 std::to_string(all.size()) + "/" + std::to_string(en_count + de_count));
    c.expect(r.ratio == double(all.size()) / double(en_count + de_count), "sharing ratio");

    std::mt19937 rng(2024);
    for (int round = 0; round < 100; ++round) {
        std::string tag = "pair " + std::to_string(round) + ": ";
        ResourcePool pool = random_pool(rng);
        ResourceSet a = random_variant(rng, pool, "en");
        ResourceSet b = random_variant(rng, pool, "de");
        ResourceSet ab = merge(a, b);
        c.expect(canonical_text(ab) == canonical_text(merge(b, a)), tag + "not commutative");
        c.expect(canonical_text(merge(ab, ab)) == canonical_text(ab), tag + "not idempotent");
        c.expect(canonical_text(extract(ab, {"en"})) == canonical_text(a), tag + "en round trip");
        c.expect(canonical_text(extract(ab, {"de"})) == canonical_text(b), tag + "de round trip");
        std::vector<ResourceSet> inputs{a, b};
        c.expect(sharing_stats(ab, inputs).merged_object_count == object_count(a) + object_count(b) - shared_objects(a, b),
                 tag + "sharing");
    }
    char ratio[16];
    std::snprintf(ratio, sizeof ratio, "%.2f", r.ratio);
    c.notes.push_back(std::string("sharing ratio ") + ratio + ", 100 random pairs");
}

void region_graphs(Check& c) {
    const SystemNetwork& net = en_grammar().network();
    std::vector<System> systems(net.systems().begin(), net.systems().end());
    c.expect(edge_map(region_graph(net, toy_en().regions)) == brute_force_edges(systems), "fixture graph");

    std::map<std::string, std::size_t> stubs, covered;
    for (const auto& r : toy_en().regions) {
        LatticeFragment view = region_view(net, r);
        stubs[r] = view.stubs.size();
        for (const auto& s : view.systems) ++covered[s.name];
    }
    c.expect(stubs == std::map<std::string, std::size_t>{{"MOOD", 2}, {"TRANSITIVITY", 3}, {"NOMINAL-GROUP", 1}, {"THEME", 2}},
             "fixture stub counts");
    c.expect(covered.size() == systems.size(), "fixture views miss systems");
    for (const auto& [name, n] : covered) c.expect(n == 1, name + " in " + std::to_string(n) + " views");

    std::mt19937 rng(99);
    for (int round = 0; round < 100; ++round) {
        std::string tag = "network " + std::to_string(round) + ": ";
        auto random = random_systems(rng, 5 + round % 20, 1 + round % 5);
        SystemNetwork rnet("start", random);
        c.expect(edge_map(region_graph(rnet)) == brute_force_edges(random), tag + "graph");
        std::set<std::string> regions;
        for (const auto& s : random) regions.insert(s.region);
        std::map<std::string, std::size_t> seen;
        for (const auto& r : regions) {
            LatticeFragment view = region_view(rnet, r);
            for (const auto& s : view.systems) ++seen[s.name];
            // one stub per distinct external feature referenced
            std::set<std::string> external;
            for (const auto& s : view.systems) {
                std::vector<std::string> refs;
                leaves(s.entry, refs);
                for (const auto& f : s.outputs)
                    for (const auto& st : f.realizations)
                        if (st.op == RealizationOp::Preselect)
                            for (std::size_t i = 1; i < st.args.size(); ++i) refs.push_back(st.args[i]);
                for (const auto& ref : refs)
                    for (const auto& o : random)
                        for (const auto& f : o.outputs)
                            if (f.name == ref && o.region != r) external.insert(ref);
            }
            std::set<std::string> stubbed;
            for (const auto& st : view.stubs) stubbed.insert(st.feature);
            c.expect(external == stubbed, tag + r + " stubs");
        }
        c.expect(seen.size() == random.size(), tag + "partition");
        for (const auto& [name, n] : seen) c.expect(n == 1, tag + name + " in several views");
    }
    c.notes.push_back("fixture + 100 random networks");
}

void feature_index(Check& c) {
    const Suite& suite = en_suite();
    c.expect(suite.index == brute_force_index(suite), "stored index");
    Suite again;
    for (const auto& e : suite.examples) record_example(again, generate(en_grammar(), parse_spl(e.spl)), e.name, e.spl);
    c.expect(again.index == brute_force_index(again), "incremental index");
    c.expect(again.index == suite.index, "re-recorded index");
    c.expect(examples_for(suite, toy_en(), "interrogative") ==
                 std::vector<std::string>{"chase-past-question", "chase-plural-question", "chase-question", "sleep-question",
                                          "sleep-time-question"},
             "interrogative examples");
    c.notes.push_back(std::to_string(suite.index.size()) + " features");
}

json theme_swapped(const ResourceSet& res) {
    json systems = *object_content(res, "region", "THEME");
    for (auto& s : systems)
        if (s["name"] == "TEMPORAL-SEQUENCE")
            std::swap(s["outputs"][0]["realizations"][0]["args"][1], s["outputs"][1]["realizations"][0]["args"][1]);
    return systems;
}

template <class E>
bool throws(const std::function<void()>& f) {
    try {
        f();
    } catch (const E&) {
        return true;
    } catch (...) {
    }
    return false;
}

void patch_lifecycle(Check& c) {
    auto dir = scratch_dir("acceptance-patch");
    auto path = dir / "toy-en.json";
    std::filesystem::copy_file(fixture("toy-en.json"), path);

    Workspace ws = Workspace::load({path});
    json chooser = *object_content(*ws.base(), "chooser", "MOOD-TYPE-chooser");
    chooser["tree"]["branches"]["question"]["actions"][0]["choose"] = "imperative";
    ws.record_edit(make_edit(*ws.base(), "chooser", "MOOD-TYPE-chooser", chooser));
    Patch p = ws.create_patch("mood", dir);
    c.expect(std::filesystem::exists(dir / (p.id + ".patch.json")), "patch file");
    std::string expected = canonical_text(*ws.current());
    AcceptOptions opts;
    ws.accept_patches(opts);

    Workspace reloaded = Workspace::load({path});
    c.expect(canonical_text(*reloaded.current()) == expected, "reload content");
    c.expect(reloaded.version().patches == std::vector<std::string>{p.id}, "reload history");
    c.expect(generate(*reloaded.current(), spl("chase-question"), "en").text == "Chase the mouse.", "patched output");

    AcceptOptions again;
    again.patches.push_back(load_patch(dir / (p.id + ".patch.json")));
    c.expect(throws<Error>([&] { reloaded.accept_patches(again); }), "replayed patch accepted");
    Workspace fresh(toy_en());
    Patch old = p;
    old.id = "p-other";
    fresh.record_edit(make_edit(*fresh.base(), "chooser", "MOOD-TYPE-chooser", json(chooser)));
    AcceptOptions stale;
    stale.write_files = false;
    stale.patches.push_back(old);
    try {
        fresh.accept_patches(stale);
        c.expect(false, "stale patch accepted");
    } catch (const Error& e) {
        c.expect(e.code() == "STALE-PATCH", "stale patch gave " + e.code());
    }

    // region replacement waits for a passing suite
    Workspace gated(toy_en());
    gated.record_edit(make_edit(*gated.base(), "region", "THEME", theme_swapped(*gated.base())));
    AcceptOptions with_suite;
    with_suite.write_files = false;
    with_suite.suite = &en_suite();
    c.expect(throws<SuiteRegression>([&] { gated.accept_patches(with_suite); }), "region patch not blocked");
    c.expect(gated.version().patches.empty(), "blocked patch recorded");

    Suite updated;
    for (const auto& e : en_suite().examples) {
        GenerationResult r = generate(*gated.current(), parse_spl(e.spl), "en");
        record_example(updated, r, e.name, e.spl);
    }
    with_suite.suite = &updated;
    c.expect(!throws<Error>([&] { gated.accept_patches(with_suite); }), "region patch rejected after suite update");
    c.expect(gated.version().patches.size() == 1, "region patch history");
    std::filesystem::remove_all(dir);
    c.notes.push_back("accepted " + p.id);
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, void (*)(Check&)>> criteria{
        {"deterministic generation", determinism},
        {"provenance completeness", provenance},
        {"error localization", error_localization},
        {"multilingual round trip", multilingual},
        {"region graph", region_graphs},
        {"feature index", feature_index},
        {"patch lifecycle", patch_lifecycle},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            run(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        std::string summary;
        for (const auto& n : c.notes) summary += (summary.empty() ? "" : "; ") + n;
        if (c.failures.empty()) {
            std::cout << "PASS " << name << " (" << summary << ")\n";
        } else {
            ++failed;
            std::cout << "FAIL " << name << ": " << c.failures.front();
            if (c.failures.size() > 1) std::cout << " (+" << c.failures.size() - 1 << " more)";
            std::cout << "\n";
        }
    }
    return failed ? 1 : 0;
}
