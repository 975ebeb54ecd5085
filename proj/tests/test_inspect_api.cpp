#include <doctest.h>

#include <atomic>
#include <thread>

#include "latticegen/inspect_api.hpp"
#include "latticegen/regions.hpp"
#include "support.hpp"

using namespace latticegen;
using namespace testing;

namespace {

std::string spl_text(const std::string& name) { return read_text_file(fixture("spl/" + name + ".spl")); }

std::string post_generate(InspectService& svc, const std::string& name) {
    ApiResponse r = svc.handle("POST", "/generate", {}, json{{"spl", spl_text(name)}}.dump());
    REQUIRE(r.status == 200);
    return r.body.at("result_id").get<std::string>();
}

}  // namespace

TEST_CASE("generate and inspect") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    ApiResponse g = svc.handle("POST", "/generate", {}, json{{"spl", spl_text("chase-question")}}.dump());
    CHECK(g.status == 200);
    CHECK(g.body["string"] == "Does the cat chase the mouse?");
    CHECK(result_from_json(g.body["structure"]) == generate_en("chase-question"));
    std::string id = g.body["result_id"];

    CHECK(svc.handle("GET", "/result/" + id).status == 200);
    ApiResponse se = svc.handle("GET", "/result/" + id + "/unit/clause/se");
    CHECK(se.status == 200);
    bool interrogative = false;
    for (const auto& s : se.body) interrogative |= s["feature"] == "interrogative";
    CHECK(interrogative);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/se", {{"view", "subgraph"}}).status == 200);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/se", {{"view", "replay"}}).body.size() >= 1);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/se", {{"view", "tree"}}).status == 400);

    ApiResponse path = svc.handle("GET", "/result/" + id + "/unit/clause/system/MOOD-TYPE/chooser-path");
    CHECK(path.status == 200);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/system/IMPERATIVE-TYPE/chooser-path").status == 404);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/nowhere/se").status == 404);
}

TEST_CASE("focus on a nested unit") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    std::string id = post_generate(svc, "eat-garden");
    ApiResponse f =
        svc.handle("GET", "/result/" + id + "/unit/clause/Location/Minirange/focus", {{"aspect", "lexical-class:Thing"}});
    REQUIRE(f.status == 200);
    std::set<std::string> described;
    for (const auto& e : f.body["entries"]) described.insert(e["description"]);
    CHECK(described.contains("Classify(Thing, NOUN)"));
    CHECK(described.contains("Classify(Thing, COMMON-NOUN)"));
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/focus", {{"aspect", "colour:red"}}).status == 404);
    CHECK(svc.handle("GET", "/result/" + id + "/unit/clause/focus").status == 400);
}

TEST_CASE("errors") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    CHECK(svc.handle("GET", "/result/nope").status == 404);
    CHECK(svc.handle("GET", "/nowhere").status == 404);
    CHECK(svc.handle("DELETE", "/result/r1").status == 405);
    CHECK(svc.handle("POST", "/generate", {}, "{not json").status == 400);
    CHECK(svc.handle("POST", "/generate", {}, "{}").status == 400);
    ApiResponse partial = svc.handle("POST", "/generate", {}, json{{"spl", spl_text("chase-unknown")}}.dump());
    CHECK(partial.status == 200);
    CHECK(partial.body["structure"]["status"] == "partial");
    CHECK(svc.handle("GET", "/system/NOWHERE").status == 404);
    CHECK(svc.handle("GET", "/regions/NOWHERE/view").status == 404);
    CHECK(status_for("STALE-PATCH") == 409);
    CHECK(status_for("VALIDATION-FAILED") == 422);
    CHECK(status_for("PARSE-ERROR") == 400);
}

TEST_CASE("lattice, regions and systems") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    ApiResponse g = svc.handle("GET", "/regions/graph");
    CHECK(g.status == 200);
    CHECK(region_graph_from_json(g.body) == region_graph(en_grammar().network(), toy_en().regions));
    ApiResponse v = svc.handle("GET", "/regions/MOOD/view");
    CHECK(fragment_from_json(v.body).systems.size() == region_view(en_grammar().network(), "MOOD").systems.size());
    ApiResponse s = svc.handle("GET", "/system/MOOD-TYPE");
    CHECK(s.status == 200);
    CHECK(s.body.contains("chooser"));
    CHECK(svc.handle("GET", "/lattice", {{"focus", "MOOD-TYPE"}, {"radius", "1"}}).status == 200);
}

TEST_CASE("edits and patches") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    json chooser = *object_content(toy_en(), "chooser", "MOOD-TYPE-chooser");
    chooser["tree"]["branches"]["question"]["actions"][0]["choose"] = "imperative";

    ApiResponse stale = svc.handle("POST", "/edit", {},
                                   json{{"kind", "chooser"}, {"name", "MOOD-TYPE-chooser"}, {"before", "0000"}, {"after", chooser}}.dump());
    CHECK(stale.status == 409);

    json broken = *object_content(toy_en(), "system", "MOOD-TYPE");
    broken["entry"] = "nowhere";
    ApiResponse invalid = svc.handle("POST", "/edit", {}, json{{"kind", "system"}, {"name", "MOOD-TYPE"}, {"after", broken}}.dump());
    CHECK(invalid.status == 422);
    CHECK(invalid.body.contains("report"));
    CHECK(ws.pending().empty());

    CHECK(svc.handle("POST", "/patch/create").status == 400);
    ApiResponse e = svc.handle("POST", "/edit", {}, json{{"kind", "chooser"}, {"name", "MOOD-TYPE-chooser"}, {"after", chooser}}.dump());
    CHECK(e.status == 200);
    CHECK(e.body["pending"] == 1);
    ApiResponse p = svc.handle("POST", "/patch/create", {}, json{{"note", "mood"}}.dump());
    CHECK(p.status == 200);
    ApiResponse a = svc.handle("POST", "/patch/accept", {}, json{{"force", false}}.dump());
    CHECK(a.status == 200);
    CHECK(a.body["patches"].size() == 1);
    CHECK(svc.handle("POST", "/patch/accept", {}, json{{"patches", {p.body}}}.dump()).status == 409);

    ApiResponse q = svc.handle("POST", "/generate", {}, json{{"spl", spl_text("chase-question")}}.dump());
    CHECK(q.body["string"] == "Chase the mouse.");
}

TEST_CASE("suite run and region gate") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en", load_suite(fixture("toy-en.suite.json")));
    ApiResponse run = svc.handle("POST", "/suite/run");
    CHECK(run.status == 200);
    CHECK(run.body.size() == 23);
    for (const auto& row : run.body) CHECK(row["status"] == "PASS");

    json theme = *object_content(toy_en(), "region", "THEME");
    for (auto& s : theme)
        if (s["name"] == "TEMPORAL-SEQUENCE")
            std::swap(s["outputs"][0]["realizations"][0]["args"][1], s["outputs"][1]["realizations"][0]["args"][1]);
    ApiResponse e = svc.handle("POST", "/edit", {}, json{{"kind", "region"}, {"name", "THEME"}, {"after", theme}}.dump());
    CHECK(e.status == 200);
    ApiResponse gated = svc.handle("POST", "/patch/accept");
    CHECK(gated.status == 422);
    CHECK(gated.body["code"] == "SUITE-REGRESSION");
    CHECK(gated.body["report"].size() == 23);
    CHECK(ws.pending().size() == 1);
    ApiResponse forced = svc.handle("POST", "/patch/accept", {}, json{{"force", true}}.dump());
    CHECK(forced.status == 200);
}

TEST_CASE("diff and snapshots") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    CHECK(svc.snapshot() == json{{"results", json::object()}});

    std::string a = post_generate(svc, "chase");
    std::string b = post_generate(svc, "chase-question");
    ApiResponse d = svc.handle("GET", "/diff", {{"a", a}, {"b", b}});
    CHECK(d.status == 200);
    CHECK(d.body["first_divergence"]["system"] == "INDICATIVE-TYPE");
    CHECK(svc.handle("GET", "/diff", {{"a", a}, {"b", "r99"}}).status == 404);

    json snap = json::parse(svc.snapshot().dump());
    InspectService fresh(ws, "en");
    fresh.load_snapshot(snap);
    CHECK(fresh.result_count() == 2);
    CHECK(fresh.handle("GET", "/diff", {{"a", a}, {"b", b}}).body == d.body);
    CHECK(fresh.handle("GET", "/result/" + b).body == svc.handle("GET", "/result/" + b).body);
    CHECK(fresh.handle("GET", "/result/" + a + "/unit/clause/focus", {{"aspect", "function:Finite"}}).body ==
          svc.handle("GET", "/result/" + a + "/unit/clause/focus", {{"aspect", "function:Finite"}}).body);
    CHECK(post_generate(fresh, "sleep") == "r3");
}

TEST_CASE("reads during edits") {
    Workspace ws(toy_en());
    InspectService svc(ws, "en");
    std::string id = post_generate(svc, "chase");
    std::atomic<bool> done = false;
    std::atomic<int> failures = 0;
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t)
        readers.emplace_back([&] {
            while (!done) {
                if (svc.handle("GET", "/result/" + id + "/unit/clause/se").status != 200) ++failures;
                if (svc.handle("GET", "/regions/graph").status != 200) ++failures;
                ApiResponse g = svc.handle("POST", "/generate", {}, json{{"spl", spl_text("sleep")}}.dump());
                if (g.status != 200 || g.body["string"] != "The dog sleeps.") ++failures;
            }
        });
    json chooser = *object_content(toy_en(), "chooser", "MOOD-TYPE-chooser");
    for (int i = 0; i < 20; ++i) {
        chooser["tree"]["branches"]["question"]["actions"][0]["choose"] = i % 2 ? "imperative" : "indicative";
        svc.handle("POST", "/edit", {}, json{{"kind", "chooser"}, {"name", "MOOD-TYPE-chooser"}, {"after", chooser}}.dump());
    }
    done = true;
    for (auto& t : readers) t.join();
    CHECK(failures == 0);
}
