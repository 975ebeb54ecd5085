#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "latticegen/cli.hpp"
#include "support.hpp"

using namespace latticegen;
using namespace testing;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string en() { return fixture("toy-en.json").string(); }
std::string de() { return fixture("toy-de.json").string(); }
std::string spl_path(const std::string& name) { return fixture("spl/" + name + ".spl").string(); }

}  // namespace

TEST_CASE("generate") {
    Run r = cli({"generate", spl_path("chase"), "--lang", "en", "-r", en()});
    CHECK(r.code == 0);
    CHECK(r.out == "The cat chases the mouse.\n");
    CHECK(cli({"-r", en(), "generate", spl_path("chase")}).out == r.out);

    Run missing = cli({"-r", en(), "generate", "missing.spl"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("missing.spl") != std::string::npos);

    Run partial = cli({"-r", en(), "generate", spl_path("chase-unknown")});
    CHECK(partial.code == 1);
    CHECK(partial.err.find("NO-CANDIDATE") != std::string::npos);

    Run json_out = cli({"-r", en(), "-f", "json", "generate", spl_path("eat-garden")});
    CHECK(result_from_json(json::parse(json_out.out)) == generate_en("eat-garden"));
    CHECK(cli({"-r", en(), "-f", "json", "generate", spl_path("eat-garden")}).out == json_out.out);

    CHECK(cli({"-r", en(), "--lang", "zz", "generate", spl_path("chase")}).code == 1);
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    Run r = cli({"generate"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({"-r", en(), "-f", "yaml", "validate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("resources from the environment") {
    ::setenv("LATTICEGEN_RESOURCES", en().c_str(), 1);
    Run r = cli({"generate", spl_path("sleep")});
    ::unsetenv("LATTICEGEN_RESOURCES");
    CHECK(r.code == 0);
    CHECK(r.out == "The dog sleeps.\n");
    CHECK(cli({"generate", spl_path("sleep")}).code == 2);
}

TEST_CASE("test and validate") {
    Run t = cli({"-r", en(), "test", fixture("toy-en.suite.json").string()});
    CHECK(t.code == 0);
    CHECK(t.out.ends_with("23/23 PASS\n"));

    Run j = cli({"-r", en(), "-f", "json", "test", fixture("toy-en.suite.json").string()});
    CHECK(json::parse(j.out).size() == 23);

    Run v = cli({"-r", en(), "validate"});
    CHECK(v.code == 0);
    CHECK(v.out == "0 errors, 0 warnings\n");

    auto dir = scratch_dir("cli-validate");
    json doc = read_json_file(en());
    doc["systems"][1]["entry"] = "nowhere";
    write_text_file(dir / "broken.json", doc.dump());
    Run bad = cli({"-r", (dir / "broken.json").string(), "validate"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("DANGLING-REF") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("multilingual commands") {
    auto dir = scratch_dir("cli-ml");
    auto merged = (dir / "merged.json").string();
    CHECK(cli({"merge", en(), de(), "-o", merged}).code == 0);
    Run ex = cli({"-r", merged, "extract", "--langs", "en"});
    CHECK(ex.code == 0);
    CHECK(ex.out == canonical_text(toy_en()));

    Run s = cli({"stats", en(), de()});
    CHECK(s.code == 0);
    CHECK(s.out.find("ratio: 0.77\n") != std::string::npos);
    Run sj = cli({"-f", "json", "stats", en(), de(), "--merged", merged});
    CHECK(json::parse(sj.out)["merged_objects"] == 108);

    Run view = cli({"-r", merged, "regions", "view", "TRANSITIVITY", "--contrast", "en,de"});
    CHECK(view.out.find("MENTAL-TYPE [restricted-to-en]") != std::string::npos);
    CHECK(view.out.find("AGENCY [SHARED]") != std::string::npos);

    CHECK(cli({"import-segment", "--from", en(), "--from-lang", "en", "--into", de(), "--into-lang", "de", "--region",
               "NOWHERE"})
              .code == 1);
    CHECK(cli({"import-segment", "--from", en(), "--from-lang", "en", "--into", de(), "--into-lang", "de"}).code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("regions") {
    Run g = cli({"-r", en(), "regions", "graph"});
    CHECK(g.code == 0);
    CHECK(g.out.find("MOOD -> THEME (1)\n") != std::string::npos);
    Run dot = cli({"-r", en(), "regions", "graph", "--dot"});
    CHECK(dot.out.starts_with("digraph regions {"));
    Run lint = cli({"-r", en(), "regions", "lint"});
    CHECK(lint.out.find("MOOD intra 7 inter 2\n") != std::string::npos);
    CHECK(cli({"-r", en(), "regions", "view", "NOWHERE"}).code == 1);
    CHECK(cli({"-r", en(), "regions"}).code == 2);
}

TEST_CASE("traces") {
    auto dir = scratch_dir("cli-trace");
    auto a = (dir / "a.trace.json").string();
    auto b = (dir / "b.trace.json").string();
    CHECK(cli({"-r", en(), "generate", spl_path("chase"), "--trace", a}).code == 0);
    CHECK(cli({"-r", en(), "generate", spl_path("chase-question"), "--trace", b}).code == 0);

    Run d = cli({"diff-traces", a, b});
    CHECK(d.code == 0);
    CHECK(d.out.starts_with("first divergence: INDICATIVE-TYPE in clause: declarative vs interrogative"));
    CHECK(cli({"diff-traces", a, a}).out == "no divergence\n");

    Run f = cli({"focus", a, "clause", "ordering:Subject<Finite"});
    CHECK(f.code == 0);
    CHECK(f.out.find("Order(") != std::string::npos);
    Run fj = cli({"-f", "json", "focus", a, "clause", "function:Finite"});
    CHECK(json::parse(fj.out)["entries"].size() >= 1);
    CHECK(cli({"focus", a, "nowhere", "function:Finite"}).code == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("suite commands") {
    auto dir = scratch_dir("cli-suite");
    auto suite = (dir / "s.suite.json").string();
    CHECK(cli({"-r", en(), "record", spl_path("chase"), spl_path("chase-question"), "-s", suite}).code == 0);
    CHECK(cli({"-r", en(), "record", spl_path("chase"), "-s", suite}).code == 1);
    CHECK(cli({"-r", en(), "record", spl_path("sleep"), "-s", suite, "--expect", "Wrong."}).code == 1);
    CHECK(cli({"-r", en(), "record", spl_path("chase-unknown"), "-s", suite}).code == 1);
    CHECK(cli({"-r", en(), "test", suite}).out == "PASS chase\nPASS chase-question\n2/2 PASS\n");
    CHECK(cli({"-r", en(), "examples", "interrogative", "-s", suite}).out == "chase-question\n");
    Run none = cli({"-r", en(), "examples", "past", "-s", suite});
    CHECK(none.out.empty());
    CHECK(none.err.find("warning") != std::string::npos);
    CHECK(cli({"-r", en(), "examples", "bogus", "-s", suite}).code == 1);
    CHECK(cli({"-r", en(), "coverage", "-s", suite}).out.find("past\n") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("patch commands") {
    auto dir = scratch_dir("cli-patch");
    auto res = (dir / "toy-en.json").string();
    std::filesystem::copy_file(en(), res);
    json edits = json::array();
    json chooser = *object_content(toy_en(), "chooser", "MOOD-TYPE-chooser");
    chooser["tree"]["branches"]["question"]["actions"][0]["choose"] = "imperative";
    edits.push_back({{"kind", "chooser"}, {"name", "MOOD-TYPE-chooser"}, {"after", chooser}});
    write_text_file(dir / "edits.json", edits.dump());

    Run c = cli({"-r", res, "patch", "create", (dir / "edits.json").string(), "-d", dir.string(), "--note", "mood"});
    REQUIRE(c.code == 0);
    std::string patch_file = c.out.substr(0, c.out.size() - 1);
    CHECK(std::filesystem::exists(patch_file));

    Run a = cli({"-r", res, "patch", "accept", patch_file});
    CHECK(a.code == 0);
    CHECK(a.out.find("after 1 patches") != std::string::npos);
    CHECK(cli({"-r", res, "generate", spl_path("chase-question")}).out == "Chase the mouse.\n");
    Run stale = cli({"-r", res, "patch", "accept", patch_file});
    CHECK(stale.code == 1);
    CHECK(stale.err.find("STALE-PATCH") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("text formats") {
    SharingReport s;
    s.ratio = 2.0 / 3.0;
    CHECK(format_text(s).find("ratio: 0.67\n") != std::string::npos);
    CHECK(format_text(SuiteReport{}) == "0/0 PASS\n");
    CHECK(to_json(SuiteReport{}).dump() == "[]");
}
