#include <doctest.h>

#include "latticegen/suite.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace latticegen;
using namespace testing;

namespace {

const Suite& fixture_suite() {
    static const Suite suite = load_suite(fixture("toy-en.suite.json"));
    return suite;
}

ResourceSet with_chooser_leaf(const std::string& chooser, const std::string& branch, const std::string& feature) {
    ResourceSet res = toy_en();
    json doc = to_json(res);
    for (auto& c : doc["choosers"])
        if (c["name"] == chooser) c["tree"]["branches"][branch]["actions"][0]["choose"] = feature;
    return resources_from_json(doc);
}

}  // namespace

TEST_CASE("fixture suite passes") {
    const Suite& suite = fixture_suite();
    CHECK(suite.examples.size() == 23);
    SuiteReport report = run_suite(toy_en(), suite);
    CHECK(report.passed() == 23);
    CHECK(report.ok());
    for (const auto& r : report.rows) CHECK_FALSE(r.diff);

    SuiteReport none = run_suite(toy_en(), Suite{});
    CHECK(none.rows.empty());
    CHECK(to_json(none).dump() == "[]");
}

TEST_CASE("recording") {
    Suite suite;
    GenerationResult r = generate_en("chase");
    const Example& e = record_example(suite, r, "chase-declarative", read_text_file(fixture("spl/chase.spl")));
    CHECK(e.expected == "The cat chases the mouse.");
    CHECK(e.units.front().path == "clause");
    CHECK(e.units.front().selections.size() == r.units.front().selections.size());
    CHECK(suite.index.at("declarative") == std::set<std::string>{"chase-declarative"});

    CHECK_THROWS_WITH_AS(record_example(suite, r, "chase-declarative", ""), doctest::Contains("DUPLICATE-NAME"), Error);
    CHECK_THROWS_WITH_AS(record_example(suite, generate_en("chase-unknown"), "partial", ""),
                         doctest::Contains("PARTIAL-RESULT"), Error);
    CHECK(suite.examples.size() == 1);
}

TEST_CASE("mutated mood chooser") {
    ResourceSet res = with_chooser_leaf("MOOD-TYPE-chooser", "statement", "imperative");
    SuiteReport report = run_suite(res, fixture_suite());
    CHECK(report.failed() > 0);
    for (const auto& r : report.rows) {
        if (r.pass) continue;
        CAPTURE(r.name);
        REQUIRE(r.diff);
        REQUIRE(r.diff->first_divergence);
        CHECK(r.diff->first_divergence->system == "MOOD-TYPE");
        CHECK(r.diff->first_divergence->unit == "clause");
    }
}

TEST_CASE("feature index") {
    const Suite& suite = fixture_suite();
    CHECK(suite.index == brute_force_index(suite));
    CHECK(build_index(suite.examples) == suite.index);

    // incremental recording over the same inputs gives the same index
    Suite again;
    for (const auto& e : suite.examples) record_example(again, generate(en_grammar(), parse_spl(e.spl)), e.name, e.spl);
    CHECK(again.index == suite.index);

    CHECK(examples_for(suite, toy_en(), "interrogative") ==
          std::vector<std::string>{"chase-past-question", "chase-plural-question", "chase-question", "sleep-question",
                                   "sleep-time-question"});
    CHECK_THROWS_WITH_AS(examples_for(suite, toy_en(), "nonsense"), doctest::Contains("UNKNOWN-FEATURE"), Error);

    auto gaps = coverage_gaps(suite, toy_en());
    for (const auto& f : gaps) CHECK(examples_for(suite, toy_en(), f).empty());
    CHECK(std::ranges::find(gaps, "interrogative") == gaps.end());
}

TEST_CASE("suite files") {
    auto dir = scratch_dir("suite");
    const Suite& suite = fixture_suite();
    save_suite(dir / "x.suite.json", suite);
    CHECK(std::filesystem::exists(dir / "x.index.json"));
    Suite back = load_suite(dir / "x.suite.json");
    CHECK(back.examples == suite.examples);
    CHECK(back.index == suite.index);

    std::filesystem::remove(dir / "x.index.json");
    CHECK(load_suite(dir / "x.suite.json").index == suite.index);
    std::filesystem::remove_all(dir);
}
