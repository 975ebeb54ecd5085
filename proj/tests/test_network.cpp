#include <doctest.h>

#include "support.hpp"

using namespace latticegen;
using namespace testing;

namespace {

System sys(std::string name, EntryCondition entry, std::vector<std::string> outs, std::string region = "R") {
    System s{std::move(name), std::move(entry), {}, std::move(region), {}, {}};
    for (auto& o : outs) s.outputs.push_back({std::move(o), {}, {}});
    return s;
}

std::vector<std::string> names(const std::vector<const System*>& systems) {
    std::vector<std::string> out;
    for (const System* s : systems) out.push_back(s->name);
    return out;
}

}  // namespace

TEST_CASE("entry conditions") {
    using E = EntryCondition;
    FeatureSet se{"clause", "indicative", "declarative"};
    CHECK(eval_entry_condition(E::all_of({E::leaf("indicative"), E::leaf("declarative")}), se));
    CHECK_FALSE(eval_entry_condition(E::any_of({E::leaf("imperative"), E::leaf("interrogative")}), {"indicative"}));
    CHECK(eval_entry_condition(E::always(), {}));

    auto cond = E::any_of({E::all_of({E::leaf("b"), E::leaf("a")}), E::leaf("c")});
    CHECK(to_string(normalize(cond)) == "OR(AND(a, b), c)");
    CHECK(condition_features(cond) == std::vector<std::string>{"b", "a", "c"});
    // absorption: a OR (a AND b) is a
    CHECK(to_string(normalize(E::any_of({E::leaf("a"), E::all_of({E::leaf("a"), E::leaf("b")})}))) == "a");
}

TEST_CASE("fixture network validates") {
    const auto& g = en_grammar();
    CHECK(g.network().systems().size() == 25);
    auto report = validate_network(g.network(), g.lexicon());
    CHECK(report.errors.empty());
    CHECK(report.warnings.empty());
}

TEST_CASE("validation errors") {
    SUBCASE("self-referencing entry") {
        SystemNetwork net("start", {sys("A", EntryCondition::leaf("a1"), {"a1", "a2"})});
        auto report = validate_network(net, {});
        CHECK(report.errors.size() == 1);
        CHECK(report.count("CYCLE") == 1);
    }
    SUBCASE("preselect of an unknown feature") {
        System a = sys("A", EntryCondition::leaf("start"), {"a1", "a2"});
        a.outputs[0].realizations.push_back(statement("p1", RealizationOp::Preselect, {"Thing", "xyz"}));
        SystemNetwork net("start", {a});
        auto report = validate_network(net, {});
        CHECK(report.errors.size() == 1);
        CHECK(report.count("DANGLING-REF") == 1);
    }
    SUBCASE("duplicate feature across systems") {
        SystemNetwork net("start", {sys("A", EntryCondition::leaf("start"), {"x", "y"}),
                                    sys("B", EntryCondition::leaf("start"), {"x", "z"})});
        CHECK(validate_network(net, {}).count("DUPLICATE-FEATURE") == 1);
    }
    SUBCASE("unreachable system") {
        SystemNetwork net("start", {sys("A", EntryCondition::leaf("start"), {"a1", "a2"}),
                                    sys("B", EntryCondition::leaf("elsewhere"), {"b1", "b2"})});
        auto report = validate_network(net, {});
        CHECK(report.count("DANGLING-REF") == 1);
        CHECK(report.count("UNREACHABLE") == 1);
    }
    SUBCASE("no outputs") {
        SystemNetwork net("start", {sys("A", EntryCondition::leaf("start"), {})});
        CHECK(validate_network(net, {}).count("EMPTY-OUTPUTS") == 1);
    }
}

TEST_CASE("entered systems") {
    const auto& net = en_grammar().network();
    CHECK(names(entered_systems(net, {"start"}, {})) == std::vector<std::string>{"RANK"});
    CHECK(names(entered_systems(net, {"start", "clause"}, {"RANK"})) == std::vector<std::string>{"MOOD-TYPE", "TRANSITIVITY"});
    CHECK(entered_systems(net, {}, {}).empty());
    // nothing without the root, even when a leaf condition holds
    CHECK(entered_systems(net, {"clause"}, {"RANK"}).empty());
}

TEST_CASE("paradigmatic context") {
    const auto& net = en_grammar().network();
    CHECK(to_string(paradigmatic_context(net, "MOOD-TYPE")) == "clause");
    CHECK(to_string(paradigmatic_context(net, "RANK")) == "TRUE");
    SystemNetwork tiny("start", {sys("A", EntryCondition::always(), {"a", "b"})});
    CHECK(to_string(paradigmatic_context(tiny, "A")) == "TRUE");
    CHECK_THROWS_WITH_AS(paradigmatic_context(net, "NOPE"), doctest::Contains("UNKNOWN-SYSTEM"), Error);
}

TEST_CASE("lattice subgraph") {
    const auto& net = en_grammar().network();
    CHECK(lattice_subgraph(net, "MOOD-TYPE", 0).systems.size() == 1);
    auto frag = lattice_subgraph(net, "clause", 1);
    std::set<std::string> got;
    for (const auto& s : frag.systems) got.insert(s.name);
    CHECK(got == std::set<std::string>{"RANK", "MOOD-TYPE", "TRANSITIVITY"});
    CHECK(lattice_subgraph(net, "RANK", unbounded_radius).systems.size() == net.systems().size());
    CHECK_THROWS_WITH_AS(lattice_subgraph(net, "nothing", 1), doctest::Contains("UNKNOWN-FOCUS"), Error);
}

TEST_CASE("traversal order is topological") {
    std::mt19937 rng(7);
    for (int round = 0; round < 20; ++round) {
        SystemNetwork net("start", random_systems(rng, 12, 3));
        for (const auto& s : net.systems())
            for (const System* pre : net.prerequisites(s)) CHECK(net.rank(*pre) < net.rank(s));
    }
}
