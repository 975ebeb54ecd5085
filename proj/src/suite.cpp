#include "latticegen/suite.hpp"

#include <algorithm>
#include <memory>

#include "latticegen/error.hpp"

namespace latticegen {

std::set<std::string> Example::features() const {
    std::set<std::string> out;
    for (const auto& u : units)
        for (const auto& s : u.selections) out.insert(s.feature);
    return out;
}

GenerationResult Example::as_result() const {
    GenerationResult r;
    r.text = expected;
    r.language = language;
    for (const auto& u : units) {
        UnitRecord rec;
        rec.id = u.path;
        rec.selections = u.selections;
        r.units.push_back(std::move(rec));
    }
    return r;
}

const Example* Suite::find(std::string_view name) const {
    for (const auto& e : examples)
        if (e.name == name) return &e;
    return nullptr;
}

const Example& record_example(Suite& suite, const GenerationResult& result, const std::string& name,
                              const std::string& spl) {
    if (!result.complete)
        throw Error("PARTIAL-RESULT", name + ": generation was partial (" + result.reason_code + ")");
    if (suite.find(name)) throw Error("DUPLICATE-NAME", "the suite already has an example named '" + name + "'");
    Example ex{name, spl, result.language, result.text, {}, {}};
    for (const auto& u : result.units) {
        RecordedUnit ru{u.id, {}};
        for (const auto& s : u.selections) ru.selections.push_back({s.system, s.feature, s.origin, {}, s.signature});
        ex.units.push_back(std::move(ru));
    }
    for (const auto& f : ex.features()) suite.index[f].insert(name);
    suite.examples.push_back(std::move(ex));
    return suite.examples.back();
}

FeatureIndex build_index(const std::vector<Example>& examples) {
    FeatureIndex index;
    for (const auto& e : examples)
        for (const auto& f : e.features()) index[f].insert(e.name);
    return index;
}

std::size_t SuiteReport::passed() const {
    return static_cast<std::size_t>(std::ranges::count_if(rows, [](const SuiteRow& r) { return r.pass; }));
}

SuiteReport run_suite(const ResourceSet& res, const Suite& suite) {
    SuiteReport report;
    std::map<std::string, std::unique_ptr<Grammar>> grammars;
    for (const auto& ex : suite.examples) {
        SuiteRow row{ex.name, false, ex.expected, {}, {}, {}};
        try {
            auto& g = grammars[ex.language];
            if (!g) g = std::make_unique<Grammar>(res, ex.language);
            GenerationResult current = generate(*g, parse_spl(ex.spl));
            row.actual = current.text;
            row.pass = current.text == ex.expected;
            if (!row.pass) row.diff = diff_traces(current, ex.as_result());
        } catch (const Error& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

json to_json(const SuiteReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {{"name", r.name}, {"status", r.pass ? "PASS" : "FAIL"}, {"expected", r.expected}, {"actual", r.actual}};
        if (!r.error.empty()) row["error"] = r.error;
        if (r.diff) row["diff"] = to_json(*r.diff);
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::set<std::string> network_features(const ResourceSet& res) {
    std::set<std::string> out{res.root};
    for (const auto& s : res.systems)
        for (const auto& f : s.outputs) out.insert(f.name);
    return out;
}

}  // namespace

std::vector<std::string> examples_for(const Suite& suite, const ResourceSet& res, const std::string& feature) {
    if (!network_features(res).contains(feature))
        throw Error("UNKNOWN-FEATURE", "'" + feature + "' is not a feature of the resources");
    auto it = suite.index.find(feature);
    if (it == suite.index.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<std::string> coverage_gaps(const Suite& suite, const ResourceSet& res) {
    std::vector<std::string> out;
    for (const auto& f : network_features(res))
        if (!suite.index.contains(f)) out.push_back(f);
    return out;
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

json to_json(const Example& e) {
    json units = json::array();
    for (const auto& u : e.units) {
        json sels = json::array();
        for (const auto& s : u.selections)
            sels.push_back({{"system", s.system}, {"feature", s.feature}, {"origin", s.origin}, {"signature", s.signature}});
        units.push_back({{"path", u.path}, {"selections", sels}});
    }
    json j = {{"name", e.name}, {"spl", e.spl}, {"language", e.language}, {"expected", e.expected}, {"units", units}};
    if (!e.trace.empty()) j["trace"] = e.trace;
    return j;
}

Example example_from_json(const json& j) {
    try {
        Example e;
        e.name = j.at("name").get<std::string>();
        e.spl = j.at("spl").get<std::string>();
        e.language = j.at("language").get<std::string>();
        e.expected = j.at("expected").get<std::string>();
        e.trace = j.value("trace", "");
        for (const auto& u : j.value("units", json::array())) {
            RecordedUnit ru{u.at("path").get<std::string>(), {}};
            for (const auto& s : u.at("selections"))
                ru.selections.push_back({s.at("system").get<std::string>(), s.at("feature").get<std::string>(),
                                         s.value("origin", ""), {}, s.value("signature", "")});
            e.units.push_back(std::move(ru));
        }
        return e;
    } catch (const json::exception& ex) {
        throw Error("PARSE-ERROR", std::string("suite example: ") + ex.what());
    }
}

std::filesystem::path index_path(const std::filesystem::path& suite_path) {
    std::string name = suite_path.filename().string();
    const std::string ext = ".suite.json";
    if (name.size() > ext.size() && name.ends_with(ext)) name.resize(name.size() - ext.size());
    return suite_path.parent_path() / (name + ".index.json");
}

void save_suite(const std::filesystem::path& path, const Suite& suite) {
    json arr = json::array();
    for (const auto& e : suite.examples) arr.push_back(to_json(e));
    write_text_file(path, canonical_text(arr));
    json index = json::object();
    for (const auto& [f, names] : suite.index) index[f] = names;
    write_text_file(index_path(path), canonical_text(index));
}

Suite load_suite(const std::filesystem::path& path) {
    json doc = read_json_file(path);
    if (!doc.is_array()) throw Error("PARSE-ERROR", path.string() + ": a suite is an array of examples");
    Suite suite;
    for (const auto& j : doc) {
        Example e = example_from_json(j);
        if (suite.find(e.name)) throw Error("DUPLICATE-NAME", "the suite already has an example named '" + e.name + "'");
        suite.examples.push_back(std::move(e));
    }
    auto ipath = index_path(path);
    if (std::filesystem::exists(ipath)) {
        json index = read_json_file(ipath);
        for (const auto& [f, names] : index.items())
            suite.index[f] = names.get<std::set<std::string>>();
    } else {
        suite.index = build_index(suite.examples);
    }
    return suite;
}

}  // namespace latticegen
