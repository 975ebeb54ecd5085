#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latticegen/generator.hpp"
#include "latticegen/trace.hpp"

namespace latticegen {

struct RecordedUnit {
    std::string path;
    std::vector<Selection> selections;  // chooser outcomes are not kept

    bool operator==(const RecordedUnit&) const = default;
};

struct Example {
    std::string name;
    std::string spl;
    std::string language;
    std::string expected;
    std::vector<RecordedUnit> units;
    std::string trace;  // optional .trace.json path

    std::set<std::string> features() const;
    /// A result holding only what the recording keeps, for diffing.
    GenerationResult as_result() const;
    bool operator==(const Example&) const = default;
};

using FeatureIndex = std::map<std::string, std::set<std::string>>;  // feature -> example names

struct Suite {
    std::vector<Example> examples;
    FeatureIndex index;

    const Example* find(std::string_view name) const;
};

/// Throws PARTIAL-RESULT and DUPLICATE-NAME. Updates the index.
const Example& record_example(Suite& suite, const GenerationResult& result, const std::string& name,
                              const std::string& spl);

FeatureIndex build_index(const std::vector<Example>& examples);

struct SuiteRow {
    std::string name;
    bool pass = false;
    std::string expected;
    std::string actual;
    std::string error;  // resource or input failure
    std::optional<TraceDiff> diff;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;

    std::size_t passed() const;
    std::size_t failed() const { return rows.size() - passed(); }
    bool ok() const { return failed() == 0; }
};

SuiteReport run_suite(const ResourceSet& res, const Suite& suite);
json to_json(const SuiteReport& report);

/// Sorted example names. Throws UNKNOWN-FEATURE.
std::vector<std::string> examples_for(const Suite& suite, const ResourceSet& res, const std::string& feature);
/// Features of the resources selected by no example.
std::vector<std::string> coverage_gaps(const Suite& suite, const ResourceSet& res);

json to_json(const Example& example);
Example example_from_json(const json& j);

/// `<stem>.suite.json` plus `<stem>.index.json` beside it.
void save_suite(const std::filesystem::path& path, const Suite& suite);
/// Reads the index file when present, otherwise rebuilds it.
Suite load_suite(const std::filesystem::path& path);
std::filesystem::path index_path(const std::filesystem::path& suite_path);

}  // namespace latticegen
