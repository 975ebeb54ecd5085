#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "latticegen/network.hpp"
#include "latticegen/semantics.hpp"

namespace latticegen {

using json = nlohmann::json;

/// Maps a selected feature to a morphological feature on the bundles that
/// carry `function` (all leaf bundles of the unit when `function` is empty).
struct MorphologyRule {
    std::string feature;
    std::string function;
    std::string morph;
    LanguageSet languages;

    bool operator==(const MorphologyRule&) const = default;
};

/// Terminal punctuation contributed by a feature of the root unit.
struct PunctuationRule {
    std::string feature;
    std::string mark;
    LanguageSet languages;

    bool operator==(const PunctuationRule&) const = default;
};

struct ResourceVersion {
    std::string base;                  // content hash at load
    std::vector<std::string> patches;  // accepted patch ids, in order

    bool operator==(const ResourceVersion&) const = default;
};

/// A (possibly multilingual) bundle of grammar, lexicon, choosers and
/// inquiries. Plain value; every object carries its language set.
struct ResourceSet {
    std::string root;
    LanguageSet languages;
    std::vector<std::string> regions;
    std::vector<System> systems;
    std::vector<Lexeme> lexemes;
    std::vector<Chooser> choosers;
    std::vector<Inquiry> inquiries;
    std::vector<MorphologyRule> morphology;
    std::vector<PunctuationRule> punctuation;
    ResourceVersion version;  // not part of the resource document

    bool operator==(const ResourceSet& other) const;
};

// --- JSON document form ----------------------------------------------------

json to_json(const EntryCondition& cond);
EntryCondition entry_from_json(const json& j);
json to_json(const RealizationStatement& st);
json to_json(const System& system);
System system_from_json(const json& j, const LanguageSet& inherited);
json to_json(const Lexeme& lexeme);
Lexeme lexeme_from_json(const json& j, const LanguageSet& inherited);
json to_json(const Inquiry& inquiry);
Inquiry inquiry_from_json(const json& j, const LanguageSet& inherited);
json to_json(const Chooser& chooser);
Chooser chooser_from_json(const json& j, const LanguageSet& inherited);
json to_json(const ChooserOutcome& outcome);
ChooserOutcome outcome_from_json(const json& j);

/// Canonical document: top-level object arrays sorted by name, every object
/// with an explicit `languages` array.
json to_json(const ResourceSet& res);
/// Throws PARSE-ERROR naming the offending object.
ResourceSet resources_from_json(const json& doc);

/// Sorted keys, two-space indent, trailing newline.
std::string canonical_text(const json& doc);
std::string canonical_text(const ResourceSet& res);
ResourceSet canonicalize(const ResourceSet& res);

/// 64-bit FNV-1a, 16 hex digits.
std::string content_hash(std::string_view text);

/// Reads and parses a JSON file. Throws PARSE-ERROR (with line/column) or
/// IO-ERROR.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// --- language views ----------------------------------------------------------

/// The objects applicable to `language`, nested features and statements
/// filtered too. Throws UNKNOWN-LANGUAGE.
ResourceSet language_view(const ResourceSet& res, const std::string& language);

/// Validates every language view plus chooser/inquiry consistency.
ValidationReport validate_resources(const ResourceSet& res);
json to_json(const ValidationReport& report);

/// Indexed single-language grammar: everything generation needs.
class Grammar {
public:
    Grammar(const ResourceSet& res, const std::string& language);
    Grammar(const Grammar&) = delete;
    Grammar& operator=(const Grammar&) = delete;
    Grammar(Grammar&&) = default;

    const std::string& language() const { return language_; }
    const SystemNetwork& network() const { return network_; }
    const ResourceSet& resources() const { return view_; }
    std::span<const Lexeme> lexicon() const { return view_.lexemes; }

    const Lexeme* lexeme(std::string_view name) const;
    const Chooser* chooser(std::string_view name) const;
    const Inquiry* inquiry(std::string_view name) const;
    InquiryLookup inquiry_lookup() const;
    /// Statement by id, with the system and feature that carry it.
    struct StatementSite {
        const RealizationStatement* statement = nullptr;
        const System* system = nullptr;
        const Feature* feature = nullptr;
    };
    StatementSite statement(std::string_view id) const;

    const std::string& version_id() const { return version_id_; }

private:
    std::string language_;
    ResourceSet view_;
    SystemNetwork network_;
    std::unordered_map<std::string, std::size_t> lexemes_;
    std::unordered_map<std::string, std::size_t> choosers_;
    std::unordered_map<std::string, std::size_t> inquiries_;
    std::unordered_map<std::string, StatementSite> statements_;
    std::string version_id_;
};

}  // namespace latticegen
