#pragma once

#include <unistd.h>

#include <random>
#include <string>

#include "latticegen/generator.hpp"
#include "latticegen/resources.hpp"
#include "latticegen/workspace.hpp"

namespace testing {

using namespace latticegen;

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(FIXTURES) / rel; }

inline const ResourceSet& toy_en() {
    static const ResourceSet res = load_resources({fixture("toy-en.json")});
    return res;
}

inline const ResourceSet& toy_de() {
    static const ResourceSet res = load_resources({fixture("toy-de.json")});
    return res;
}

inline const Grammar& en_grammar() {
    static const Grammar g(toy_en(), "en");
    return g;
}

inline SemanticGraph spl(const std::string& name) { return parse_spl(read_text_file(fixture("spl/" + name + ".spl"))); }

inline GenerationResult generate_en(const std::string& name) { return generate(en_grammar(), spl(name)); }

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("latticegen-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline RealizationStatement statement(std::string id, RealizationOp op, std::vector<std::string> args) {
    return {std::move(id), op, std::move(args), {}};
}

/// Acyclic random lattice: system i enters on features of earlier systems,
/// with occasional Preselects pointing anywhere.
inline std::vector<System> random_systems(std::mt19937& rng, std::size_t n, std::size_t regions) {
    std::vector<System> systems;
    std::vector<std::string> features{"start"};
    auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
    for (std::size_t i = 0; i < n; ++i) {
        System s;
        s.name = "S" + std::to_string(i);
        s.region = "R" + std::to_string(pick(regions));
        std::size_t leaves = 1 + pick(3);
        std::vector<EntryCondition> ops;
        for (std::size_t k = 0; k < leaves; ++k) ops.push_back(EntryCondition::leaf(features[pick(features.size())]));
        s.entry = ops.size() == 1 ? ops[0] : (pick(2) ? EntryCondition::all_of(ops) : EntryCondition::any_of(ops));
        std::size_t outs = 2 + pick(2);
        for (std::size_t k = 0; k < outs; ++k) s.outputs.push_back({s.name + "-f" + std::to_string(k), {}, {}});
        systems.push_back(std::move(s));
        for (const auto& f : systems.back().outputs) features.push_back(f.name);
    }
    for (auto& s : systems)
        for (auto& f : s.outputs)
            if (pick(4) == 0) {
                std::string target = features[1 + pick(features.size() - 1)];
                f.realizations.push_back(
                    statement(f.name + "-p", RealizationOp::Preselect, {"Thing", target}));
            }
    return systems;
}

/// A shared pool of objects, perturbed per language: some objects dropped,
/// some changed, the rest identical across languages.
struct ResourcePool {
    std::vector<System> systems;
    std::vector<Lexeme> lexemes;
    std::vector<Inquiry> inquiries;
};

inline ResourcePool random_pool(std::mt19937& rng) {
    ResourcePool pool;
    pool.systems = random_systems(rng, 8, 3);
    for (int i = 0; i < 5; ++i) {
        std::string name = "lex" + std::to_string(i);
        pool.lexemes.push_back({name, name, {"NOUN"}, {{{}, name}, {{"plural"}, name + "s"}}, {}, {}});
    }
    for (int i = 0; i < 3; ++i)
        pool.inquiries.push_back({"q" + std::to_string(i), {"x"}, {"yes", "no"}, {}, "no", {}});
    return pool;
}

inline ResourceSet random_variant(std::mt19937& rng, const ResourcePool& pool, const std::string& lang) {
    auto roll = [&] { return std::uniform_int_distribution<int>(0, 9)(rng); };
    json doc = {{"root", "start"}, {"language-codes", {lang}}, {"regions", json::array()}};
    std::set<std::string> regions;
    json systems = json::array(), lexemes = json::array(), inquiries = json::array();
    for (System s : pool.systems) {
        int r = roll();
        if (r < 2) continue;
        if (r < 5) s.outputs.push_back({s.name + "-" + lang, {}, {}});
        regions.insert(s.region);
        systems.push_back(to_json(s));
    }
    for (Lexeme l : pool.lexemes) {
        int r = roll();
        if (r < 2) continue;
        if (r < 5) l.spelling += "-" + lang;
        lexemes.push_back(to_json(l));
    }
    for (Inquiry q : pool.inquiries) {
        int r = roll();
        if (r < 2) continue;
        if (r < 5) q.default_answer = "yes";
        inquiries.push_back(to_json(q));
    }
    doc["regions"] = regions;
    doc["systems"] = systems;
    doc["lexemes"] = lexemes;
    doc["inquiries"] = inquiries;
    return canonicalize(resources_from_json(doc));
}

}  // namespace testing
