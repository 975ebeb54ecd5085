#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "latticegen/resources.hpp"

namespace latticegen {

/// Objects of the same kind and name are compared language by language:
/// languages whose views coincide end up in one object, every other
/// language gets its own variant. Throws INCOMPATIBLE-SCHEMA when two
/// inputs define the same object differently for the same language.
ResourceSet merge(std::span<const ResourceSet> inputs);
ResourceSet merge(const ResourceSet& a, const ResourceSet& b);

/// Objects applicable to any of `langs`, language sets intersected. Throws
/// UNKNOWN-LANGUAGE.
ResourceSet extract(const ResourceSet& res, const LanguageSet& langs);

struct SegmentSelector {
    std::string region;
    std::vector<std::string> systems;

    bool empty() const { return region.empty() && systems.empty(); }
};

/// Copies the selected systems with their choosers, inquiries, lexified
/// lexemes and morphology into `dst` as `dst_lang`. Throws DANGLING-CLOSURE,
/// UNKNOWN-REGION, UNKNOWN-SYSTEM, UNKNOWN-LANGUAGE, INCOMPATIBLE-SCHEMA.
ResourceSet import_segment(const ResourceSet& src, const SegmentSelector& selector, const std::string& src_lang,
                           const ResourceSet& dst, const std::string& dst_lang);

/// Systems + choosers + inquiries + lexemes.
std::size_t object_count(const ResourceSet& res);

struct RegionSharing {
    std::size_t merged = 0;
    std::size_t original = 0;

    bool operator==(const RegionSharing&) const = default;
};

struct SharingReport {
    std::size_t merged_object_count = 0;
    std::vector<std::pair<std::string, std::size_t>> original_counts;  // per input, labelled by its languages
    std::size_t original_total = 0;
    double ratio = 0.0;
    std::map<std::string, RegionSharing> regions;  // systems only
};

SharingReport sharing_stats(const ResourceSet& merged, std::span<const ResourceSet> originals);
json to_json(const SharingReport& report);

/// Every system and feature of `region` labelled SHARED (covers all of
/// `langs`, at least two of them) or restricted-to-<codes>. Throws
/// UNKNOWN-REGION.
LatticeFragment contrastive_view(const ResourceSet& res, const LanguageSet& langs, const std::string& region);

}  // namespace latticegen
