#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "latticegen/error.hpp"
#include "latticegen/resources.hpp"
#include "latticegen/suite.hpp"

namespace latticegen {

class ValidationFailed : public Error {
public:
    explicit ValidationFailed(ValidationReport report, const std::string& context = "resources do not validate");

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

class SuiteRegression : public Error {
public:
    explicit SuiteRegression(SuiteReport report);

    const SuiteReport& report() const noexcept { return report_; }

private:
    SuiteReport report_;
};

/// Replacement of one object, anchored on the hash of what it replaces.
/// kind: system | lexeme | chooser | inquiry | region. A region edit
/// replaces all systems of the region with the `after` array. An empty
/// before-hash creates; a missing `after` deletes.
struct Edit {
    std::string kind;
    std::string name;
    std::string before_hash;
    std::optional<json> after;

    bool operator==(const Edit&) const = default;
};

struct Patch {
    std::string id;
    std::vector<Edit> edits;
    std::string note;
    std::string timestamp;

    bool replaces_region() const;
    bool operator==(const Patch&) const = default;
};

json to_json(const Edit& edit);
Edit edit_from_json(const json& j);
json to_json(const Patch& patch);
Patch patch_from_json(const json& j);
void save_patch(const std::filesystem::path& path, const Patch& patch);
Patch load_patch(const std::filesystem::path& path);

/// Current content of an object (array of systems for a region); nullopt
/// when absent. Throws AMBIGUOUS-TARGET when several language variants
/// share the name, UNKNOWN-KIND.
std::optional<json> object_content(const ResourceSet& res, const std::string& kind, const std::string& name);
/// "" when absent.
std::string object_hash(const ResourceSet& res, const std::string& kind, const std::string& name);
Edit make_edit(const ResourceSet& res, const std::string& kind, const std::string& name, std::optional<json> after);

/// Applies without validating. Throws STALE-PATCH on a before-hash mismatch.
ResourceSet apply_edit(const ResourceSet& res, const Edit& edit);
ResourceSet apply_patch(const ResourceSet& res, const Patch& patch);
/// The patch that undoes `patch` once applied to `base`.
Patch invert_patch(const ResourceSet& base, const Patch& patch);

/// Throws ValidationFailed when errors are reported.
void require_valid(const ResourceSet& res);

/// Loads and validates; files are concatenated. Throws PARSE-ERROR,
/// VALIDATION-FAILED (as ValidationFailed).
ResourceSet load_resources(const std::vector<std::filesystem::path>& paths);

struct AcceptOptions {
    bool force = false;                    // skip the suite gate
    const Suite* suite = nullptr;          // required for region replacement
    std::vector<Patch> patches;            // loaded patch files, applied after the workspace's own
    bool write_files = true;
};

/// Loaded resources plus pending edits. Readers take snapshots; every
/// mutation swaps in a new immutable version.
class Workspace {
public:
    static Workspace load(const std::vector<std::filesystem::path>& paths);
    explicit Workspace(ResourceSet res);
    Workspace(Workspace&& other) noexcept;

    std::shared_ptr<const ResourceSet> base() const;
    /// The shadow when edits are pending, else the base.
    std::shared_ptr<const ResourceSet> current() const;
    std::vector<Edit> pending() const;
    std::vector<Patch> frozen() const;
    ResourceVersion version() const;
    const std::vector<std::filesystem::path>& paths() const { return paths_; }

    /// Throws ValidationFailed (nothing changes), STALE-PATCH.
    void record_edit(const Edit& edit);
    /// Freezes the pending edits; writes `<dir>/<id>.patch.json` when dir
    /// is given. Throws EMPTY-PATCH.
    Patch create_patch(const std::string& note = {}, const std::filesystem::path& dir = {});
    /// Applies frozen patches, pending edits, then options.patches to the
    /// base. Throws STALE-PATCH, ValidationFailed, SUITE-REGRESSION.
    std::shared_ptr<const ResourceSet> accept_patches(const AcceptOptions& options = {});
    /// Drops pending and frozen edits.
    void discard();

    static std::filesystem::path versions_path(const std::filesystem::path& resource_path);

private:
    void write_files() const;

    mutable std::mutex mutex_;
    std::vector<std::filesystem::path> paths_;
    std::vector<std::set<std::string>> origins_;  // object keys per file
    std::shared_ptr<const ResourceSet> base_;
    std::shared_ptr<const ResourceSet> shadow_;
    std::vector<Edit> pending_;
    std::vector<Patch> frozen_;
    std::string base_hash_;  // at load
};

/// e.g. 2026-10-17T09:30:00Z
std::string utc_timestamp();

}  // namespace latticegen
