#include "latticegen/workspace.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace latticegen {

namespace {

std::string summary(const ValidationReport& report) {
    std::string out;
    for (const auto& d : report.errors) {
        if (!out.empty()) out += "; ";
        out += d.code + " " + d.object + ": " + d.message;
    }
    return out;
}

const char* array_key(const std::string& kind) {
    if (kind == "system" || kind == "region") return "systems";
    if (kind == "lexeme") return "lexemes";
    if (kind == "chooser") return "choosers";
    if (kind == "inquiry") return "inquiries";
    throw Error("UNKNOWN-KIND", "no object kind '" + kind + "'");
}

bool targets(const json& item, const std::string& kind, const std::string& name) {
    if (kind == "region") return item.value("region", "") == name;
    return item.value("name", "") == name;
}

std::string hash_of(const json& content) { return content_hash(canonical_text(content)); }

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report, const std::string& context)
    : Error("VALIDATION-FAILED", context + (report.errors.empty() ? "" : ": " + summary(report))),
      report_(std::move(report)) {}

SuiteRegression::SuiteRegression(SuiteReport report)
    : Error("SUITE-REGRESSION", std::to_string(report.failed()) + " of " + std::to_string(report.rows.size()) +
                                    " examples no longer generate their recorded strings"),
      report_(std::move(report)) {}

bool Patch::replaces_region() const {
    return std::ranges::any_of(edits, [](const Edit& e) { return e.kind == "region"; });
}

json to_json(const Edit& e) {
    json j = {{"kind", e.kind}, {"name", e.name}, {"before", e.before_hash}};
    if (e.after) j["after"] = *e.after;
    return j;
}

Edit edit_from_json(const json& j) {
    try {
        Edit e{j.at("kind").get<std::string>(), j.at("name").get<std::string>(), j.value("before", ""), {}};
        if (j.contains("after") && !j["after"].is_null()) e.after = j["after"];
        return e;
    } catch (const json::exception& ex) {
        throw Error("PARSE-ERROR", std::string("edit: ") + ex.what());
    }
}

json to_json(const Patch& p) {
    json edits = json::array();
    for (const auto& e : p.edits) edits.push_back(to_json(e));
    return {{"id", p.id}, {"note", p.note}, {"timestamp", p.timestamp}, {"edits", edits}};
}

Patch patch_from_json(const json& j) {
    try {
        Patch p{j.at("id").get<std::string>(), {}, j.value("note", ""), j.value("timestamp", "")};
        for (const auto& e : j.at("edits")) p.edits.push_back(edit_from_json(e));
        return p;
    } catch (const json::exception& ex) {
        throw Error("PARSE-ERROR", std::string("patch: ") + ex.what());
    }
}

void save_patch(const std::filesystem::path& path, const Patch& patch) { write_text_file(path, canonical_text(to_json(patch))); }

Patch load_patch(const std::filesystem::path& path) { return patch_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// object edits
// ---------------------------------------------------------------------------

std::optional<json> object_content(const ResourceSet& res, const std::string& kind, const std::string& name) {
    const char* key = array_key(kind);
    json doc = to_json(res);
    json found = json::array();
    for (const auto& item : doc[key])
        if (targets(item, kind, name)) found.push_back(item);
    if (kind == "region") return found.empty() ? std::nullopt : std::optional<json>(found);
    if (found.empty()) return std::nullopt;
    if (found.size() > 1)
        throw Error("AMBIGUOUS-TARGET", kind + " '" + name + "' has " + std::to_string(found.size()) + " language variants");
    return found[0];
}

std::string object_hash(const ResourceSet& res, const std::string& kind, const std::string& name) {
    auto content = object_content(res, kind, name);
    return content ? hash_of(*content) : "";
}

Edit make_edit(const ResourceSet& res, const std::string& kind, const std::string& name, std::optional<json> after) {
    return {kind, name, object_hash(res, kind, name), std::move(after)};
}

ResourceSet apply_edit(const ResourceSet& res, const Edit& edit) {
    std::string current = object_hash(res, edit.kind, edit.name);
    if (current != edit.before_hash)
        throw Error("STALE-PATCH", edit.kind + " '" + edit.name + "' has changed since the edit was made");
    json doc = to_json(res);
    json& items = doc[array_key(edit.kind)];
    json kept = json::array();
    for (const auto& item : items)
        if (!targets(item, edit.kind, edit.name)) kept.push_back(item);
    if (edit.after) {
        if (edit.kind == "region") {
            if (!edit.after->is_array()) throw Error("PARSE-ERROR", "region edit needs an array of systems");
            for (const auto& s : *edit.after) {
                if (s.value("region", "") != edit.name)
                    throw Error("PARSE-ERROR", "system in region edit '" + edit.name + "' belongs to another region");
                kept.push_back(s);
            }
            auto& regions = doc["regions"];
            if (std::ranges::find(regions, json(edit.name)) == regions.end()) regions.push_back(edit.name);
        } else {
            if (edit.after->value("name", "") != edit.name)
                throw Error("PARSE-ERROR", "edit of '" + edit.name + "' renames the object");
            kept.push_back(*edit.after);
        }
    }
    items = kept;
    return canonicalize(resources_from_json(doc));
}

ResourceSet apply_patch(const ResourceSet& res, const Patch& patch) {
    ResourceSet out = res;
    for (const auto& e : patch.edits) out = apply_edit(out, e);
    return out;
}

Patch invert_patch(const ResourceSet& base, const Patch& patch) {
    std::vector<ResourceSet> states{base};
    for (const auto& e : patch.edits) states.push_back(apply_edit(states.back(), e));
    Patch inv{patch.id + "-inverse", {}, "inverse of " + patch.id, patch.timestamp};
    for (std::size_t i = patch.edits.size(); i-- > 0;) {
        const Edit& e = patch.edits[i];
        inv.edits.push_back({e.kind, e.name, object_hash(states[i + 1], e.kind, e.name), object_content(states[i], e.kind, e.name)});
    }
    return inv;
}

void require_valid(const ResourceSet& res) {
    ValidationReport report = validate_resources(res);
    if (!report.ok()) throw ValidationFailed(std::move(report));
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// loading
// ---------------------------------------------------------------------------

namespace {

std::string langs_key(const LanguageSet& langs) {
    std::string out;
    for (const auto& l : langs) out += (out.empty() ? "" : ",") + l;
    return out;
}

std::set<std::string> object_keys(const ResourceSet& res) {
    std::set<std::string> keys;
    for (const auto& o : res.systems) keys.insert("system:" + o.name + "@" + langs_key(o.languages));
    for (const auto& o : res.lexemes) keys.insert("lexeme:" + o.name + "@" + langs_key(o.languages));
    for (const auto& o : res.choosers) keys.insert("chooser:" + o.name + "@" + langs_key(o.languages));
    for (const auto& o : res.inquiries) keys.insert("inquiry:" + o.name + "@" + langs_key(o.languages));
    for (const auto& o : res.morphology)
        keys.insert("morphology:" + o.feature + "/" + o.function + "/" + o.morph + "@" + langs_key(o.languages));
    for (const auto& o : res.punctuation) keys.insert("punctuation:" + o.feature + "@" + langs_key(o.languages));
    return keys;
}

void append(ResourceSet& into, const ResourceSet& part, ValidationReport& report, const std::string& file) {
    if (into.root.empty()) {
        into.root = part.root;
    } else if (!part.root.empty() && part.root != into.root) {
        report.error("ROOT-CONFLICT", file, "root '" + part.root + "' differs from '" + into.root + "'");
    }
    into.languages.insert(part.languages.begin(), part.languages.end());
    into.regions.insert(into.regions.end(), part.regions.begin(), part.regions.end());
    into.systems.insert(into.systems.end(), part.systems.begin(), part.systems.end());
    into.lexemes.insert(into.lexemes.end(), part.lexemes.begin(), part.lexemes.end());
    into.choosers.insert(into.choosers.end(), part.choosers.begin(), part.choosers.end());
    into.inquiries.insert(into.inquiries.end(), part.inquiries.begin(), part.inquiries.end());
    into.morphology.insert(into.morphology.end(), part.morphology.begin(), part.morphology.end());
    into.punctuation.insert(into.punctuation.end(), part.punctuation.begin(), part.punctuation.end());
}

ResourceSet load_parts(const std::vector<std::filesystem::path>& paths, std::vector<std::set<std::string>>* origins) {
    ResourceSet res;
    ValidationReport report;
    for (const auto& p : paths) {
        ResourceSet part = resources_from_json(read_json_file(p));
        if (origins) origins->push_back(object_keys(part));
        append(res, part, report, p.string());
    }
    res = canonicalize(res);
    report.append(validate_resources(res));
    if (!report.ok()) throw ValidationFailed(std::move(report));
    res.version.base = content_hash(canonical_text(res));
    return res;
}

}  // namespace

ResourceSet load_resources(const std::vector<std::filesystem::path>& paths) { return load_parts(paths, nullptr); }

// ---------------------------------------------------------------------------
// Workspace
// ---------------------------------------------------------------------------

std::filesystem::path Workspace::versions_path(const std::filesystem::path& resource_path) {
    return resource_path.parent_path() / "versions.json";
}

Workspace::Workspace(ResourceSet res) {
    res = canonicalize(res);
    base_hash_ = content_hash(canonical_text(res));
    if (res.version.base.empty()) res.version.base = base_hash_;
    base_ = std::make_shared<const ResourceSet>(std::move(res));
}

Workspace::Workspace(Workspace&& other) noexcept
    : paths_(std::move(other.paths_)),
      origins_(std::move(other.origins_)),
      base_(std::move(other.base_)),
      shadow_(std::move(other.shadow_)),
      pending_(std::move(other.pending_)),
      frozen_(std::move(other.frozen_)),
      base_hash_(std::move(other.base_hash_)) {}

Workspace Workspace::load(const std::vector<std::filesystem::path>& paths) {
    std::vector<std::set<std::string>> origins;
    ResourceSet res = load_parts(paths, &origins);
    // resume the version chain when the manifest describes these files
    auto manifest = versions_path(paths.front());
    if (std::filesystem::exists(manifest)) {
        json v = read_json_file(manifest);
        if (v.value("current", "") == res.version.base) {
            res.version.base = v.value("base", res.version.base);
            res.version.patches = v.value("patches", std::vector<std::string>{});
        }
    }
    Workspace ws(std::move(res));
    ws.paths_ = paths;
    ws.origins_ = std::move(origins);
    return ws;
}

std::shared_ptr<const ResourceSet> Workspace::base() const {
    std::lock_guard lock(mutex_);
    return base_;
}

std::shared_ptr<const ResourceSet> Workspace::current() const {
    std::lock_guard lock(mutex_);
    return shadow_ ? shadow_ : base_;
}

std::vector<Edit> Workspace::pending() const {
    std::lock_guard lock(mutex_);
    return pending_;
}

std::vector<Patch> Workspace::frozen() const {
    std::lock_guard lock(mutex_);
    return frozen_;
}

ResourceVersion Workspace::version() const {
    std::lock_guard lock(mutex_);
    return base_->version;
}

void Workspace::record_edit(const Edit& edit) {
    std::lock_guard lock(mutex_);
    const ResourceSet& from = shadow_ ? *shadow_ : *base_;
    ResourceSet next;
    try {
        next = apply_edit(from, edit);
    } catch (const Error& e) {
        if (e.code() != "PARSE-ERROR") throw;
        ValidationReport report;
        report.error("PARSE-ERROR", edit.kind + " " + edit.name, e.message());
        throw ValidationFailed(std::move(report), "edit rejected");
    }
    ValidationReport report = validate_resources(next);
    if (!report.ok()) throw ValidationFailed(std::move(report), "edit rejected");
    next.version = base_->version;
    pending_.push_back(edit);
    shadow_ = std::make_shared<const ResourceSet>(std::move(next));
}

Patch Workspace::create_patch(const std::string& note, const std::filesystem::path& dir) {
    std::lock_guard lock(mutex_);
    if (pending_.empty()) throw Error("EMPTY-PATCH", "no pending edits");
    Patch p{{}, pending_, note, utc_timestamp()};
    json edits = json::array();
    for (const auto& e : p.edits) edits.push_back(to_json(e));
    p.id = "p-" + content_hash(canonical_text(edits) + p.note + p.timestamp).substr(0, 12);
    pending_.clear();
    frozen_.push_back(p);
    if (!dir.empty()) save_patch(dir / (p.id + ".patch.json"), p);
    return p;
}

std::shared_ptr<const ResourceSet> Workspace::accept_patches(const AcceptOptions& options) {
    std::lock_guard lock(mutex_);
    std::vector<Patch> chain = frozen_;
    if (!pending_.empty()) chain.push_back({"pending-" + std::to_string(base_->version.patches.size() + 1), pending_, {}, utc_timestamp()});
    chain.insert(chain.end(), options.patches.begin(), options.patches.end());
    if (chain.empty()) throw Error("EMPTY-PATCH", "nothing to accept");

    ResourceSet next = *base_;
    bool region = false;
    for (const auto& p : chain) {
        if (std::ranges::find(next.version.patches, p.id) != next.version.patches.end())
            throw Error("STALE-PATCH", "patch " + p.id + " is already part of this version");
        next = apply_patch(next, p);
        region = region || p.replaces_region();
    }
    require_valid(next);
    if (region && !options.force) {
        if (!options.suite) throw Error("SUITE-REGRESSION", "a region replacement needs a suite run");
        SuiteReport report = run_suite(next, *options.suite);
        if (!report.ok()) throw SuiteRegression(std::move(report));
    }
    next.version = base_->version;
    for (const auto& p : chain) next.version.patches.push_back(p.id);
    base_ = std::make_shared<const ResourceSet>(std::move(next));
    shadow_.reset();
    pending_.clear();
    frozen_.clear();
    if (options.write_files && !paths_.empty()) write_files();
    return base_;
}

void Workspace::discard() {
    std::lock_guard lock(mutex_);
    pending_.clear();
    frozen_.clear();
    shadow_.reset();
}

void Workspace::write_files() const {
    const ResourceSet& res = *base_;
    std::vector<ResourceSet> parts(paths_.size());
    for (auto& part : parts) part.languages = res.languages;
    parts[0].root = res.root;
    parts[0].regions = res.regions;
    auto file_of = [&](const std::string& key) {
        for (std::size_t i = 0; i < origins_.size(); ++i)
            if (origins_[i].contains(key)) return i;
        return std::size_t{0};
    };
    ResourceSet one;
    for (const auto& o : res.systems) {
        one = {};
        one.systems.push_back(o);
        parts[file_of(*object_keys(one).begin())].systems.push_back(o);
    }
    for (const auto& o : res.lexemes) {
        one = {};
        one.lexemes.push_back(o);
        parts[file_of(*object_keys(one).begin())].lexemes.push_back(o);
    }
    for (const auto& o : res.choosers) {
        one = {};
        one.choosers.push_back(o);
        parts[file_of(*object_keys(one).begin())].choosers.push_back(o);
    }
    for (const auto& o : res.inquiries) {
        one = {};
        one.inquiries.push_back(o);
        parts[file_of(*object_keys(one).begin())].inquiries.push_back(o);
    }
    for (const auto& o : res.morphology) {
        one = {};
        one.morphology.push_back(o);
        parts[file_of(*object_keys(one).begin())].morphology.push_back(o);
    }
    for (const auto& o : res.punctuation) {
        one = {};
        one.punctuation.push_back(o);
        parts[file_of(*object_keys(one).begin())].punctuation.push_back(o);
    }
    for (std::size_t i = 0; i < paths_.size(); ++i) write_text_file(paths_[i], canonical_text(parts[i]));
    json manifest = {{"base", res.version.base}, {"patches", res.version.patches},
                     {"current", content_hash(canonical_text(res))}};
    write_text_file(versions_path(paths_.front()), canonical_text(manifest));
}

}  // namespace latticegen
