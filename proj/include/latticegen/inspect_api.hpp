#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "latticegen/generator.hpp"
#include "latticegen/suite.hpp"
#include "latticegen/workspace.hpp"

namespace latticegen {

struct ApiResponse {
    int status = 200;
    json body;
};

using Query = std::map<std::string, std::string>;

/// Request handling for the inspection service, independent of the HTTP
/// transport so it can be driven directly.
class InspectService {
public:
    InspectService(Workspace& workspace, std::string language, Suite suite = {});

    ApiResponse handle(const std::string& method, const std::string& path, const Query& query = {},
                       const std::string& body = {});

    /// Cached results plus the resource versions that produced them.
    json snapshot() const;
    /// Adds the snapshot's results under their original ids.
    void load_snapshot(const json& snapshot);
    std::size_t result_count() const;

    /// Blocks. Serves `static_dir` at / when given.
    void serve(const std::string& host, int port, const std::filesystem::path& static_dir = {});

private:
    struct Cached {
        GenerationResult result;
        std::shared_ptr<const ResourceSet> resources;  // null for loaded snapshots
        std::string spl;
    };

    ApiResponse route(const std::string& method, const std::vector<std::string>& parts, const Query& query,
                      const std::string& body);
    ApiResponse post_generate(const json& body);
    ApiResponse get_result(const std::vector<std::string>& parts, const Query& query);
    const Grammar& grammar_for(const std::shared_ptr<const ResourceSet>& res, const std::string& lang);
    std::shared_ptr<const Cached> cached(const std::string& id) const;

    Workspace& ws_;
    std::string language_;
    Suite suite_;
    mutable std::shared_mutex cache_mutex_;
    std::map<std::string, std::shared_ptr<const Cached>> results_;
    std::size_t next_id_ = 1;
    std::mutex write_mutex_;  // edits and patches
    std::mutex grammar_mutex_;
    std::map<std::pair<const ResourceSet*, std::string>, std::pair<std::shared_ptr<const ResourceSet>, std::unique_ptr<Grammar>>>
        grammars_;
};

/// HTTP status for an error code.
int status_for(const std::string& code);

}  // namespace latticegen
