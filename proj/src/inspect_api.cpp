#include "latticegen/inspect_api.hpp"

#include <httplib.h>

#include <sstream>

#include "latticegen/regions.hpp"
#include "latticegen/trace.hpp"

namespace latticegen {

namespace {

ApiResponse error_response(const Error& e) {
    json body = {{"code", e.code()}, {"message", e.message()}};
    if (auto* v = dynamic_cast<const ValidationFailed*>(&e)) body["report"] = to_json(v->report());
    if (auto* s = dynamic_cast<const SuiteRegression*>(&e)) body["report"] = to_json(s->report());
    return {status_for(e.code()), body};
}

ApiResponse not_found(const std::string& what) { return {404, {{"code", "NOT-FOUND"}, {"message", what}}}; }

ApiResponse bad_request(const std::string& what) { return {400, {{"code", "MALFORMED"}, {"message", what}}}; }

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream in(path);
    for (std::string p; std::getline(in, p, '/');)
        if (!p.empty()) parts.push_back(p);
    return parts;
}

std::string join(const std::vector<std::string>& parts, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to; ++i) out += (out.empty() ? "" : "/") + parts[i];
    return out;
}

std::string param(const Query& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) throw Error("MALFORMED", "missing query parameter '" + key + "'");
    return it->second;
}

}  // namespace

int status_for(const std::string& code) {
    if (code.starts_with("UNKNOWN-") || code == "SYSTEM-NOT-FIRED" || code == "NOT-FOUND") return 404;
    if (code == "STALE-PATCH") return 409;
    if (code == "VALIDATION-FAILED" || code == "SUITE-REGRESSION") return 422;
    return 400;
}

InspectService::InspectService(Workspace& workspace, std::string language, Suite suite)
    : ws_(workspace), language_(std::move(language)), suite_(std::move(suite)) {}

ApiResponse InspectService::handle(const std::string& method, const std::string& path, const Query& query,
                                   const std::string& body) {
    try {
        return route(method, split_path(path), query, body);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::exception& e) {
        return bad_request(e.what());
    }
}

std::shared_ptr<const InspectService::Cached> InspectService::cached(const std::string& id) const {
    std::shared_lock lock(cache_mutex_);
    auto it = results_.find(id);
    if (it == results_.end()) throw Error("UNKNOWN-RESULT", "no result '" + id + "'");
    return it->second;
}

const Grammar& InspectService::grammar_for(const std::shared_ptr<const ResourceSet>& res, const std::string& lang) {
    std::lock_guard lock(grammar_mutex_);
    auto& slot = grammars_[{res.get(), lang}];
    if (!slot.second) slot = {res, std::make_unique<Grammar>(*res, lang)};
    return *slot.second;
}

ApiResponse InspectService::route(const std::string& method, const std::vector<std::string>& parts, const Query& query,
                                  const std::string& body) {
    auto parse_body = [&] { return body.empty() ? json::object() : json::parse(body); };
    const std::string head = parts.empty() ? "" : parts[0];

    if (method == "POST") {
        json in = parse_body();
        if (head == "generate" && parts.size() == 1) return post_generate(in);
        if (head == "suite" && parts.size() == 2 && parts[1] == "run") return {200, to_json(run_suite(*ws_.current(), suite_))};
        std::lock_guard lock(write_mutex_);
        if (head == "edit" && parts.size() == 1) {
            Edit e = edit_from_json(in);
            if (!in.contains("before")) e.before_hash = object_hash(*ws_.current(), e.kind, e.name);
            ws_.record_edit(e);
            return {200, {{"pending", ws_.pending().size()}, {"current", content_hash(canonical_text(*ws_.current()))}}};
        }
        if (head == "patch" && parts.size() == 2 && parts[1] == "create") return {200, to_json(ws_.create_patch(in.value("note", "")))};
        if (head == "patch" && parts.size() == 2 && parts[1] == "accept") {
            AcceptOptions opts;
            opts.force = in.value("force", false);
            opts.suite = &suite_;
            for (const auto& p : in.value("patches", json::array())) opts.patches.push_back(patch_from_json(p));
            auto res = ws_.accept_patches(opts);
            return {200, {{"base", res->version.base}, {"patches", res->version.patches},
                          {"current", content_hash(canonical_text(*res))}}};
        }
        return not_found("no endpoint POST /" + join(parts, 0, parts.size()));
    }
    if (method != "GET") return {405, {{"code", "METHOD"}, {"message", method + " not supported"}}};

    if (head == "result") return get_result(parts, query);
    auto res = ws_.current();
    const Grammar& g = grammar_for(res, query.contains("lang") ? query.at("lang") : language_);
    const SystemNetwork& net = g.network();
    if (head == "lattice" && parts.size() == 1) {
        std::size_t radius = query.contains("radius") ? std::stoul(query.at("radius")) : 1;
        return {200, to_json(lattice_subgraph(net, param(query, "focus"), radius))};
    }
    if (head == "regions" && parts.size() == 2 && parts[1] == "graph") return {200, to_json(region_graph(net, res->regions))};
    if (head == "regions" && parts.size() == 3 && parts[2] == "view") return {200, to_json(region_view(net, parts[1]))};
    if (head == "system" && parts.size() == 2) {
        const System* s = net.find_system(parts[1]);
        if (!s) throw Error("UNKNOWN-SYSTEM", "no system '" + parts[1] + "'");
        json out = {{"definition", to_json(*s)}, {"context", to_string(paradigmatic_context(net, s->name))}};
        if (const Chooser* c = g.chooser(s->chooser)) out["chooser"] = to_json(*c);
        return {200, out};
    }
    if (head == "diff" && parts.size() == 1) {
        auto a = cached(param(query, "a"));
        auto b = cached(param(query, "b"));
        return {200, to_json(diff_traces(a->result, b->result))};
    }
    return not_found("no endpoint GET /" + join(parts, 0, parts.size()));
}

ApiResponse InspectService::post_generate(const json& in) {
    if (!in.contains("spl")) return bad_request("body needs 'spl'");
    std::string spl = in.at("spl").get<std::string>();
    std::string lang = in.value("lang", language_);
    auto res = ws_.current();
    GenerationResult result = generate(grammar_for(res, lang), parse_spl(spl));
    json structure = to_json(result);
    std::string id;
    {
        std::unique_lock lock(cache_mutex_);
        id = "r" + std::to_string(next_id_++);
        results_[id] = std::make_shared<const Cached>(Cached{result, res, spl});
    }
    return {200, {{"result_id", id}, {"string", result.text}, {"structure", structure}}};
}

ApiResponse InspectService::get_result(const std::vector<std::string>& parts, const Query& query) {
    // result/{id}/unit/{u...}/se | focus | system/{s}/chooser-path; unit ids contain '/'
    if (parts.size() == 2) return {200, to_json(cached(parts[1])->result)};
    if (parts.size() < 5 || parts[2] != "unit") return not_found("no such result endpoint");
    auto c = cached(parts[1]);
    const GenerationResult& r = c->result;
    const std::string& last = parts.back();
    if (last == "se") {
        std::string unit = join(parts, 3, parts.size() - 1);
        std::string view = query.contains("view") ? query.at("view") : "list";
        if (view == "list") {
            json items = json::array();
            for (const auto& s : selection_list(r, unit)) items.push_back({{"feature", s.feature}, {"system", s.system}});
            return {200, items};
        }
        if (view == "subgraph") {
            auto res = c->resources ? c->resources : ws_.current();
            return {200, to_json(selection_subgraph(r, grammar_for(res, r.language).network(), unit))};
        }
        if (view == "replay") {
            json events = json::array();
            for (const auto& e : selection_replay(r, unit)) events.push_back(to_json(e));
            return {200, events};
        }
        return bad_request("view must be list, subgraph or replay");
    }
    if (last == "focus") {
        std::string unit = join(parts, 3, parts.size() - 1);
        auto res = c->resources ? c->resources : ws_.current();
        const SystemNetwork& net = grammar_for(res, r.language).network();
        return {200, to_json(where_introduced(r, unit, param(query, "aspect"), &net))};
    }
    if (last == "chooser-path" && parts.size() >= 7 && parts[parts.size() - 3] == "system") {
        std::string unit = join(parts, 3, parts.size() - 3);
        return {200, to_json(decision_path(r, unit, parts[parts.size() - 2]))};
    }
    return not_found("no such result endpoint");
}

json InspectService::snapshot() const {
    std::shared_lock lock(cache_mutex_);
    json results = json::object();
    for (const auto& [id, c] : results_)
        results[id] = {{"spl", c->spl}, {"version", c->result.version}, {"trace", to_json(c->result)}};
    return {{"results", results}};
}

void InspectService::load_snapshot(const json& snap) {
    std::unique_lock lock(cache_mutex_);
    for (const auto& [id, item] : snap.at("results").items()) {
        results_[id] = std::make_shared<const Cached>(Cached{result_from_json(item.at("trace")), nullptr, item.value("spl", "")});
        if (id.starts_with("r")) {
            try {
                next_id_ = std::max(next_id_, std::stoul(id.substr(1)) + 1);
            } catch (const std::exception&) {
            }
        }
    }
}

std::size_t InspectService::result_count() const {
    std::shared_lock lock(cache_mutex_);
    return results_.size();
}

void InspectService::serve(const std::string& host, int port, const std::filesystem::path& static_dir) {
    httplib::Server server;
    if (!static_dir.empty()) server.set_mount_point("/", static_dir.string());
    auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
        Query q;
        for (const auto& [k, v] : req.params) q[k] = v;
        ApiResponse out = handle(req.method, req.path, q, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    for (const char* prefix : {"/generate", "/result/.*", "/lattice", "/regions/.*", "/system/.*", "/edit", "/patch/.*",
                               "/suite/.*", "/diff"}) {
        server.Get(prefix, adapt);
        server.Post(prefix, adapt);
    }
    if (!server.listen(host, port)) throw Error("SERVE-FAILED", "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace latticegen
