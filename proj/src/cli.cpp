#include "latticegen/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "latticegen/inspect_api.hpp"
#include "latticegen/regions.hpp"
#include "latticegen/workspace.hpp"

namespace latticegen {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::filesystem::path> as_paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

struct Options {
    std::vector<std::string> resources;
    std::string lang;
    std::string format = "text";
    bool json() const { return format == "json"; }
};

std::vector<std::filesystem::path> resource_paths(const Options& o) {
    std::vector<std::string> paths = o.resources;
    if (paths.empty())
        if (const char* env = std::getenv("LATTICEGEN_RESOURCES")) paths = split(env, ':');
    if (paths.empty()) throw CLI::ValidationError("--resources", "no resource files (use -r or LATTICEGEN_RESOURCES)");
    return as_paths(paths);
}

std::string language_of(const Options& o, const ResourceSet& res) {
    if (!o.lang.empty()) {
        if (!res.languages.empty() && !res.languages.contains(o.lang))
            throw Error("UNKNOWN-LANGUAGE", "'" + o.lang + "' is not declared by the resources");
        return o.lang;
    }
    if (res.languages.empty()) throw CLI::ValidationError("--lang", "the resources declare no language");
    return *res.languages.begin();
}

std::string spl_text(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    return read_text_file(arg);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Systemic grammar generation and grammar development tools", "latticegen"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("-r,--resources", o.resources, "Resource files (default: $LATTICEGEN_RESOURCES)");
    app.add_option("-l,--lang", o.lang, "Language");
    app.add_option("-f,--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::function<int()> run;

    // generate
    std::string spl_path, trace_out;
    auto* gen = app.add_subcommand("generate", "Generate a sentence from an SPL file");
    gen->add_option("spl", spl_path, "SPL file or -")->required();
    gen->add_option("--trace", trace_out, "Save the trace");
    gen->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            Grammar g(res, language_of(o, res));
            GenerationResult r = generate(g, parse_spl(spl_text(spl_path)));
            if (!trace_out.empty()) save_trace(trace_out, r);
            if (o.json()) {
                out << dump(to_json(r));
            } else {
                out << r.text << "\n";
                if (!r.complete) err << "partial: " << r.reason_code << ": " << r.reason << "\n";
            }
            return r.complete ? 0 : 1;
        };
    });

    // record
    std::vector<std::string> record_spl;
    std::string suite_path, record_name, record_expect;
    auto* rec = app.add_subcommand("record", "Record examples into a suite");
    rec->add_option("spl", record_spl, "SPL files")->required();
    rec->add_option("-s,--suite", suite_path, "Suite file")->required();
    rec->add_option("--name", record_name, "Example name (single file; default: file stem)");
    rec->add_option("--expect", record_expect, "Refuse unless the output is exactly this");
    rec->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            Grammar g(res, language_of(o, res));
            Suite suite = std::filesystem::exists(suite_path) ? load_suite(suite_path) : Suite{};
            if (!record_name.empty() && record_spl.size() > 1)
                throw CLI::ValidationError("--name", "only with a single SPL file");
            for (const auto& p : record_spl) {
                std::string text = read_text_file(p);
                GenerationResult r = generate(g, parse_spl(text));
                if (!record_expect.empty() && r.text != record_expect)
                    throw Error("UNEXPECTED-OUTPUT", p + " generated \"" + r.text + "\"");
                std::string name = record_name.empty() ? std::filesystem::path(p).stem().string() : record_name;
                record_example(suite, r, name, text);
                out << name << ": " << r.text << "\n";
            }
            save_suite(suite_path, suite);
            return 0;
        };
    });

    // test
    auto* test = app.add_subcommand("test", "Regenerate a suite and compare");
    test->add_option("suite", suite_path, "Suite file")->required();
    test->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            SuiteReport report = run_suite(res, load_suite(suite_path));
            out << (o.json() ? dump(to_json(report)) : format_text(report));
            return report.ok() ? 0 : 1;
        };
    });

    // validate
    auto* val = app.add_subcommand("validate", "Validate resource files");
    val->callback([&] {
        run = [&] {
            ValidationReport report;
            try {
                report = validate_resources(load_resources(resource_paths(o)));
            } catch (const ValidationFailed& e) {
                report = e.report();
            }
            out << (o.json() ? dump(to_json(report)) : format_text(report));
            return report.ok() ? 0 : 1;
        };
    });

    // merge / extract / import-segment / stats
    std::vector<std::string> inputs;
    std::string output, langs_arg;
    auto write_or_print = [&](const ResourceSet& res) {
        if (output.empty()) {
            out << canonical_text(res);
        } else {
            write_text_file(output, canonical_text(res));
        }
    };
    auto* mrg = app.add_subcommand("merge", "Merge resource files");
    mrg->add_option("inputs", inputs, "Resource files")->required();
    mrg->add_option("-o,--output", output, "Output file");
    mrg->callback([&] {
        run = [&] {
            std::vector<ResourceSet> sets;
            for (const auto& p : inputs) sets.push_back(load_resources({p}));
            write_or_print(merge(sets));
            return 0;
        };
    });

    auto* ext = app.add_subcommand("extract", "Extract languages from multilingual resources");
    ext->add_option("--langs", langs_arg, "Comma-separated language codes")->required();
    ext->add_option("-o,--output", output, "Output file");
    ext->callback([&] {
        run = [&] {
            auto codes = split(langs_arg, ',');
            write_or_print(extract(load_resources(resource_paths(o)), {codes.begin(), codes.end()}));
            return 0;
        };
    });

    std::string from_path, from_lang, into_path, into_lang, seg_region;
    std::vector<std::string> seg_systems;
    auto* imp = app.add_subcommand("import-segment", "Copy a region or systems into another language");
    imp->add_option("--from", from_path, "Source resources")->required();
    imp->add_option("--from-lang", from_lang, "Source language")->required();
    imp->add_option("--into", into_path, "Destination resources")->required();
    imp->add_option("--into-lang", into_lang, "Destination language")->required();
    imp->add_option("--region", seg_region, "Region to copy");
    imp->add_option("--systems", seg_systems, "Systems to copy");
    imp->add_option("-o,--output", output, "Output file");
    imp->callback([&] {
        run = [&] {
            SegmentSelector sel{seg_region, seg_systems};
            if (sel.empty()) throw CLI::ValidationError("--region", "give --region or --systems");
            ResourceSet dst = resources_from_json(read_json_file(into_path));
            write_or_print(import_segment(load_resources({from_path}), sel, from_lang, dst, into_lang));
            return 0;
        };
    });

    std::string merged_path;
    auto* sts = app.add_subcommand("stats", "Sharing statistics of merged resources");
    sts->add_option("originals", inputs, "Monolingual resource files")->required();
    sts->add_option("--merged", merged_path, "Merged file (default: merge the originals)");
    sts->callback([&] {
        run = [&] {
            std::vector<ResourceSet> sets;
            for (const auto& p : inputs) sets.push_back(load_resources({p}));
            ResourceSet merged = merged_path.empty() ? merge(sets) : load_resources({merged_path});
            SharingReport report = sharing_stats(merged, sets);
            out << (o.json() ? dump(to_json(report)) : format_text(report));
            return 0;
        };
    });

    // regions
    bool dot = false;
    std::string region_name;
    auto* regions = app.add_subcommand("regions", "Functional regions");
    regions->require_subcommand(1);
    auto network_of = [&](ResourceSet& res) {
        auto g = std::make_shared<Grammar>(res, language_of(o, res));
        return g;
    };
    auto* rgraph = regions->add_subcommand("graph", "Region connectivity graph");
    rgraph->add_flag("--dot", dot, "Graphviz output");
    rgraph->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            auto g = network_of(res);
            RegionGraph graph = region_graph(g->network(), res.regions);
            if (dot) {
                out << to_dot(graph);
            } else if (o.json()) {
                out << dump(to_json(graph));
            } else {
                for (const auto& e : graph.edges) out << e.from << " -> " << e.to << " (" << e.weight << ")\n";
            }
            return 0;
        };
    });
    auto* rview = regions->add_subcommand("view", "Systems of one region with boundary stubs");
    rview->add_option("name", region_name, "Region")->required();
    rview->add_flag("--dot", dot, "Graphviz output");
    rview->add_option("--contrast", langs_arg, "Label by language coverage over these codes");
    rview->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            LatticeFragment frag;
            if (!langs_arg.empty()) {
                auto codes = split(langs_arg, ',');
                frag = contrastive_view(res, {codes.begin(), codes.end()}, region_name);
            } else {
                frag = region_view(network_of(res)->network(), region_name);
            }
            if (dot) {
                out << to_dot(frag);
            } else if (o.json()) {
                out << dump(to_json(frag));
            } else {
                for (const auto& s : frag.systems) {
                    out << s.name;
                    if (auto it = frag.labels.find(s.name); it != frag.labels.end()) out << " [" << it->second << "]";
                    out << "\n";
                }
                for (const auto& st : frag.stubs) out << "  stub " << st.feature << " (" << st.owner_region << ")\n";
            }
            return 0;
        };
    });
    auto* rlint = regions->add_subcommand("lint", "Intra- and inter-region entry references");
    rlint->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            auto lint = region_lint(network_of(res)->network());
            json j = json::array();
            for (const auto& l : lint) {
                j.push_back({{"region", l.region}, {"intra", l.intra}, {"inter", l.inter}});
                if (!o.json()) out << l.region << " intra " << l.intra << " inter " << l.inter << "\n";
            }
            if (o.json()) out << dump(j);
            return 0;
        };
    });

    // traces
    std::string trace_path, unit, aspect, trace_b;
    auto* foc = app.add_subcommand("focus", "Where a property of a saved result was introduced");
    foc->add_option("trace", trace_path, "Saved trace")->required();
    foc->add_option("unit", unit, "Unit id")->required();
    foc->add_option("aspect", aspect, "token:<i> | function:<F> | ordering:<A><<B> | lexical-class:<F>")->required();
    foc->callback([&] {
        run = [&] {
            FocusReport report = where_introduced(load_trace(trace_path), unit, aspect);
            out << (o.json() ? dump(to_json(report)) : format_text(report));
            return 0;
        };
    });

    auto* dif = app.add_subcommand("diff-traces", "Compare two saved results");
    dif->add_option("a", trace_path, "First trace")->required();
    dif->add_option("b", trace_b, "Second trace")->required();
    dif->callback([&] {
        run = [&] {
            TraceDiff d = diff_traces(load_trace(trace_path), load_trace(trace_b));
            out << (o.json() ? dump(to_json(d)) : format_text(d));
            return 0;
        };
    });

    // suites
    std::string feature;
    auto* exs = app.add_subcommand("examples", "Suite examples that select a feature");
    exs->add_option("feature", feature, "Feature")->required();
    exs->add_option("-s,--suite", suite_path, "Suite file")->required();
    exs->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            auto names = examples_for(load_suite(suite_path), res, feature);
            if (o.json()) {
                out << dump(names);
            } else {
                for (const auto& n : names) out << n << "\n";
                if (names.empty()) err << "warning: no example selects " << feature << "\n";
            }
            return 0;
        };
    });
    auto* cov = app.add_subcommand("coverage", "Features selected by no suite example");
    cov->add_option("-s,--suite", suite_path, "Suite file")->required();
    cov->callback([&] {
        run = [&] {
            ResourceSet res = load_resources(resource_paths(o));
            auto gaps = coverage_gaps(load_suite(suite_path), res);
            if (o.json()) {
                out << dump(gaps);
            } else {
                for (const auto& f : gaps) out << f << "\n";
            }
            return 0;
        };
    });

    // patches
    std::string edits_path, note, patch_dir = ".";
    std::vector<std::string> patch_files;
    bool force = false;
    auto* patch = app.add_subcommand("patch", "Create or accept patches");
    patch->require_subcommand(1);
    auto* pcreate = patch->add_subcommand("create", "Freeze a file of edits into a patch");
    pcreate->add_option("edits", edits_path, "JSON array of {kind, name, after}")->required();
    pcreate->add_option("--note", note, "Author note");
    pcreate->add_option("-d,--dir", patch_dir, "Where to write the .patch.json");
    pcreate->callback([&] {
        run = [&] {
            Workspace ws = Workspace::load(resource_paths(o));
            json edits = read_json_file(edits_path);
            if (!edits.is_array()) throw Error("PARSE-ERROR", edits_path + ": expected an array of edits");
            for (const auto& j : edits) {
                Edit e = edit_from_json(j);
                if (!j.contains("before")) e.before_hash = object_hash(*ws.current(), e.kind, e.name);
                ws.record_edit(e);
            }
            Patch p = ws.create_patch(note, patch_dir);
            out << (o.json() ? dump(to_json(p)) : (std::filesystem::path(patch_dir) / (p.id + ".patch.json")).string() + "\n");
            return 0;
        };
    });
    auto* paccept = patch->add_subcommand("accept", "Apply patches and rewrite the resource files");
    paccept->add_option("patches", patch_files, "Patch files")->required();
    paccept->add_option("-s,--suite", suite_path, "Suite gating region replacements");
    paccept->add_flag("--force", force, "Skip the suite gate");
    paccept->callback([&] {
        run = [&] {
            Workspace ws = Workspace::load(resource_paths(o));
            AcceptOptions opts;
            opts.force = force;
            Suite suite;
            if (!suite_path.empty()) {
                suite = load_suite(suite_path);
                opts.suite = &suite;
            }
            for (const auto& p : patch_files) opts.patches.push_back(load_patch(p));
            auto res = ws.accept_patches(opts);
            json v = {{"base", res->version.base}, {"patches", res->version.patches},
                      {"current", content_hash(canonical_text(*res))}};
            out << (o.json() ? dump(v) : "accepted; version " + v["current"].get<std::string>() + " after " +
                                             std::to_string(res->version.patches.size()) + " patches\n");
            return 0;
        };
    });

    // serve
    int port = 8080;
    std::string host = "127.0.0.1", static_dir;
    auto* srv = app.add_subcommand("serve", "Run the inspection service");
    srv->add_option("-p,--port", port, "Port");
    srv->add_option("--host", host, "Address to bind");
    srv->add_option("-s,--suite", suite_path, "Suite for /suite/run and the patch gate");
    srv->add_option("--static", static_dir, "UI assets served at /");
    srv->callback([&] {
        run = [&] {
            Workspace ws = Workspace::load(resource_paths(o));
            std::string lang = language_of(o, *ws.current());
            InspectService svc(ws, lang, suite_path.empty() ? Suite{} : load_suite(suite_path));
            err << "listening on " << host << ":" << port << "\n";
            svc.serve(host, port, static_dir);
            return 0;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        return run ? run() : 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n" << app.help();
        return 2;
    } catch (const ValidationFailed& e) {
        err << "error: " << e.code() << "\n" << format_text(e.report());
        return 1;
    } catch (const SuiteRegression& e) {
        err << "error: " << e.what() << "\n" << format_text(e.report());
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace latticegen
