#include "latticegen/resources.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "latticegen/error.hpp"

namespace latticegen {

bool ResourceSet::operator==(const ResourceSet& o) const {
    return root == o.root && languages == o.languages && regions == o.regions && systems == o.systems &&
           lexemes == o.lexemes && choosers == o.choosers && inquiries == o.inquiries &&
           morphology == o.morphology && punctuation == o.punctuation;
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error("PARSE-ERROR", where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(where, std::string("missing '") + key + "'");
    return *it;
}

std::string str(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) bad(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::string opt_str(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) bad(where, std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> strings(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) bad(where, "expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<std::string> opt_strings(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    return strings(*it, where + "." + key);
}

LanguageSet langs(const json& j, const LanguageSet& inherited, const std::string& where) {
    auto it = j.find("languages");
    if (it == j.end() || it->is_null() || (it->is_array() && it->empty())) return inherited;
    auto v = strings(*it, where + ".languages");
    return {v.begin(), v.end()};
}

json lang_array(const LanguageSet& l) { return json(std::vector<std::string>(l.begin(), l.end())); }

template <class T>
const json& array_field(const json& doc, const char* key, const json& empty) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return empty;
    if (!it->is_array()) bad(key, "expected an array");
    return *it;
}

}  // namespace

// ---------------------------------------------------------------------------
// entry conditions and statements
// ---------------------------------------------------------------------------

json to_json(const EntryCondition& cond) {
    switch (cond.kind) {
    case EntryCondition::Kind::True:
        return true;
    case EntryCondition::Kind::Feature:
        return cond.feature;
    case EntryCondition::Kind::And:
    case EntryCondition::Kind::Or: {
        json ops = json::array();
        for (const auto& op : cond.operands) ops.push_back(to_json(op));
        return json{{cond.kind == EntryCondition::Kind::And ? "and" : "or", ops}};
    }
    }
    return nullptr;
}

EntryCondition entry_from_json(const json& j) {
    if (j.is_boolean() && j.get<bool>()) return EntryCondition::always();
    if (j.is_string()) return EntryCondition::leaf(j.get<std::string>());
    if (j.is_object() && j.size() == 1) {
        const auto& [key, val] = *j.items().begin();
        if ((key == "and" || key == "or") && val.is_array() && !val.empty()) {
            std::vector<EntryCondition> ops;
            for (const auto& e : val) ops.push_back(entry_from_json(e));
            return key == "and" ? EntryCondition::all_of(std::move(ops)) : EntryCondition::any_of(std::move(ops));
        }
    }
    bad("entry", "expected true, a feature name, or {\"and\"|\"or\": [...]} but got " + j.dump());
}

json to_json(const RealizationStatement& st) {
    return {{"id", st.id}, {"op", std::string(op_name(st.op))}, {"args", st.args}, {"languages", lang_array(st.languages)}};
}

static RealizationStatement statement_from_json(const json& j, const LanguageSet& inherited, const std::string& where) {
    RealizationStatement st;
    st.id = str(j, "id", where);
    auto op = parse_op(str(j, "op", where + "/" + st.id));
    if (!op) bad(where + "/" + st.id, "unknown realization operator '" + j["op"].get<std::string>() + "'");
    st.op = *op;
    st.args = strings(field(j, "args", where + "/" + st.id), where + "/" + st.id);
    st.languages = langs(j, inherited, where + "/" + st.id);
    return st;
}

// ---------------------------------------------------------------------------
// systems, lexemes
// ---------------------------------------------------------------------------

json to_json(const System& s) {
    json outputs = json::array();
    for (const auto& f : s.outputs) {
        json rs = json::array();
        for (const auto& st : f.realizations) rs.push_back(to_json(st));
        outputs.push_back({{"feature", f.name}, {"realizations", rs}, {"languages", lang_array(f.languages)}});
    }
    json j = {{"name", s.name},
              {"entry", to_json(s.entry)},
              {"outputs", outputs},
              {"region", s.region},
              {"languages", lang_array(s.languages)}};
    if (!s.chooser.empty()) j["chooser"] = s.chooser;
    return j;
}

System system_from_json(const json& j, const LanguageSet& inherited) {
    System s;
    s.name = str(j, "name", "system");
    const std::string where = "system " + s.name;
    try {
        s.entry = entry_from_json(field(j, "entry", where));
    } catch (const Error& e) {
        bad(where, e.message());
    }
    s.region = opt_str(j, "region", where);
    s.chooser = opt_str(j, "chooser", where);
    s.languages = langs(j, inherited, where);
    const json& outs = field(j, "outputs", where);
    if (!outs.is_array()) bad(where, "'outputs' must be an array");
    for (const auto& o : outs) {
        Feature f;
        f.name = str(o, "feature", where);
        f.languages = langs(o, s.languages, where + "/" + f.name);
        auto it = o.find("realizations");
        if (it != o.end() && !it->is_null()) {
            if (!it->is_array()) bad(where + "/" + f.name, "'realizations' must be an array");
            for (const auto& r : *it) f.realizations.push_back(statement_from_json(r, f.languages, where + "/" + f.name));
        }
        s.outputs.push_back(std::move(f));
    }
    return s;
}

json to_json(const Lexeme& lex) {
    json forms = json::array();
    for (const auto& f : lex.forms)
        forms.push_back({{"features", std::vector<std::string>(f.features.begin(), f.features.end())}, {"form", f.text}});
    json j = {{"name", lex.name},
              {"spelling", lex.spelling},
              {"classes", std::vector<std::string>(lex.classes.begin(), lex.classes.end())},
              {"forms", forms},
              {"languages", lang_array(lex.languages)}};
    if (!lex.concepts.empty()) j["concepts"] = lex.concepts;
    return j;
}

Lexeme lexeme_from_json(const json& j, const LanguageSet& inherited) {
    Lexeme lex;
    lex.name = str(j, "name", "lexeme");
    const std::string where = "lexeme " + lex.name;
    lex.spelling = str(j, "spelling", where);
    auto classes = opt_strings(j, "classes", where);
    lex.classes = {classes.begin(), classes.end()};
    lex.concepts = opt_strings(j, "concepts", where);
    lex.languages = langs(j, inherited, where);
    auto it = j.find("forms");
    if (it != j.end() && !it->is_null()) {
        if (!it->is_array()) bad(where, "'forms' must be an array");
        for (const auto& f : *it) {
            auto feats = opt_strings(f, "features", where);
            lex.forms.push_back({FeatureSet(feats.begin(), feats.end()), str(f, "form", where)});
        }
    }
    return lex;
}

// ---------------------------------------------------------------------------
// inquiries, choosers
// ---------------------------------------------------------------------------

json to_json(const Inquiry& inq) {
    json rules = json::array();
    for (const auto& r : inq.rules) {
        json when = json::array();
        for (const auto& c : r.when) {
            json cj = {{"param", c.param}};
            if (!c.types.empty()) cj["type"] = c.types;
            if (!c.attribute.empty()) cj["attribute"] = c.attribute;
            if (c.value) cj["value"] = *c.value;
            when.push_back(cj);
        }
        rules.push_back({{"when", when}, {"answer", r.answer}});
    }
    return {{"name", inq.name},         {"parameters", inq.parameters}, {"answers", inq.answers},
            {"rules", rules},           {"default", inq.default_answer}, {"languages", lang_array(inq.languages)}};
}

Inquiry inquiry_from_json(const json& j, const LanguageSet& inherited) {
    Inquiry inq;
    inq.name = str(j, "name", "inquiry");
    const std::string where = "inquiry " + inq.name;
    inq.parameters = strings(field(j, "parameters", where), where);
    inq.answers = strings(field(j, "answers", where), where);
    inq.default_answer = str(j, "default", where);
    inq.languages = langs(j, inherited, where);
    auto it = j.find("rules");
    if (it != j.end() && !it->is_null()) {
        for (const auto& r : *it) {
            InquiryRule rule;
            rule.answer = str(r, "answer", where);
            for (const auto& c : field(r, "when", where)) {
                InquiryCondition cond;
                cond.param = str(c, "param", where);
                if (auto t = c.find("type"); t != c.end()) {
                    if (t->is_string())
                        cond.types = {t->get<std::string>()};
                    else
                        cond.types = strings(*t, where + ".type");
                }
                cond.attribute = opt_str(c, "attribute", where);
                if (auto v = c.find("value"); v != c.end() && !v->is_null()) {
                    if (!v->is_string()) bad(where, "'value' must be a string");
                    cond.value = v->get<std::string>();
                }
                rule.when.push_back(std::move(cond));
            }
            inq.rules.push_back(std::move(rule));
        }
    }
    return inq;
}

static json node_to_json(const ChooserNode& node) {
    if (node.is_leaf()) {
        json actions = json::array();
        for (const auto& a : node.actions) {
            if (a.kind == ChooserAction::Kind::Choose)
                actions.push_back({{"choose", a.target}});
            else
                actions.push_back({{"identify", a.target}, {"path", a.path}});
        }
        return {{"actions", actions}};
    }
    json branches = json::object();
    for (std::size_t i = 0; i < node.answers.size(); ++i) branches[node.answers[i]] = node_to_json(node.children[i]);
    json bind = json::object();
    for (const auto& [p, path] : node.bindings) bind[p] = path;
    return {{"ask", node.inquiry}, {"bind", bind}, {"branches", branches}};
}

static ChooserNode node_from_json(const json& j, const std::string& where) {
    ChooserNode node;
    if (!j.is_object()) bad(where, "chooser node must be an object");
    if (j.contains("ask")) {
        node.inquiry = str(j, "ask", where);
        if (auto b = j.find("bind"); b != j.end()) {
            if (!b->is_object()) bad(where, "'bind' must be an object");
            for (const auto& [p, path] : b->items()) node.bindings[p] = strings(path, where + ".bind");
        }
        const json& branches = field(j, "branches", where);
        if (!branches.is_object()) bad(where, "'branches' must be an object");
        for (const auto& [answer, child] : branches.items()) {
            node.answers.push_back(answer);
            node.children.push_back(node_from_json(child, where + "/" + answer));
        }
        return node;
    }
    const json& actions = field(j, "actions", where);
    if (!actions.is_array()) bad(where, "'actions' must be an array");
    for (const auto& a : actions) {
        ChooserAction act;
        if (a.contains("choose")) {
            act.kind = ChooserAction::Kind::Choose;
            act.target = str(a, "choose", where);
        } else if (a.contains("identify")) {
            act.kind = ChooserAction::Kind::Identify;
            act.target = str(a, "identify", where);
            act.path = opt_strings(a, "path", where);
        } else {
            bad(where, "action must be {\"choose\"} or {\"identify\"}");
        }
        node.actions.push_back(std::move(act));
    }
    return node;
}

json to_json(const Chooser& ch) {
    return {{"name", ch.name}, {"tree", node_to_json(ch.tree)}, {"languages", lang_array(ch.languages)}};
}

Chooser chooser_from_json(const json& j, const LanguageSet& inherited) {
    Chooser ch;
    ch.name = str(j, "name", "chooser");
    ch.tree = node_from_json(field(j, "tree", "chooser " + ch.name), "chooser " + ch.name);
    ch.languages = langs(j, inherited, "chooser " + ch.name);
    return ch;
}

json to_json(const ChooserOutcome& o) {
    json path = json::array();
    for (const auto& step : o.path) path.push_back({{"inquiry", step.inquiry}, {"bindings", step.bindings}, {"answer", step.answer}});
    json ids = json::array();
    for (const auto& [fn, ent] : o.identifications) ids.push_back({{"function", fn}, {"entity", ent}});
    return {{"feature", o.feature}, {"identifications", ids}, {"path", path}, {"defaulted", o.defaulted}, {"warnings", o.warnings}};
}

ChooserOutcome outcome_from_json(const json& j) {
    ChooserOutcome o;
    o.feature = j.at("feature").get<std::string>();
    for (const auto& i : j.at("identifications"))
        o.identifications.emplace_back(i.at("function").get<std::string>(), i.at("entity").get<std::string>());
    for (const auto& s : j.at("path"))
        o.path.push_back({s.at("inquiry").get<std::string>(), s.at("bindings").get<Bindings>(), s.at("answer").get<std::string>()});
    o.defaulted = j.value("defaulted", false);
    o.warnings = j.value("warnings", std::vector<std::string>{});
    return o;
}

// ---------------------------------------------------------------------------
// whole documents
// ---------------------------------------------------------------------------

ResourceSet canonicalize(const ResourceSet& in) {
    ResourceSet res = in;
    auto by_name = [](const auto& a, const auto& b) { return std::tie(a.name, a.languages) < std::tie(b.name, b.languages); };
    std::ranges::stable_sort(res.systems, by_name);
    std::ranges::stable_sort(res.lexemes, by_name);
    std::ranges::stable_sort(res.choosers, by_name);
    std::ranges::stable_sort(res.inquiries, by_name);
    std::ranges::stable_sort(res.morphology, [](const auto& a, const auto& b) {
        return std::tie(a.feature, a.function, a.morph, a.languages) < std::tie(b.feature, b.function, b.morph, b.languages);
    });
    std::ranges::stable_sort(res.punctuation, [](const auto& a, const auto& b) {
        return std::tie(a.feature, a.mark, a.languages) < std::tie(b.feature, b.mark, b.languages);
    });
    for (auto& lex : res.lexemes)
        std::ranges::stable_sort(lex.forms, [](const auto& a, const auto& b) {
            return std::make_pair(a.features.size(), a.features) < std::make_pair(b.features.size(), b.features);
        });
    std::ranges::sort(res.regions);
    res.regions.erase(std::unique(res.regions.begin(), res.regions.end()), res.regions.end());
    return res;
}

json to_json(const ResourceSet& in) {
    ResourceSet res = canonicalize(in);
    json doc;
    doc["root"] = res.root;
    doc["language-codes"] = lang_array(res.languages);
    doc["regions"] = res.regions;
    auto arr = [](const auto& items) {
        json a = json::array();
        for (const auto& i : items) a.push_back(to_json(i));
        return a;
    };
    doc["systems"] = arr(res.systems);
    doc["lexemes"] = arr(res.lexemes);
    doc["choosers"] = arr(res.choosers);
    doc["inquiries"] = arr(res.inquiries);
    json morph = json::array();
    for (const auto& m : res.morphology)
        morph.push_back({{"feature", m.feature}, {"function", m.function}, {"morph", m.morph}, {"languages", lang_array(m.languages)}});
    doc["morphology"] = morph;
    json punct = json::array();
    for (const auto& p : res.punctuation)
        punct.push_back({{"feature", p.feature}, {"mark", p.mark}, {"languages", lang_array(p.languages)}});
    doc["punctuation"] = punct;
    return doc;
}

ResourceSet resources_from_json(const json& doc) {
    if (!doc.is_object()) bad("document", "top level must be an object");
    ResourceSet res;
    res.root = opt_str(doc, "root", "document");
    auto codes = opt_strings(doc, "language-codes", "document");
    res.languages = {codes.begin(), codes.end()};
    res.regions = opt_strings(doc, "regions", "document");
    const json empty = json::array();
    try {
        for (const auto& j : array_field<System>(doc, "systems", empty)) res.systems.push_back(system_from_json(j, res.languages));
        for (const auto& j : array_field<Lexeme>(doc, "lexemes", empty)) res.lexemes.push_back(lexeme_from_json(j, res.languages));
        for (const auto& j : array_field<Chooser>(doc, "choosers", empty)) res.choosers.push_back(chooser_from_json(j, res.languages));
        for (const auto& j : array_field<Inquiry>(doc, "inquiries", empty)) res.inquiries.push_back(inquiry_from_json(j, res.languages));
        for (const auto& j : array_field<MorphologyRule>(doc, "morphology", empty))
            res.morphology.push_back({str(j, "feature", "morphology"), opt_str(j, "function", "morphology"),
                                      str(j, "morph", "morphology"), langs(j, res.languages, "morphology")});
        for (const auto& j : array_field<PunctuationRule>(doc, "punctuation", empty))
            res.punctuation.push_back({str(j, "feature", "punctuation"), str(j, "mark", "punctuation"),
                                       langs(j, res.languages, "punctuation")});
    } catch (const json::exception& e) {
        bad("document", e.what());
    }
    return res;
}

std::string canonical_text(const json& doc) { return doc.dump(2) + "\n"; }

std::string canonical_text(const ResourceSet& res) { return canonical_text(to_json(res)); }

std::string content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO-ERROR", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IO-ERROR", "cannot write " + path.string());
    out << text;
}

json read_json_file(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // locate the byte offset as line:column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("PARSE-ERROR", path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// language views and validation
// ---------------------------------------------------------------------------

ResourceSet language_view(const ResourceSet& res, const std::string& language) {
    if (!res.languages.contains(language)) throw Error("UNKNOWN-LANGUAGE", "resources do not declare '" + language + "'");
    const LanguageSet only{language};
    auto applies = [&](const LanguageSet& l) { return l.contains(language); };
    ResourceSet view;
    view.root = res.root;
    view.languages = only;
    view.version = res.version;
    std::set<std::string> used_regions;
    for (const auto& s : res.systems) {
        if (!applies(s.languages)) continue;
        System copy = s;
        copy.languages = only;
        copy.outputs.clear();
        for (const auto& f : s.outputs) {
            if (!applies(f.languages)) continue;
            Feature fc = f;
            fc.languages = only;
            fc.realizations.clear();
            for (const auto& st : f.realizations) {
                if (!applies(st.languages)) continue;
                RealizationStatement sc = st;
                sc.languages = only;
                fc.realizations.push_back(std::move(sc));
            }
            copy.outputs.push_back(std::move(fc));
        }
        used_regions.insert(copy.region);
        view.systems.push_back(std::move(copy));
    }
    for (const auto& r : res.regions)
        if (used_regions.contains(r)) view.regions.push_back(r);
    auto keep = [&](const auto& items, auto& out) {
        for (const auto& item : items) {
            if (!applies(item.languages)) continue;
            auto c = item;
            c.languages = only;
            out.push_back(std::move(c));
        }
    };
    keep(res.lexemes, view.lexemes);
    keep(res.choosers, view.choosers);
    keep(res.inquiries, view.inquiries);
    keep(res.morphology, view.morphology);
    keep(res.punctuation, view.punctuation);
    return view;
}

static void validate_view(const ResourceSet& view, ValidationReport& report) {
    SystemNetwork net(view.root, view.systems);
    report.append(validate_network(net, view.lexemes));

    std::set<std::string> regions(view.regions.begin(), view.regions.end());
    std::map<std::string, const Inquiry*> inquiries;
    std::map<std::string, const Chooser*> choosers;
    for (const auto& inq : view.inquiries) {
        if (!inquiries.emplace(inq.name, &inq).second)
            report.error("DUPLICATE-INQUIRY", inq.name, "inquiry declared more than once");
        report.append(validate_inquiry(inq));
    }
    for (const auto& ch : view.choosers)
        if (!choosers.emplace(ch.name, &ch).second)
            report.error("DUPLICATE-CHOOSER", ch.name, "chooser declared more than once");

    InquiryLookup lookup = [&](std::string_view name) -> const Inquiry* {
        auto it = inquiries.find(std::string(name));
        return it == inquiries.end() ? nullptr : it->second;
    };
    for (const auto& s : view.systems) {
        if (s.region.empty())
            report.error("MISSING-REGION-TAG", s.name, "system has no region");
        else if (!regions.contains(s.region))
            report.error("UNKNOWN-REGION", s.name, "region '" + s.region + "' is not declared");
        if (s.chooser.empty()) continue;
        auto it = choosers.find(s.chooser);
        if (it == choosers.end()) {
            report.error("UNKNOWN-CHOOSER", s.name, "chooser '" + s.chooser + "' does not exist");
            continue;
        }
        report.append(validate_chooser(*it->second, s, lookup));
    }
    for (const auto& m : view.morphology)
        if (!net.has_feature(m.feature))
            report.warn("UNUSED-RULE", "morphology/" + m.feature, "feature does not exist");
    for (const auto& p : view.punctuation)
        if (!net.has_feature(p.feature))
            report.warn("UNUSED-RULE", "punctuation/" + p.feature, "feature does not exist");
}

ValidationReport validate_resources(const ResourceSet& res) {
    ValidationReport report;
    auto check_langs = [&](const LanguageSet& l, const std::string& object) {
        for (const auto& code : l)
            if (!res.languages.contains(code))
                report.error("UNKNOWN-LANGUAGE", object, "language '" + code + "' is not declared");
    };
    for (const auto& s : res.systems) check_langs(s.languages, s.name);
    for (const auto& l : res.lexemes) check_langs(l.languages, l.name);
    for (const auto& c : res.choosers) check_langs(c.languages, c.name);
    for (const auto& i : res.inquiries) check_langs(i.languages, i.name);

    if (res.languages.empty()) {
        validate_view(res, report);
    } else {
        for (const auto& lang : res.languages) validate_view(language_view(res, lang), report);
    }

    std::set<std::string> used;
    for (const auto& s : res.systems) used.insert(s.region);
    for (const auto& r : res.regions)
        if (!used.contains(r)) report.warn("EMPTY-REGION", r, "region has no systems");
    return report;
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

Grammar::Grammar(const ResourceSet& res, const std::string& language)
    : language_(language), view_(language_view(res, language)), network_(view_.root, view_.systems) {
    for (std::size_t i = 0; i < view_.lexemes.size(); ++i) lexemes_.emplace(view_.lexemes[i].name, i);
    for (std::size_t i = 0; i < view_.choosers.size(); ++i) choosers_.emplace(view_.choosers[i].name, i);
    for (std::size_t i = 0; i < view_.inquiries.size(); ++i) inquiries_.emplace(view_.inquiries[i].name, i);
    for (const auto& s : network_.systems())
        for (const auto& f : s.outputs)
            for (const auto& st : f.realizations) statements_.emplace(st.id, StatementSite{&st, &s, &f});
    version_id_ = content_hash(canonical_text(res));
}

const Lexeme* Grammar::lexeme(std::string_view name) const {
    auto it = lexemes_.find(std::string(name));
    return it == lexemes_.end() ? nullptr : &view_.lexemes[it->second];
}

const Chooser* Grammar::chooser(std::string_view name) const {
    auto it = choosers_.find(std::string(name));
    return it == choosers_.end() ? nullptr : &view_.choosers[it->second];
}

const Inquiry* Grammar::inquiry(std::string_view name) const {
    auto it = inquiries_.find(std::string(name));
    return it == inquiries_.end() ? nullptr : &view_.inquiries[it->second];
}

InquiryLookup Grammar::inquiry_lookup() const {
    return [this](std::string_view name) { return inquiry(name); };
}

Grammar::StatementSite Grammar::statement(std::string_view id) const {
    auto it = statements_.find(std::string(id));
    return it == statements_.end() ? StatementSite{} : it->second;
}

json to_json(const ValidationReport& report) {
    auto list = [](const std::vector<Diagnostic>& ds) {
        json a = json::array();
        for (const auto& d : ds) a.push_back({{"code", d.code}, {"object", d.object}, {"message", d.message}});
        return a;
    };
    return {{"errors", list(report.errors)}, {"warnings", list(report.warnings)}};
}

}  // namespace latticegen
