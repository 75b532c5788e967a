#include "contextcov/store.hpp"

#include "contextcov/error.hpp"
#include "contextcov/synthesis.hpp"
#include "json_codec.hpp"

#include <fstream>
#include <sstream>

namespace contextcov {

namespace codec {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
    throw StoreError(StoreErrorKind::malformed, where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) malformed(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) malformed(where, std::string("missing field \"") + key + "\"");
    return *it;
}

EnforcementLevel require_level(const json& j, const char* key, const std::string& where) {
    const std::string text = require_string(j, key, where);
    auto level = parse_level(text);
    if (!level) malformed(where, std::string("field \"") + key + "\" must be \"block\" or \"warn\"");
    return *level;
}

json languages_json(const std::vector<Language>& languages) {
    json out = json::array();
    for (Language l : languages) out.push_back(std::string(to_string(l)));
    return out;
}

} // namespace

std::string require_string(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_string()) malformed(where, std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<std::string> require_strings(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_array()) malformed(where, std::string("field \"") + key + "\" must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) malformed(where, std::string("field \"") + key + "\" must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

json descriptor_to_json(const CheckDescriptor& check) {
    json j;
    j["kind"] = std::string(descriptor_kind(check));
    if (const auto* p = std::get_if<ProcessRule>(&check)) {
        j["binaries"] = p->binaries;
        j["argv_pattern"] = p->argv_pattern;
        j["action"] = std::string(to_string(p->action));
        j["message"] = p->message;
        j["suggestion"] = p->suggestion;
        j["scope"] = p->scope;
    } else if (const auto* s = std::get_if<SourceRule>(&check)) {
        j["languages"] = languages_json(s->languages);
        j["query"] = s->query;
        json preds = json::array();
        for (const auto& cp : s->capture_predicates) preds.push_back({{"capture", cp.capture}, {"regex", cp.regex}});
        j["capture_predicates"] = preds;
        j["message"] = s->message;
        j["severity"] = std::string(to_string(s->severity));
        j["suggestion"] = s->suggestion;
    } else if (const auto* a = std::get_if<ArchRule>(&check)) {
        if (const auto* r = std::get_if<LayerOrder>(a)) {
            j["layers"] = r->layers;
        } else if (const auto* r = std::get_if<AllowedSubdirs>(a)) {
            j["parent_prefix"] = r->parent_prefix;
            j["allowed"] = r->allowed;
        } else if (const auto* r = std::get_if<ForbiddenEdge>(a)) {
            j["from_glob"] = r->from_glob;
            j["to_glob"] = r->to_glob;
        } else if (const auto* r = std::get_if<NoCycles>(a)) {
            j["scope_glob"] = r->scope_glob;
        }
    } else if (const auto* m = std::get_if<SemanticRule>(&check)) {
        j["principle_text"] = m->principle_text;
        j["context_hints"] = m->context_hints;
    }
    return j;
}

CheckDescriptor descriptor_from_json(const json& j, const std::string& where) {
    const std::string kind = require_string(j, "kind", where);
    auto optional_string = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::string();
        if (!it->is_string()) malformed(where, std::string("field \"") + key + "\" must be a string");
        return it->get<std::string>();
    };
    if (kind == "process") {
        ProcessRule r;
        r.binaries = require_strings(j, "binaries", where);
        r.argv_pattern = j.contains("argv_pattern") ? require_strings(j, "argv_pattern", where)
                                                    : std::vector<std::string>{};
        r.action = require_level(j, "action", where);
        r.message = optional_string("message");
        r.suggestion = optional_string("suggestion");
        if (j.contains("scope")) r.scope = require_string(j, "scope", where);
        return r;
    }
    if (kind == "source") {
        SourceRule r;
        for (const auto& name : require_strings(j, "languages", where)) {
            auto lang = parse_language(name);
            if (!lang) malformed(where, "unknown language \"" + name + "\"");
            r.languages.push_back(*lang);
        }
        r.query = require_string(j, "query", where);
        if (j.contains("capture_predicates")) {
            const json& preds = j.at("capture_predicates");
            if (!preds.is_array()) malformed(where, "capture_predicates must be an array");
            for (const auto& p : preds) {
                if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string()) {
                    r.capture_predicates.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
                } else {
                    r.capture_predicates.push_back(
                        {require_string(p, "capture", where), require_string(p, "regex", where)});
                }
            }
        }
        r.message = optional_string("message");
        r.severity = require_level(j, "severity", where);
        r.suggestion = optional_string("suggestion");
        return r;
    }
    if (kind == "arch_layer_order") return ArchRule{LayerOrder{require_strings(j, "layers", where)}};
    if (kind == "arch_allowed_subdirs") {
        return ArchRule{AllowedSubdirs{require_string(j, "parent_prefix", where), require_strings(j, "allowed", where)}};
    }
    if (kind == "arch_forbidden_edge") {
        return ArchRule{ForbiddenEdge{require_string(j, "from_glob", where), require_string(j, "to_glob", where)}};
    }
    if (kind == "arch_no_cycles") {
        NoCycles r;
        if (j.contains("scope_glob")) r.scope_glob = require_string(j, "scope_glob", where);
        return ArchRule{r};
    }
    if (kind == "semantic") {
        SemanticRule r;
        r.principle_text = require_string(j, "principle_text", where);
        if (j.contains("context_hints")) r.context_hints = require_strings(j, "context_hints", where);
        return r;
    }
    malformed(where, "unknown check kind \"" + kind + "\"");
}

json constraint_to_json(const Constraint& c) {
    json j;
    j["domain"] = std::string(to_string(c.domain));
    j["original_text"] = c.original_text;
    j["refined_text"] = c.refined_text;
    j["source_file"] = c.source_file;
    j["header_path"] = c.header_path;
    j["enforcement_level"] = std::string(to_string(c.enforcement_level));
    j["check"] = descriptor_to_json(c.check);
    if (c.disabled) j["disabled"] = true;
    return j;
}

Constraint constraint_from_json(const ConstraintId& id, const json& j) {
    const std::string where = "constraint " + id.str();
    Constraint c;
    c.id = id;
    const std::string domain = require_string(j, "domain", where);
    auto d = parse_domain(domain);
    if (!d) malformed(where, "unknown domain \"" + domain + "\"");
    c.domain = *d;
    c.original_text = require_string(j, "original_text", where);
    c.refined_text = j.contains("refined_text") ? require_string(j, "refined_text", where) : std::string();
    c.source_file = require_string(j, "source_file", where);
    c.header_path = require_strings(j, "header_path", where);
    c.enforcement_level = require_level(j, "enforcement_level", where);
    c.check = descriptor_from_json(require(j, "check", where), where + " check");
    if (domain_of(c.check) != c.domain) malformed(where, "check kind does not match domain " + domain);
    if (j.contains("disabled")) {
        if (!j.at("disabled").is_boolean()) malformed(where, "field \"disabled\" must be a boolean");
        c.disabled = j.at("disabled").get<bool>();
    }
    return c;
}

} // namespace codec

std::string serialize_store(const CheckStore& store) {
    nlohmann::json constraints = nlohmann::json::object();
    for (const auto& [id, c] : store.constraints) constraints[id.str()] = codec::constraint_to_json(c);
    nlohmann::json j;
    j["version"] = store.version;
    j["constraints"] = std::move(constraints);
    return j.dump(2) + "\n";
}

CheckStore parse_store(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw StoreError(StoreErrorKind::malformed, std::string("store is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw StoreError(StoreErrorKind::malformed, "store must be a JSON object");

    CheckStore store;
    // Stores written before the version field existed are read as version 1.
    if (auto v = j.find("version"); v != j.end()) {
        if (!v->is_number_integer()) throw StoreError(StoreErrorKind::malformed, "store version must be an integer");
        store.version = v->get<int>();
        if (store.version != kStoreFormatVersion) {
            throw StoreError(StoreErrorKind::unsupported_version,
                             "unsupported store version " + std::to_string(store.version) + " (expected " +
                                 std::to_string(kStoreFormatVersion) + ")");
        }
    }
    auto cs = j.find("constraints");
    if (cs == j.end() || !cs->is_object())
        throw StoreError(StoreErrorKind::malformed, "store must contain a \"constraints\" object");
    for (const auto& [key, value] : cs->items()) {
        auto id = ConstraintId::parse(key);
        if (!id) throw StoreError(StoreErrorKind::malformed, "constraint id \"" + key + "\" is not 16 lowercase hex chars");
        store.constraints.emplace(*id, codec::constraint_from_json(*id, value));
    }
    return store;
}

void save_store(const CheckStore& store, const std::filesystem::path& path) {
    for (const auto& [id, c] : store.constraints) {
        auto result = validate_descriptor(c.check);
        if (!result.ok) {
            throw StoreError(StoreErrorKind::invalid_descriptor,
                             "refusing to save: check " + id.str() + " fails validation: " + result.summary());
        }
    }
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError(StoreErrorKind::io, "cannot write " + tmp.string());
        out << serialize_store(store);
        if (!out) throw StoreError(StoreErrorKind::io, "write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw StoreError(StoreErrorKind::io, "cannot replace " + path.string() + ": " + ec.message());
}

CheckStore load_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError(StoreErrorKind::missing_file, "check store not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_store(buf.str());
}

} // namespace contextcov
