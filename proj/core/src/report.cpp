#include "contextcov/report.hpp"

#include "contextcov/error.hpp"

#include <json.hpp>

#include <set>

namespace contextcov {

using nlohmann::json;

std::string render_blocked(const std::string& original_text, const std::string& suggestion) {
    std::string out = "[ContextCov] BLOCKED: Process constraint violated\n";
    out += "  Rule: \"" + original_text + "\"\n";
    if (!suggestion.empty()) out += "  Action: " + suggestion + "\n";
    return out;
}

std::string render_process_warning(const std::string& original_text, const std::string& suggestion) {
    std::string out = "[ContextCov] WARNING: Process constraint matched\n";
    out += "  Rule: \"" + original_text + "\"\n";
    if (!suggestion.empty()) out += "  Action: " + suggestion + "\n";
    return out;
}

std::string render_source_violation(const Violation& v, const std::string& original_text) {
    std::string out = "[ContextCov] Source violation: " + v.file + ":" + std::to_string(v.line) + "\n";
    out += "  Rule: \"" + original_text + "\"\n";
    if (!v.found.empty()) out += "  Found: " + v.found + "\n";
    if (v.suggestion && !v.suggestion->empty()) out += "  Suggestion: " + *v.suggestion + "\n";
    return out;
}

std::string render_arch_violation(const ArchViolation& v, const std::string& original_text) {
    std::string out = "[ContextCov] Architectural violation: " + v.source + "\n";
    out += "  Rule: \"" + original_text + "\"\n";
    out += "  Suggestion: " + (v.suggestion.empty() ? v.message : v.suggestion) + "\n";
    return out;
}

std::string render_semantic_warning(const std::string& principle, const std::string& file,
                                    const std::string& explanation, const std::string& suggestion) {
    std::string out = "[ContextCov] WARNING: Possible architectural violation\n";
    out += "  Rule: \"" + principle + "\"\n";
    out += "  File: " + file + "\n";
    out += "  Concern: " + explanation + "\n";
    out += "  Suggestion: " +
           (suggestion.empty() ? std::string("Review this change against the rule above.") : suggestion) + "\n";
    return out;
}

std::size_t RunReport::blocking() const {
    std::size_t n = 0;
    for (const auto& v : source) n += v.severity == EnforcementLevel::block;
    for (const auto& v : arch) n += v.severity == EnforcementLevel::block;
    return n;
}

std::size_t RunReport::total() const { return source.size() + arch.size() + semantic.size(); }

int RunReport::exit_code(bool strict) const {
    if (blocking() > 0) return 1;
    return strict && total() > 0 ? 1 : 0;
}

RunReport make_run_report(const CheckStore& store, std::string scope, LintResult lint,
                          std::vector<ArchViolation> arch, const std::vector<JudgedRequest>& judged,
                          std::vector<std::string> diagnostics) {
    RunReport r;
    r.scope = std::move(scope);
    for (Domain d : kAllDomains) r.counts[d];
    for (const auto& [id, c] : store.constraints) {
        if (!c.disabled) ++r.counts[domain_of(c.check)].checks_total;
    }
    r.source = std::move(lint.violations);
    r.arch = std::move(arch);
    r.files_scanned = lint.files_scanned;
    r.diagnostics = std::move(lint.diagnostics);
    for (auto& d : diagnostics) r.diagnostics.push_back(std::move(d));
    for (const auto& j : judged) {
        if (!j.judgment.diagnostic.empty())
            r.diagnostics.push_back(j.request.file + ": " + j.request.rule_id.str() + ": " + j.judgment.diagnostic);
        if (j.judgment.verdict != Verdict::warning) continue;
        r.semantic.push_back({j.request.rule_id, j.request.file, j.request.rule.principle_text,
                              j.judgment.explanation, j.judgment.suggestion, j.judgment.confidence});
    }

    auto tally = [&](Domain d, const std::set<ConstraintId>& ids, std::size_t n) {
        r.counts[d].checks_triggered = ids.size();
        r.counts[d].violations = n;
    };
    std::set<ConstraintId> ids;
    for (const auto& v : r.source) ids.insert(v.rule_id);
    tally(Domain::source, ids, r.source.size());
    ids.clear();
    for (const auto& v : r.arch) ids.insert(v.rule_id);
    tally(Domain::arch_deterministic, ids, r.arch.size());
    ids.clear();
    for (const auto& v : r.semantic) ids.insert(v.rule_id);
    tally(Domain::arch_semantic, ids, r.semantic.size());
    return r;
}

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? json(*v) : json(nullptr);
}

ConstraintId id_from(const json& j) {
    auto id = ConstraintId::parse(j.at("rule_id").get<std::string>());
    if (!id) throw Error("invalid rule_id in report");
    return *id;
}

EnforcementLevel level_from(const json& j) {
    auto level = parse_level(j.at("severity").get<std::string>());
    if (!level) throw Error("invalid severity in report");
    return *level;
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

} // namespace

std::string run_report_to_json(const RunReport& report) {
    json j;
    j["scope"] = report.scope;
    j["files_scanned"] = report.files_scanned;
    json counts = json::object();
    for (const auto& [d, c] : report.counts) {
        counts[std::string(to_string(d))] = {
            {"checks_total", c.checks_total}, {"checks_triggered", c.checks_triggered}, {"violations", c.violations}};
    }
    j["counts"] = counts;
    json violations = json::array();
    for (const auto& v : report.source) {
        json o;
        o["rule_id"] = v.rule_id.str();
        o["file"] = v.file;
        o["line"] = v.line;
        o["column"] = v.column;
        o["severity"] = std::string(to_string(v.severity));
        o["message"] = v.message;
        put_optional(o, "suggestion", v.suggestion);
        o["found"] = v.found;
        violations.push_back(std::move(o));
    }
    j["violations"] = violations;
    json arch = json::array();
    for (const auto& v : report.arch) {
        json o;
        o["rule_id"] = v.rule_id.str();
        o["source"] = v.source;
        put_optional(o, "target", v.target);
        o["message"] = v.message;
        put_optional(o, "cycle_members", v.cycle_members);
        o["severity"] = std::string(to_string(v.severity));
        o["suggestion"] = v.suggestion;
        arch.push_back(std::move(o));
    }
    j["arch_violations"] = arch;
    json semantic = json::array();
    for (const auto& v : report.semantic) {
        json o;
        o["rule_id"] = v.rule_id.str();
        o["file"] = v.file;
        o["verdict"] = "warning";
        o["severity"] = "warn";
        o["principle"] = v.principle;
        o["explanation"] = v.explanation;
        o["suggestion"] = v.suggestion;
        put_optional(o, "confidence", v.confidence);
        semantic.push_back(std::move(o));
    }
    j["judgments"] = semantic;
    j["diagnostics"] = report.diagnostics;
    j["blocking"] = report.blocking();
    return j.dump(2) + "\n";
}

RunReport run_report_from_json(const std::string& text) {
    RunReport r;
    try {
        const json j = json::parse(text);
        r.scope = j.at("scope").get<std::string>();
        r.files_scanned = j.at("files_scanned").get<std::size_t>();
        for (const auto& [key, c] : j.at("counts").items()) {
            auto d = parse_domain(key);
            if (!d) throw Error("unknown domain in report: " + key);
            r.counts[*d] = {c.at("checks_total").get<std::size_t>(), c.at("checks_triggered").get<std::size_t>(),
                            c.at("violations").get<std::size_t>()};
        }
        for (const auto& o : j.at("violations")) {
            Violation v;
            v.rule_id = id_from(o);
            v.file = o.at("file").get<std::string>();
            v.line = o.at("line").get<int>();
            v.column = o.at("column").get<int>();
            v.severity = level_from(o);
            v.message = o.at("message").get<std::string>();
            v.suggestion = optional_from<std::string>(o, "suggestion");
            v.found = o.value("found", "");
            r.source.push_back(std::move(v));
        }
        for (const auto& o : j.at("arch_violations")) {
            ArchViolation v;
            v.rule_id = id_from(o);
            v.source = o.at("source").get<std::string>();
            v.target = optional_from<std::string>(o, "target");
            v.message = o.at("message").get<std::string>();
            v.cycle_members = optional_from<std::vector<std::string>>(o, "cycle_members");
            v.severity = level_from(o);
            v.suggestion = o.at("suggestion").get<std::string>();
            r.arch.push_back(std::move(v));
        }
        for (const auto& o : j.at("judgments")) {
            r.semantic.push_back({id_from(o), o.at("file").get<std::string>(), o.at("principle").get<std::string>(),
                                  o.at("explanation").get<std::string>(), o.at("suggestion").get<std::string>(),
                                  optional_from<std::string>(o, "confidence")});
        }
        r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed run report: ") + e.what());
    }
    return r;
}

std::string render_run_report_text(const RunReport& report, const CheckStore& store) {
    auto original = [&](const ConstraintId& id, const std::string& fallback) {
        auto it = store.constraints.find(id);
        return it == store.constraints.end() ? fallback : it->second.original_text;
    };
    std::string out;
    for (const auto& v : report.source) out += render_source_violation(v, original(v.rule_id, v.message)) + "\n";
    for (const auto& v : report.arch) out += render_arch_violation(v, original(v.rule_id, v.message)) + "\n";
    for (const auto& v : report.semantic)
        out += render_semantic_warning(v.principle, v.file, v.explanation, v.suggestion) + "\n";
    out += "ContextCov: " + std::to_string(report.source.size()) + " source, " +
           std::to_string(report.arch.size()) + " architectural, " + std::to_string(report.semantic.size()) +
           " semantic finding(s), " + std::to_string(report.blocking()) + " blocking; " +
           std::to_string(report.files_scanned) + " file(s) scanned\n";
    return out;
}

} // namespace contextcov
