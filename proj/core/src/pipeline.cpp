#include "contextcov/pipeline.hpp"

#include "contextcov/error.hpp"
#include "contextcov/markdown.hpp"
#include "contextcov/synthesis.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace contextcov {

std::string_view to_string(GenerationOutcome outcome) {
    switch (outcome) {
    case GenerationOutcome::stored: return "stored";
    case GenerationOutcome::retained: return "retained";
    case GenerationOutcome::rerouted: return "rerouted";
    case GenerationOutcome::grouped: return "grouped";
    case GenerationOutcome::rejected: return "rejected";
    case GenerationOutcome::filtered: return "filtered";
    case GenerationOutcome::duplicate: return "duplicate";
    }
    return "filtered";
}

std::size_t GenerationReport::count(GenerationOutcome outcome) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const GenerationEntry& e) { return e.outcome == outcome; }));
}

std::vector<std::filesystem::path> discover_instructions(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> out;
    for (const char* name : {"AGENTS.md", "CLAUDE.md", ".github/copilot-instructions.md"}) {
        std::error_code ec;
        if (std::filesystem::is_regular_file(root / name, ec)) out.push_back(root / name);
    }
    return out;
}

BinaryTables load_binary_tables(const std::filesystem::path& root) {
    BinaryTables tables = BinaryTables::defaults();
    const auto path = root / ".contextcov" / "config.json";
    std::ifstream in(path);
    if (!in) return tables;
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    auto strings = [&](const nlohmann::json& arr, const char* what) {
        std::vector<std::string> out;
        if (!arr.is_array()) throw Error(path.string() + ": " + what + " must be an array of strings");
        for (const auto& v : arr) {
            if (!v.is_string()) throw Error(path.string() + ": " + what + " must be an array of strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    };
    if (j.contains("binaries")) {
        for (auto& b : strings(j["binaries"], "binaries")) {
            if (std::find(tables.known.begin(), tables.known.end(), b) == tables.known.end()) tables.known.push_back(b);
        }
    }
    if (j.contains("alternatives")) {
        if (!j["alternatives"].is_array()) throw Error(path.string() + ": alternatives must be an array of arrays");
        for (const auto& group : j["alternatives"]) {
            auto members = strings(group, "alternatives entries");
            if (members.size() >= 2) tables.alternatives.push_back(std::move(members));
        }
    }
    return tables;
}

namespace {

struct Item {
    Slice slice;
    std::size_t file = 0;
    ConstraintId base;
    bool retained = false;
    std::vector<Constraint> previous;
    RefinedSlice refined;
    RoutingDecision decision;
    bool settled = false; // has its report entry
    std::size_t held_until = 0; // start of a stored listing group spanning [this, held_until)
    bool held = false;
};

ConstraintId group_id(const std::vector<Item>& items, std::size_t begin, std::size_t end) {
    std::vector<std::string> texts;
    for (std::size_t k = begin; k < end; ++k) texts.push_back(items[k].slice.content_text);
    return compute_constraint_id(items[begin].slice.header_path, join(texts, "\n"));
}

std::vector<Constraint> chain_from(const CheckStore& store, const ConstraintId& base) {
    std::vector<Constraint> out;
    auto it = store.constraints.find(base);
    if (it == store.constraints.end()) return out;
    out.push_back(it->second);
    for (int k = 1;; ++k) {
        auto next = store.constraints.find(derived_constraint_id(base, k));
        if (next == store.constraints.end()) break;
        out.push_back(next->second);
    }
    return out;
}

Constraint make_constraint(const Item& item, const ConstraintId& id, CheckDescriptor check) {
    Constraint c;
    c.id = id;
    c.domain = domain_of(check);
    c.original_text = item.slice.content_text;
    c.refined_text = item.refined.refined_text;
    c.source_file = item.slice.source_file;
    c.header_path = item.slice.header_path;
    c.enforcement_level =
        c.domain == Domain::arch_semantic ? EnforcementLevel::warn : level_for(item.slice.content_text);
    c.check = std::move(check);
    return c;
}

ConstraintId nth_id(const ConstraintId& base, std::size_t k) {
    return k == 0 ? base : derived_constraint_id(base, static_cast<int>(k));
}

// An "Always ..." instruction next to a process prohibition usually names the
// sanctioned workflow; it becomes the block message's action line.
std::string sibling_action(const std::vector<Slice>& slices, const Slice& self) {
    static const std::regex always(R"(\balways\s+([^.!]+))", std::regex::ECMAScript | std::regex::icase);
    for (const auto& s : slices) {
        if (s.header_path != self.header_path || s.content_text == self.content_text) continue;
        std::smatch m;
        if (!std::regex_search(s.content_text, m, always)) continue;
        std::string action;
        for (char c : m[1].str()) {
            if (c != '`') action += c;
        }
        action = collapse_whitespace(action);
        if (action.empty()) continue;
        if (action[0] >= 'a' && action[0] <= 'z') action[0] = static_cast<char>(action[0] - 'a' + 'A');
        return action + ".";
    }
    return {};
}

} // namespace

GenerationResult generate_store(const std::vector<InstructionFile>& files, const CheckStore& previous,
                                const GenerationOptions& options) {
    GenerationReport report;
    std::vector<std::vector<Slice>> file_slices;
    std::vector<Item> items;
    std::vector<GenerationEntry> entries; // parallel to items
    std::set<ConstraintId> seen;

    for (std::size_t f = 0; f < files.size(); ++f) {
        auto tree = parse_document(files[f].path, files[f].text);
        file_slices.push_back(enumerate_slices(tree));
        for (const auto& s : file_slices.back()) {
            Item item;
            item.slice = s;
            item.file = f;
            item.base = compute_constraint_id(s.header_path, s.content_text);
            GenerationEntry entry;
            entry.source_file = s.source_file;
            entry.header_path = s.header_path;
            entry.content_text = s.content_text;
            if (!seen.insert(item.base).second) {
                entry.outcome = GenerationOutcome::duplicate;
                entry.note = "repeats an earlier rule with the same header path";
                report.warnings.push_back("duplicate rule skipped in " + s.source_file + ": " + s.content_text);
                item.settled = true;
            } else {
                item.previous = chain_from(previous, item.base);
                item.retained = !item.previous.empty();
            }
            items.push_back(std::move(item));
            entries.push_back(std::move(entry));
        }
    }

    // Listing groups already in the store are recognised before refinement so
    // that their members never reach the provider again. Longest runs first.
    auto groupable = [&](std::size_t k) {
        return !items[k].settled && !items[k].retained && !items[k].held &&
               items[k].slice.kind == NodeKind::list_item;
    };
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        while (j < items.size() && groupable(j) && items[j].file == items[i].file &&
               items[j].slice.header_path == items[i].slice.header_path)
            ++j;
        if (j == i) {
            ++i;
            continue;
        }
        for (std::size_t len = std::min<std::size_t>(j - i, 200); len >= 2; --len) {
            for (std::size_t a = i; a + len <= j; ++a) {
                bool free = true;
                for (std::size_t k = a; k < a + len; ++k) free = free && !items[k].held;
                if (!free || !previous.constraints.count(group_id(items, a, a + len))) continue;
                for (std::size_t k = a; k < a + len; ++k) items[k].held = true;
                items[a].held_until = a + len;
            }
        }
        i = j;
    }

    // Refine and route everything not already in the store.
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].settled && !items[i].retained && !items[i].held) pending.push_back(i);
    }
    const int workers = options.provider.remote() ? options.provider.concurrency : 1;
    parallel_for(pending.size(), workers, [&](std::size_t k) {
        Item& item = items[pending[k]];
        item.refined = refine(item.slice, options.provider);
        if (item.refined.is_constraint) item.decision = route(item.refined, options.provider, options.tables);
    });

    std::vector<Constraint> fresh;
    auto note_diagnostics = [&](const Item& item) {
        if (!item.refined.diagnostic.empty()) report.warnings.push_back(item.refined.diagnostic);
        if (!item.decision.diagnostic.empty()) report.warnings.push_back(item.decision.diagnostic);
    };
    auto settle = [&](std::size_t i, GenerationOutcome outcome, std::vector<Constraint> made, std::string note) {
        auto& entry = entries[i];
        entry.outcome = outcome;
        entry.note = std::move(note);
        if (!made.empty()) entry.domain = made.front().domain;
        for (auto& c : made) {
            entry.ids.push_back(c.id);
            fresh.push_back(std::move(c));
        }
        items[i].settled = true;
    };
    auto reroute = [&](std::size_t i, const std::string& why) {
        const Item& item = items[i];
        Constraint probe = make_constraint(item, item.base, SemanticRule{item.slice.content_text, {}});
        probe.check = synthesize_semantic(probe, ArchSemMeta{item.slice.content_text});
        report.warnings.push_back("rerouted to semantic judgment: \"" + item.slice.content_text + "\" (" + why + ")");
        settle(i, GenerationOutcome::rerouted, {probe}, why);
    };
    // Keeps only descriptors that validate; returns the diagnostics of the rest.
    auto admit = [&](std::vector<CheckDescriptor>& checks) {
        std::vector<std::string> problems;
        std::vector<CheckDescriptor> kept;
        for (auto& c : checks) {
            auto v = validate_descriptor(c);
            if (v.ok)
                kept.push_back(std::move(c));
            else
                problems.push_back(v.summary());
        }
        checks = std::move(kept);
        return problems;
    };

    auto assign_owners = [&](std::size_t begin, std::size_t end, std::vector<Constraint> old) {
        std::map<std::size_t, std::vector<Constraint>> owned;
        for (auto& c : old) {
            std::size_t owner = 0;
            for (std::size_t k = begin; k < end; ++k) {
                if (items[k].slice.content_text == c.original_text) {
                    owner = k - begin;
                    break;
                }
            }
            owned[owner].push_back(std::move(c));
        }
        return owned;
    };
    auto settle_group = [&](std::size_t begin, std::size_t end, GenerationOutcome outcome,
                            std::map<std::size_t, std::vector<Constraint>> owned) {
        std::vector<std::string> owner_ids;
        for (const auto& [idx, cs] : owned) {
            for (const auto& c : cs) owner_ids.push_back(c.id.str());
        }
        for (std::size_t k = 0; begin + k < end; ++k) {
            auto it = owned.find(k);
            if (it != owned.end())
                settle(begin + k, outcome, std::move(it->second), "listing rule");
            else
                settle(begin + k, GenerationOutcome::grouped, {}, "folded into " + join(owner_ids, ", "));
        }
    };

    for (std::size_t i = 0; i < items.size(); ++i) {
        Item& item = items[i];
        if (item.settled) continue;
        if (item.held_until > 0) {
            const std::size_t end = item.held_until;
            settle_group(i, end, GenerationOutcome::retained,
                         assign_owners(i, end, chain_from(previous, group_id(items, i, end))));
            i = end - 1;
            continue;
        }
        if (item.retained) {
            settle(i, GenerationOutcome::retained, item.previous, {});
            continue;
        }
        note_diagnostics(item);
        if (!item.refined.is_constraint) settle(i, GenerationOutcome::filtered, {}, "no constraint marker");
    }

    // Architecture listings: maximal runs of adjacent list items under one
    // heading, synthesized together.
    auto arch_item = [&](std::size_t i) {
        const Item& it = items[i];
        return !it.settled && it.slice.kind == NodeKind::list_item && it.decision.domain == Domain::arch_deterministic;
    };
    for (std::size_t i = 0; i < items.size();) {
        if (!arch_item(i)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < items.size() && arch_item(j) && items[j].file == items[i].file &&
               items[j].slice.header_path == items[i].slice.header_path)
            ++j;
        bool listing = false;
        for (std::size_t k = i; k < j; ++k) listing = listing || !listing_path(items[k].slice.content_text).empty();
        if (!listing) {
            i = j;
            continue;
        }

        std::vector<Slice> group;
        std::vector<std::string> texts;
        for (std::size_t k = i; k < j; ++k) {
            group.push_back(items[k].slice);
            texts.push_back(items[k].slice.content_text);
        }
        const ConstraintId gid = compute_constraint_id(items[i].slice.header_path, join(texts, "\n"));
        std::map<std::size_t, std::vector<Constraint>> owned; // group index -> constraints
        GenerationOutcome outcome = GenerationOutcome::stored;

        if (auto old = chain_from(previous, gid); !old.empty()) {
            outcome = GenerationOutcome::retained;
            owned = assign_owners(i, j, std::move(old));
        } else {
            const auto meta = std::get<ArchDetMeta>(items[i].decision.metadata);
            auto rules = synthesize_arch(meta, group, file_slices[items[i].file]);
            std::size_t k = 0;
            for (auto& r : rules) {
                std::vector<CheckDescriptor> one{CheckDescriptor{r.rule}};
                auto problems = admit(one);
                for (auto& p : problems) report.warnings.push_back("architecture rule rejected: " + p);
                if (one.empty()) continue;
                owned[r.owner].push_back(make_constraint(items[i + r.owner], nth_id(gid, k++), std::move(one.front())));
            }
        }
        if (owned.empty()) {
            i = j; // members fall through to individual synthesis below
            continue;
        }
        settle_group(i, j, outcome, std::move(owned));
        i = j;
    }

    // Source synthesis may consult the provider; run it in parallel.
    std::vector<std::size_t> source_items;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].settled && items[i].decision.domain == Domain::source) source_items.push_back(i);
    }
    std::vector<SourceSynthesis> source_results(source_items.size());
    parallel_for(source_items.size(), workers, [&](std::size_t k) {
        const Item& item = items[source_items[k]];
        Constraint probe = make_constraint(item, item.base, SemanticRule{});
        source_results[k] =
            synthesize_source(probe, std::get<SourceMeta>(item.decision.metadata), options.provider);
    });
    std::map<std::size_t, SourceSynthesis*> source_by_item;
    for (std::size_t k = 0; k < source_items.size(); ++k) source_by_item[source_items[k]] = &source_results[k];

    for (std::size_t i = 0; i < items.size(); ++i) {
        Item& item = items[i];
        if (item.settled) continue;
        std::vector<CheckDescriptor> checks;
        std::string why;
        switch (item.decision.domain) {
        case Domain::process: {
            Constraint probe = make_constraint(item, item.base, SemanticRule{});
            std::optional<std::string> action;
            for (auto& r : synthesize_process(probe, std::get<ProcessMeta>(item.decision.metadata), options.tables)) {
                if (r.suggestion.empty()) {
                    if (!action) action = sibling_action(file_slices[item.file], item.slice);
                    r.suggestion = *action;
                }
                checks.emplace_back(std::move(r));
            }
            why = "no binary to block";
            break;
        }
        case Domain::source: {
            SourceSynthesis* s = source_by_item[i];
            for (auto& r : s->rules) checks.emplace_back(std::move(r));
            why = s->diagnostic.empty() ? "no source pattern" : s->diagnostic;
            if (!s->diagnostic.empty() && !s->rules.empty()) report.warnings.push_back(s->diagnostic);
            break;
        }
        case Domain::arch_deterministic: {
            auto rules = synthesize_arch(std::get<ArchDetMeta>(item.decision.metadata), {item.slice},
                                         file_slices[item.file]);
            for (auto& r : rules) checks.emplace_back(std::move(r.rule));
            why = "no structural rule recognised";
            break;
        }
        case Domain::arch_semantic: {
            Constraint probe = make_constraint(item, item.base, SemanticRule{});
            checks.emplace_back(synthesize_semantic(probe, std::get<ArchSemMeta>(item.decision.metadata)));
            break;
        }
        }
        const bool attempted = !checks.empty();
        auto problems = admit(checks);
        if (checks.empty()) {
            if (item.decision.domain == Domain::arch_semantic) {
                settle(i, GenerationOutcome::rejected, {}, join(problems, "; "));
                report.warnings.push_back("rejected: \"" + item.slice.content_text + "\"");
            } else {
                reroute(i, attempted ? "invalid descriptor: " + join(problems, "; ") : why);
            }
            continue;
        }
        for (auto& p : problems) report.warnings.push_back("descriptor dropped: " + p);
        std::vector<Constraint> made;
        for (std::size_t k = 0; k < checks.size(); ++k)
            made.push_back(make_constraint(item, nth_id(item.base, k), std::move(checks[k])));
        settle(i, GenerationOutcome::stored, std::move(made), {});
    }

    auto merged = merge_incremental(previous, std::move(fresh));
    report.changes = std::move(merged.changes);
    report.entries = std::move(entries);
    return {std::move(merged.store), std::move(report)};
}

} // namespace contextcov
