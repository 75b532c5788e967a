#include "contextcov/shim.hpp"

#include "contextcov/error.hpp"
#include "contextcov/glob.hpp"
#include "contextcov/report.hpp"
#include "contextcov/store.hpp"
#include "digest.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <sys/stat.h>
#include <unistd.h>

namespace contextcov {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::optional<std::string> read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_wrapper(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return false;
    std::string line;
    for (int i = 0; i < 2 && std::getline(in, line); ++i) {
        if (line == kShimMarker) return true;
    }
    return false;
}

void write_file(const fs::path& p, const std::string& text, fs::perms mode) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ShimError("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw ShimError("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::permissions(tmp, mode, ec);
    if (ec) throw ShimError("cannot set permissions on " + tmp.string() + ": " + ec.message());
    fs::rename(tmp, p, ec);
    if (ec) throw ShimError("cannot replace " + p.string() + ": " + ec.message());
}

struct Manifest {
    std::string store;
    std::map<std::string, std::string> wrappers;
};

std::optional<Manifest> read_manifest(const fs::path& shim_dir) {
    auto text = read_text(shim_dir / kShimManifestName);
    if (!text) return std::nullopt;
    json j = json::parse(*text, nullptr, false);
    Manifest m;
    if (j.is_discarded() || !j.is_object()) return m;
    m.store = j.value("store", "");
    if (j.contains("wrappers") && j["wrappers"].is_object()) {
        for (const auto& [k, v] : j["wrappers"].items()) {
            if (v.is_string()) m.wrappers[k] = v.get<std::string>();
        }
    }
    return m;
}

bool same_dir(const fs::path& a, const fs::path& b) {
    std::error_code ec1, ec2;
    const auto ca = fs::weakly_canonical(a, ec1);
    const auto cb = fs::weakly_canonical(b, ec2);
    if (ec1 || ec2) return false;
    return ca == cb;
}

bool env_is(const char* name, std::string_view value) {
    const char* v = std::getenv(name);
    return v && value == v;
}

[[noreturn]] void exec_real(const fs::path& real, const ShimExecRequest& r) {
    std::vector<std::string> storage;
    storage.push_back(r.binary);
    for (const auto& a : r.args) storage.push_back(a);
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    argv.push_back(nullptr);
    ::execv(real.c_str(), argv.data());
    std::fprintf(stderr, "[ContextCov] cannot execute %s: %s\n", real.c_str(), std::strerror(errno));
    std::_Exit(126);
}

} // namespace

std::set<std::string> process_binaries(const CheckStore& store) {
    std::set<std::string> out;
    for (const auto& [id, c] : store.constraints) {
        const auto* rule = std::get_if<ProcessRule>(&c.check);
        if (!rule || c.disabled) continue;
        out.insert(rule->binaries.begin(), rule->binaries.end());
    }
    return out;
}

std::string wrapper_script(const fs::path& exe, const fs::path& shim_dir, const fs::path& store_path,
                           const std::string& binary) {
    return "#!/bin/sh\n" + std::string(kShimMarker) + "\nexec " + shell_quote(exe.string()) +
           " shim-exec --shim-dir " + shell_quote(shim_dir.string()) + " --store " +
           shell_quote(store_path.string()) + " " + shell_quote(binary) + " \"$@\"\n";
}

ShimInstallation install_shims(const CheckStore& store, const fs::path& store_path, const fs::path& shim_dir,
                               const fs::path& exe) {
    ShimInstallation inst;
    inst.shim_dir = fs::absolute(shim_dir).lexically_normal();
    inst.store_path = fs::absolute(store_path).lexically_normal();
    inst.wrapped_binaries = process_binaries(store);

    std::error_code ec;
    fs::create_directories(inst.shim_dir, ec);
    if (ec || !fs::is_directory(inst.shim_dir))
        throw ShimError("cannot create shim directory " + inst.shim_dir.string() + ": " + ec.message());
    if (::access(inst.shim_dir.c_str(), W_OK) != 0)
        throw ShimError("shim directory is not writable: " + inst.shim_dir.string());

    for (const auto& name : inst.wrapped_binaries) {
        const fs::path p = inst.shim_dir / name;
        if (fs::exists(fs::symlink_status(p)) && !is_wrapper(p))
            throw ShimError("refusing to overwrite " + p.string() + ": not a contextcov wrapper");
    }

    const auto previous = read_manifest(inst.shim_dir);
    if (previous) {
        for (const auto& [name, hash] : previous->wrappers) {
            const fs::path p = inst.shim_dir / name;
            if (!inst.wrapped_binaries.count(name) && is_wrapper(p)) fs::remove(p, ec);
        }
    }

    if (inst.wrapped_binaries.empty()) {
        fs::remove(inst.shim_dir / kShimManifestName, ec);
        return inst;
    }

    for (const auto& name : inst.wrapped_binaries) {
        const std::string script = wrapper_script(exe, inst.shim_dir, inst.store_path, name);
        write_file(inst.shim_dir / name, script,
                   fs::perms::owner_all | fs::perms::group_read | fs::perms::group_exec | fs::perms::others_read |
                       fs::perms::others_exec);
        inst.manifest[name] = sha256_hex(script);
    }
    json j;
    j["store"] = inst.store_path.string();
    j["wrappers"] = inst.manifest;
    write_file(inst.shim_dir / kShimManifestName, j.dump(2) + "\n",
               fs::perms::owner_read | fs::perms::owner_write | fs::perms::group_read | fs::perms::others_read);
    return inst;
}

std::string path_export_line(const fs::path& shim_dir) {
    return "export PATH=\"" + fs::absolute(shim_dir).lexically_normal().string() + ":$PATH\"";
}

std::optional<std::size_t> uninstall_shims(const fs::path& shim_dir) {
    const auto manifest = read_manifest(shim_dir);
    if (!manifest) return std::nullopt;
    std::size_t removed = 0;
    std::error_code ec;
    for (const auto& [name, hash] : manifest->wrappers) {
        if (fs::remove(shim_dir / name, ec)) ++removed;
    }
    fs::remove(shim_dir / kShimManifestName, ec);
    return removed;
}

ShimStatus shim_status(const fs::path& shim_dir) {
    ShimStatus st;
    const auto manifest = read_manifest(shim_dir);
    if (!manifest) return st;
    st.installed = true;
    st.wrappers = manifest->wrappers.size();
    if (manifest->wrappers.empty()) st.drift.push_back("manifest: unreadable or lists no wrappers");
    for (const auto& [name, hash] : manifest->wrappers) {
        const fs::path p = shim_dir / name;
        const auto text = read_text(p);
        if (!text) {
            st.drift.push_back(name + ": missing");
            continue;
        }
        if (sha256_hex(*text) != hash) st.drift.push_back(name + ": modified");
        if (::access(p.c_str(), X_OK) != 0) st.drift.push_back(name + ": not executable");
    }
    return st;
}

std::vector<ShimVerdict> evaluate_invocation(const CheckStore& store, const std::string& binary,
                                             const std::vector<std::string>& args) {
    std::vector<ShimVerdict> out;
    for (const auto& [id, c] : store.constraints) {
        const auto* rule = std::get_if<ProcessRule>(&c.check);
        if (!rule || c.disabled) continue;
        if (std::find(rule->binaries.begin(), rule->binaries.end(), binary) == rule->binaries.end()) continue;
        if (!argv_matches(rule->argv_pattern, args)) continue;
        const VerdictKind kind = rule->action == EnforcementLevel::block ? VerdictKind::block : VerdictKind::warn;
        out.push_back({kind, id, c.original_text, rule->suggestion});
        if (kind == VerdictKind::block) break;
    }
    return out;
}

std::optional<fs::path> find_real_binary(const std::string& binary, const std::string& path_env,
                                         const fs::path& shim_dir) {
    if (binary.empty() || binary.find('/') != std::string::npos) return std::nullopt;
    for (const auto& entry : split(path_env, ':')) {
        const fs::path dir = entry.empty() ? fs::path(".") : fs::path(entry);
        if (same_dir(dir, shim_dir)) continue;
        const fs::path candidate = dir / binary;
        std::error_code ec;
        if (!fs::is_regular_file(candidate, ec)) continue;
        if (::access(candidate.c_str(), X_OK) != 0) continue;
        if (is_wrapper(candidate)) continue;
        return candidate;
    }
    return std::nullopt;
}

int shim_exec(const ShimExecRequest& request, std::ostream& err) {
    auto forward = [&]() -> int {
        const char* path = std::getenv("PATH");
        const auto real = find_real_binary(request.binary, path ? path : "", request.shim_dir);
        if (!real) {
            err << "[ContextCov] " << request.binary << ": command not found outside the shim directory\n";
            err.flush();
            return 127;
        }
        err.flush();
        exec_real(*real, request);
    };

    if (env_is("CONTEXTCOV_DISABLE", "1")) return forward();

    CheckStore store;
    try {
        store = load_store(request.store_path);
    } catch (const std::exception& e) {
        if (env_is("CONTEXTCOV_FAIL_OPEN", "1")) {
            err << "[ContextCov] WARNING: check store unavailable, forwarding (CONTEXTCOV_FAIL_OPEN=1): "
                << e.what() << "\n";
            return forward();
        }
        err << "[ContextCov] BLOCKED: check store unavailable\n"
            << "  Reason: " << e.what() << "\n"
            << "  Action: Run `contextcov generate`, or set CONTEXTCOV_FAIL_OPEN=1 to forward commands.\n";
        return 1;
    }

    for (const auto& v : evaluate_invocation(store, request.binary, request.args)) {
        if (v.kind == VerdictKind::block) {
            err << render_blocked(v.original_text, v.suggestion);
            return 1;
        }
        err << render_process_warning(v.original_text, v.suggestion);
    }
    return forward();
}

} // namespace contextcov
