#pragma once

#include "contextcov/constraint.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace contextcov {

inline constexpr const char* kShimManifestName = ".contextcov-shims.json";
inline constexpr const char* kShimMarker = "# generated by contextcov";

struct ShimInstallation {
    std::filesystem::path shim_dir;
    std::set<std::string> wrapped_binaries;
    std::filesystem::path store_path;
    std::map<std::string, std::string> manifest; // binary -> sha256 of the wrapper script
};

/// Binaries named by enabled process rules.
std::set<std::string> process_binaries(const CheckStore& store);

/// POSIX sh wrapper that execs `<exe> shim-exec ... <binary> "$@"`.
std::string wrapper_script(const std::filesystem::path& exe, const std::filesystem::path& shim_dir,
                           const std::filesystem::path& store_path, const std::string& binary);

/// Writes one 0755 wrapper per process binary plus a manifest, removing
/// wrappers of a previous installation that are no longer needed. With no
/// process rules the directory is left without wrappers or manifest. Throws
/// ShimError on an unwritable directory or when a non-shim file already uses
/// a wrapper's name.
ShimInstallation install_shims(const CheckStore& store, const std::filesystem::path& store_path,
                               const std::filesystem::path& shim_dir, const std::filesystem::path& exe);

/// `export PATH="<shim_dir>:$PATH"`
std::string path_export_line(const std::filesystem::path& shim_dir);

/// Number of wrappers removed, or nullopt when nothing was installed.
std::optional<std::size_t> uninstall_shims(const std::filesystem::path& shim_dir);

struct ShimStatus {
    bool installed = false;
    std::size_t wrappers = 0;
    std::vector<std::string> drift; // "<binary>: <problem>"

    bool ok() const { return installed && drift.empty(); }
};

ShimStatus shim_status(const std::filesystem::path& shim_dir);

enum class VerdictKind { allow, warn, block };

struct ShimVerdict {
    VerdictKind kind = VerdictKind::allow;
    ConstraintId rule_id;
    std::string original_text;
    std::string suggestion;
};

/// Matching rules in ID order: every WARN, then the first BLOCK (if any),
/// after which evaluation stops.
std::vector<ShimVerdict> evaluate_invocation(const CheckStore& store, const std::string& binary,
                                             const std::vector<std::string>& args);

/// First executable named `binary` on `path_env`, skipping entries that are
/// the shim directory and files that are themselves contextcov wrappers.
std::optional<std::filesystem::path> find_real_binary(const std::string& binary, const std::string& path_env,
                                                      const std::filesystem::path& shim_dir);

struct ShimExecRequest {
    std::string binary;
    std::vector<std::string> args;
    std::filesystem::path shim_dir;
    std::filesystem::path store_path;
};

/// Evaluates the invocation and replaces the process with the real binary on
/// ALLOW. Returns only when it does not exec: 1 when blocked (or when the
/// store cannot be read and CONTEXTCOV_FAIL_OPEN is not 1), 127 when no real
/// binary exists. CONTEXTCOV_DISABLE=1 forwards without evaluation.
int shim_exec(const ShimExecRequest& request, std::ostream& err);

} // namespace contextcov
