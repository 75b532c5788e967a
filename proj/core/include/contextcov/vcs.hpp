#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace contextcov {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs argv[0] (PATH lookup) with the given arguments and captures both
/// output streams. Throws Error when the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input = {});

bool in_git_worktree(const std::filesystem::path& root);

/// `git -C root <args...>` split into non-empty lines. Throws ScopeError with
/// git's message on a non-zero exit.
std::vector<std::string> git_lines(const std::filesystem::path& root, const std::vector<std::string>& args);

} // namespace contextcov
