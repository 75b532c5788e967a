#pragma once

#include "contextcov/vcs.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testing {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        std::string templ = (fs::temp_directory_path() / "contextcov-XXXXXX").string();
        if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline contextcov::ProcessResult git(const fs::path& root, std::vector<std::string> args) {
    std::vector<std::string> argv{"git", "-C", root.string(), "-c", "user.name=t", "-c", "user.email=t@example.com",
                                  "-c", "commit.gpgsign=false"};
    argv.insert(argv.end(), args.begin(), args.end());
    auto r = contextcov::run_process(argv);
    if (r.exit_code != 0) throw std::runtime_error("git failed: " + r.err);
    return r;
}

inline void git_init(const fs::path& root) {
    git(root, {"init", "-q", "-b", "main"});
}

inline void git_commit_all(const fs::path& root, const std::string& message = "snapshot") {
    git(root, {"add", "-A"});
    git(root, {"commit", "-q", "--allow-empty", "-m", message});
}

inline std::string fixture(const std::string& name) {
    return read_file(fs::path(CONTEXTCOV_FIXTURE_DIR) / name);
}

} // namespace testing
