#include "contextcov/vcs.hpp"

#include "contextcov/error.hpp"
#include "text_util.hpp"

#include <cerrno>
#include <cstring>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace contextcov {

namespace {

struct Pipe {
    int fd[2] = {-1, -1};

    Pipe() {
        if (pipe(fd) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fd[0] >= 0) close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) close(fd[1]);
        fd[1] = -1;
    }
};

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input) {
    if (argv.empty()) throw Error("run_process: empty argument vector");
    Pipe in, out, err;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], 0);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], 1);
    posix_spawn_file_actions_adddup2(&actions, err.fd[1], 2);
    for (int fd : {in.fd[0], in.fd[1], out.fd[0], out.fd[1], err.fd[0], err.fd[1]})
        posix_spawn_file_actions_addclose(&actions, fd);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, argv[0].c_str(), &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw Error("cannot run " + argv[0] + ": " + std::strerror(rc));

    in.close_read();
    out.close_write();
    err.close_write();
    std::size_t written = 0;
    if (input.empty()) in.close_write();

    ProcessResult result;
    char buf[8192];
    while (out.fd[0] >= 0 || err.fd[0] >= 0) {
        pollfd fds[3];
        nfds_t n = 0;
        if (out.fd[0] >= 0) fds[n++] = {out.fd[0], POLLIN, 0};
        if (err.fd[0] >= 0) fds[n++] = {err.fd[0], POLLIN, 0};
        if (in.fd[1] >= 0) fds[n++] = {in.fd[1], POLLOUT, 0};
        if (poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (nfds_t i = 0; i < n; ++i) {
            if (!fds[i].revents) continue;
            if (fds[i].fd == in.fd[1]) {
                const ssize_t w = write(in.fd[1], input.data() + written, input.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                if (w < 0 || written == input.size()) in.close_write();
                continue;
            }
            const ssize_t r = read(fds[i].fd, buf, sizeof buf);
            if (r > 0) {
                (fds[i].fd == out.fd[0] ? result.out : result.err).append(buf, static_cast<std::size_t>(r));
            } else if (r == 0 || errno != EINTR) {
                if (fds[i].fd == out.fd[0])
                    out.close_read();
                else
                    err.close_read();
            }
        }
    }
    in.close_write();
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    return result;
}

bool in_git_worktree(const std::filesystem::path& root) {
    try {
        auto r = run_process({"git", "-C", root.string(), "rev-parse", "--is-inside-work-tree"});
        return r.exit_code == 0 && trim(r.out) == "true";
    } catch (const Error&) {
        return false;
    }
}

std::vector<std::string> git_lines(const std::filesystem::path& root, const std::vector<std::string>& args) {
    std::vector<std::string> argv = {"git", "-C", root.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    ProcessResult r;
    try {
        r = run_process(argv);
    } catch (const Error& e) {
        throw ScopeError(e.what());
    }
    if (r.exit_code != 0) throw ScopeError("git " + join(args, " ") + ": " + std::string(trim(r.err)));
    std::vector<std::string> lines;
    for (auto& line : split(r.out, '\n')) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace contextcov
