#include "contextcov/arch.hpp"
#include "contextcov/glob.hpp"
#include "contextcov/linter.hpp"
#include "contextcov/markdown.hpp"
#include "contextcov/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

using namespace contextcov;
namespace fs = std::filesystem;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(fs::path(CONTEXTCOV_FIXTURE_DIR) / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The sample instructions repeated n times under distinct top-level headings.
std::string big_document(int n) {
    const std::string fig = read_fixture("sample_agents.md");
    std::string out;
    for (int i = 0; i < n; ++i) out += "# Part " + std::to_string(i) + "\n" + fig + "\n";
    return out;
}

void BM_parse_and_slice(benchmark::State& state) {
    const std::string doc = big_document(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto tree = parse_document("AGENTS.md", doc);
        benchmark::DoNotOptimize(enumerate_slices(tree));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_parse_and_slice)->Arg(1)->Arg(16)->Arg(128);

void BM_generate_fig1(benchmark::State& state) {
    const std::string doc = read_fixture("sample_agents.md");
    for (auto _ : state) benchmark::DoNotOptimize(generate_store({{"AGENTS.md", doc}}, {}, {}));
}
BENCHMARK(BM_generate_fig1);

class LintFixture : public benchmark::Fixture {
public:
    void SetUp(const benchmark::State& state) override {
        std::string templ = (fs::temp_directory_path() / "contextcov-bench-XXXXXX").string();
        root = ::mkdtemp(templ.data());
        store = generate_store({{"AGENTS.md", read_fixture("sample_agents.md")}}, {}, {}).store;
        for (int i = 0; i < state.range(0); ++i) {
            const std::string rel = "src/f" + std::to_string(i) + ".ts";
            fs::create_directories(root / "src");
            std::ofstream out(root / rel);
            for (int k = 0; k < 50; ++k)
                out << "export const f" << k << " = (x) => x + " << k << ";\nconst g" << k
                    << " = y => fetch(y).then(r => r.json());\n";
            files.push_back(rel);
        }
    }
    void TearDown(const benchmark::State&) override {
        fs::remove_all(root);
        files.clear();
    }
    fs::path root;
    CheckStore store;
    std::vector<std::string> files;
};

BENCHMARK_DEFINE_F(LintFixture, lint)(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lint_files(root, store, files));
}
BENCHMARK_REGISTER_F(LintFixture, lint)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_cycle_check(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937 rng(7);
    DependencyGraph g;
    auto name = [](int i) { return "m" + std::to_string(i) + ".py"; };
    for (int i = 0; i < n; ++i) g.nodes.insert(name(i));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 3; ++k) {
            const int j = static_cast<int>(rng() % static_cast<unsigned>(n));
            if (j != i) g.edges.push_back({name(i), name(j), "import m", 1});
        }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const auto& a, const auto& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                              [](const auto& a, const auto& b) { return a.from == b.from && a.to == b.to; }),
                  g.edges.end());
    const auto adj = g.adjacency();
    for (auto _ : state) benchmark::DoNotOptimize(strongly_connected_components(g.nodes, adj));
    state.SetComplexityN(n);
}
BENCHMARK(BM_cycle_check)->RangeMultiplier(8)->Range(64, 32768)->Complexity();

void BM_argv_match(benchmark::State& state) {
    const std::vector<std::string> pattern{"run", "*", "--watch", "**"};
    const std::vector<std::string> argv{"run", "compile", "--watch", "--verbose", "src"};
    for (auto _ : state) benchmark::DoNotOptimize(argv_matches(pattern, argv));
}
BENCHMARK(BM_argv_match);

} // namespace

BENCHMARK_MAIN();
