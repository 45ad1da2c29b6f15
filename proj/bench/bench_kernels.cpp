// Times the serial reference kernels against their OpenMP versions:
// partition refinement on large random structures and layered BFS on the
// bundled benchmark domains. Both variants must agree; the run aborts if
// they do not.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <omp.h>
#include <random>
#include <sstream>

#include "epi/domain.hpp"
#include "epi/planner.hpp"

using namespace epi;

namespace {

template <class F>
double best_of(int reps, F&& body)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        body();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

KripkeStructure random_structure(std::mt19937_64& rng, std::size_t worlds, std::size_t agents, std::size_t degree)
{
    std::vector<Valuation> vals(worlds);
    for (auto& v : vals) {
        v = rng() & 0xF;
    }
    KripkeStructure m(agents, vals);
    std::uniform_int_distribution<WorldId> pick(0, static_cast<WorldId>(worlds - 1));
    for (AgentIndex a = 0; a < agents; ++a) {
        for (WorldId w = 0; w < worlds; ++w) {
            for (std::size_t k = 0; k < degree; ++k) {
                m.add_edge(a, w, pick(rng));
            }
        }
    }
    return m;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main()
{
    std::printf("threads: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial_ms", "parallel_ms", "speedup");

    std::mt19937_64 rng(7);
    for (std::size_t worlds : {2000u, 20000u, 100000u}) {
        auto m = random_structure(rng, worlds, 3, 3);
        std::vector<std::uint32_t> serial, parallel;
        double ts = best_of(3, [&] { serial = bisimulation_colors(m, Exec::Serial); });
        double tp = best_of(3, [&] { parallel = bisimulation_colors(m, Exec::Parallel); });
        if (serial != parallel) {
            std::fprintf(stderr, "refinement mismatch at %zu worlds\n", worlds);
            return 1;
        }
        char label[64];
        std::snprintf(label, sizeof label, "refine/%zu", worlds);
        std::printf("%-28s %12.2f %12.2f %8.2f\n", label, ts, tp, ts / tp);
    }

    auto manifest = nlohmann::json::parse(slurp(std::string(EPI_BENCHMARK_DIR) + "/manifest.json"));
    for (const auto& entry : manifest["benchmarks"]) {
        auto domain = parse_domain(slurp(std::string(EPI_BENCHMARK_DIR) + "/" + entry["file"].get<std::string>()));
        auto problem = PlanningProblem::from_domain(domain);
        SearchResult serial, parallel;
        SearchOptions so, po;
        po.exec = Exec::Parallel;
        double ts = best_of(3, [&] { serial = plan_bfs(problem, 8, so); });
        double tp = best_of(3, [&] { parallel = plan_bfs(problem, 8, po); });
        if (serial.plan != parallel.plan || serial.stats.nodes_expanded != parallel.stats.nodes_expanded) {
            std::fprintf(stderr, "bfs mismatch on %s\n", entry["name"].get<std::string>().c_str());
            return 1;
        }
        std::string label = "bfs/" + entry["name"].get<std::string>();
        std::printf("%-28s %12.2f %12.2f %8.2f\n", label.c_str(), ts, tp, ts / tp);
    }
    return 0;
}
