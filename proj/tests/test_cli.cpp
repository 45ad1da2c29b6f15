#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "brute_force.hpp"
#include "epi/cli.hpp"

using namespace epi;
namespace fs = std::filesystem;

namespace {

const std::string bench_dir = EPI_BENCHMARK_DIR;
const std::string coin = bench_dir + "/coin_in_the_box.epddl";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "epiplan");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& content)
{
    auto path = fs::temp_directory_path() / ("epi_cli_" + name);
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("plan mode text output")
{
    auto r = run({coin});
    CHECK(r.code == cli::exit_success);
    CHECK(r.out ==
          "open\npeek\n--\n"
          "nodes_expanded: 3\nnodes_generated: 3\nduplicates_pruned: 0\nmax_depth_reached: 2\n");
    CHECK(r.err.empty());
}

TEST_CASE("plan mode json output validates")
{
    auto r = run({"--domain", coin, "--output", "json"});
    REQUIRE(r.code == cli::exit_success);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["solved"] == true);
    CHECK(j["stats"]["elapsed_ms"].is_null());
    for (const char* key : {"nodes_expanded", "nodes_generated", "duplicates_pruned", "max_depth_reached"}) {
        CHECK(j["stats"][key].is_number_unsigned());
    }
    auto plan = j["plan"].get<Plan>();
    auto d = parse_domain(testing::slurp(coin));
    CHECK(validate_plan(PlanningProblem::from_domain(d), plan).valid);
}

TEST_CASE("timing is opt-in")
{
    auto r = run({coin, "--timing"});
    CHECK(r.out.find("elapsed_ms: ") != std::string::npos);
    auto j = nlohmann::json::parse(run({coin, "--timing", "--output", "json"}).out);
    CHECK(j["stats"]["elapsed_ms"].is_number());
}

TEST_CASE("best-first and flags")
{
    auto r = run({coin, "--search", "best-first", "--heuristic", "goal-count"});
    CHECK(r.code == cli::exit_success);
    CHECK(r.out.rfind("open\npeek\n--\n", 0) == 0);
    CHECK(run({coin, "--parallel"}).out == run({coin}).out);
    CHECK(run({coin, "--no-dedup"}).code == cli::exit_success);
}

TEST_CASE("no plan")
{
    auto r = run({bench_dir + "/selective_communication.epddl", "--max-depth", "2"});
    CHECK(r.code == cli::exit_negative);
    CHECK(r.out.rfind("NO PLAN (bound reached)\n--\n", 0) == 0);
    auto j = nlohmann::json::parse(
        run({bench_dir + "/selective_communication.epddl", "--max-depth", "2", "--output", "json"}).out);
    CHECK(j["solved"] == false);
    CHECK(j["plan"].is_null());
    CHECK(j["depth_exhausted"] == true);

    auto dead = scratch("dead.epddl", "agent a;\nfluent f;\ngoal: f;\n");
    auto r2 = run({dead.string()});
    CHECK(r2.code == cli::exit_negative);
    CHECK(r2.out.rfind("NO PLAN (search space exhausted)\n", 0) == 0);
}

TEST_CASE("trivial goal gives an empty plan")
{
    auto path = scratch("trivial.epddl", "agent a;\nfluent f;\ngoal: true;\n");
    auto r = run({path.string()});
    CHECK(r.code == cli::exit_success);
    CHECK(r.out.rfind("--\nnodes_expanded: 0\n", 0) == 0);
}

TEST_CASE("check mode")
{
    auto r = run({coin, "--mode", "check", "--query", "B(a, heads)"});
    CHECK(r.code == cli::exit_negative);
    CHECK(r.out == "false\n");
    r = run({coin, "--mode", "check", "--query", "C({a,b,c}, !opened)"});
    CHECK(r.code == cli::exit_success);
    CHECK(r.out == "true\n");
    auto j = nlohmann::json::parse(run({coin, "--mode", "check", "--query", "heads", "--output", "json"}).out);
    CHECK(j["query"] == "heads");
    CHECK(j["result"] == true);
    CHECK(run({coin, "--mode", "check"}).code == cli::exit_error);
}

TEST_CASE("dump mode")
{
    auto r = run({coin, "--mode", "dump"});
    CHECK(r.code == cli::exit_success);
    CHECK(r.out.rfind("digraph epistemic_state {\n", 0) == 0);
    CHECK(r.out.find("doublecircle") != std::string::npos);
    CHECK(run({coin, "--mode", "dump"}).out == r.out);

    auto path = fs::temp_directory_path() / "epi_cli_dump.dot";
    fs::remove(path);
    auto r2 = run({coin, "--mode", "dump", "--dot", path.string(), "--output", "json"});
    CHECK(r2.code == cli::exit_success);
    CHECK(testing::slurp(path.string()) == r.out);
    auto j = nlohmann::json::parse(r2.out);
    CHECK(j["worlds"] == 2);
    CHECK(j["dot_path"] == path.string());
}

TEST_CASE("errors exit 2 with a position")
{
    auto bad = scratch("bad.epddl", "agent a;\nfluent f;\ngoal: B(a, g);\n");
    auto r = run({bad.string()});
    CHECK(r.code == cli::exit_error);
    CHECK(r.out.empty());
    CHECK(r.err.find(bad.string() + ":3:12: ") == 0);
    CHECK(r.err.find("'g'") != std::string::npos);

    auto q = run({coin, "--mode", "check", "--query", "B(a,"});
    CHECK(q.code == cli::exit_error);
    CHECK(q.err.find(":1:5:") != std::string::npos);

    CHECK(run({"/nonexistent/file.epddl"}).code == cli::exit_error);
    CHECK(run({coin, "--mode", "teleport"}).code == cli::exit_error);
    CHECK(run({}).code == cli::exit_error);
}

TEST_CASE("repeated runs are byte-identical")
{
    for (const char* name : {"coin_in_the_box.epddl", "selective_communication.epddl", "false_belief.epddl"}) {
        INFO(name);
        auto path = bench_dir + "/" + name;
        CHECK(run({path}).out == run({path}).out);
        CHECK(run({path, "--output", "json"}).out == run({path, "--output", "json"}).out);
    }
}
