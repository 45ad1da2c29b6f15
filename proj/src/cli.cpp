#include "epi/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "epi/domain.hpp"
#include "epi/parse.hpp"
#include "epi/planner.hpp"

namespace epi::cli {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ordered_json stats_json(const SearchStats& s, bool timing)
{
    ordered_json j;
    j["nodes_expanded"] = s.nodes_expanded;
    j["nodes_generated"] = s.nodes_generated;
    j["duplicates_pruned"] = s.duplicates_pruned;
    j["max_depth_reached"] = s.max_depth_reached;
    j["elapsed_ms"] = timing ? ordered_json(s.elapsed_ms) : ordered_json(nullptr);
    return j;
}

int run_plan(const RunConfig& cfg, const Domain& domain, std::ostream& out)
{
    auto problem = PlanningProblem::from_domain(domain);
    SearchOptions options;
    options.prune_duplicates = cfg.prune_duplicates;
    options.exec = cfg.parallel ? Exec::Parallel : Exec::Serial;

    SearchResult result;
    if (cfg.search == Search::Bfs) {
        result = plan_bfs(problem, cfg.max_depth, options);
    } else if (cfg.heuristic == HeuristicKind::GoalCount) {
        result = plan_best_first(problem, GoalCountHeuristic{}, cfg.max_nodes, options);
    } else {
        result = plan_best_first(problem, ZeroHeuristic{}, cfg.max_nodes, options);
    }

    if (cfg.output == Output::Json) {
        ordered_json j;
        j["solved"] = result.solved();
        j["plan"] = result.plan ? ordered_json(*result.plan) : ordered_json(nullptr);
        if (!result.solved()) {
            j["depth_exhausted"] = result.depth_exhausted;
        }
        j["stats"] = stats_json(result.stats, cfg.timing);
        out << j.dump(2) << "\n";
    } else {
        if (result.plan) {
            for (const auto& step : *result.plan) {
                out << step << "\n";
            }
        } else {
            out << "NO PLAN" << (result.depth_exhausted ? " (bound reached)" : " (search space exhausted)") << "\n";
        }
        const auto& s = result.stats;
        out << "--\n"
            << "nodes_expanded: " << s.nodes_expanded << "\n"
            << "nodes_generated: " << s.nodes_generated << "\n"
            << "duplicates_pruned: " << s.duplicates_pruned << "\n"
            << "max_depth_reached: " << s.max_depth_reached << "\n";
        if (cfg.timing) {
            out << "elapsed_ms: " << s.elapsed_ms << "\n";
        }
    }
    return result.solved() ? exit_success : exit_negative;
}

int run_check(const RunConfig& cfg, const Domain& domain, std::ostream& out)
{
    auto query = parse_formula(*cfg.query, domain.sig);
    bool verdict = entails(build_initial(domain.initial, domain.sig), *query);
    if (cfg.output == Output::Json) {
        ordered_json j;
        j["query"] = to_string(*query, domain.sig);
        j["result"] = verdict;
        out << j.dump(2) << "\n";
    } else {
        out << (verdict ? "true" : "false") << "\n";
    }
    return verdict ? exit_success : exit_negative;
}

int run_dump(const RunConfig& cfg, const Domain& domain, std::ostream& out)
{
    auto initial = build_initial(domain.initial, domain.sig);
    auto dot = to_dot(initial, domain.sig);
    if (cfg.dot_path) {
        std::ofstream file(*cfg.dot_path, std::ios::binary);
        if (!file || !(file << dot)) {
            throw std::runtime_error("cannot write '" + *cfg.dot_path + "'");
        }
    }
    if (cfg.output == Output::Json) {
        ordered_json j;
        j["worlds"] = initial.structure.world_count();
        j["dot_path"] = cfg.dot_path ? ordered_json(*cfg.dot_path) : ordered_json(nullptr);
        if (!cfg.dot_path) {
            j["dot"] = dot;
        }
        out << j.dump(2) << "\n";
    } else if (!cfg.dot_path) {
        out << dot;
    }
    return exit_success;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.mode == Mode::Check && !cfg.query) {
        err << "error: check mode requires --query\n";
        return exit_error;
    }
    try {
        ParseOptions options;
        options.allow_large = cfg.allow_large;
        options.warnings = &err;
        Domain domain;
        try {
            domain = parse_domain(read_file(cfg.domain_path), options);
        } catch (const ParseError& e) {
            err << cfg.domain_path << ":" << e.what() << "\n";
            return exit_error;
        }
        switch (cfg.mode) {
        case Mode::Plan:
            return run_plan(cfg, domain, out);
        case Mode::Check:
            return run_check(cfg, domain, out);
        case Mode::Dump:
            return run_dump(cfg, domain, out);
        }
    } catch (const ParseError& e) {
        err << "query:" << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return exit_error;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-agent epistemic planner"};
    RunConfig cfg;
    std::string mode = "plan", search = "bfs", heuristic = "none", output = "text";
    std::string query, dot;

    app.add_option("--domain,domain", cfg.domain_path, "Domain description file")->required();
    app.add_option("--mode", mode, "plan | check | dump")
        ->check(CLI::IsMember({"plan", "check", "dump"}));
    app.add_option("--search", search, "bfs | best-first")->check(CLI::IsMember({"bfs", "best-first"}));
    app.add_option("--heuristic", heuristic, "none | goal-count")->check(CLI::IsMember({"none", "goal-count"}));
    app.add_option("--max-depth", cfg.max_depth, "BFS depth bound");
    app.add_option("--max-nodes", cfg.max_nodes, "Best-first expansion bound");
    auto* query_opt = app.add_option("--query", query, "Belief formula to check against the initial state");
    app.add_option("--output", output, "text | json")->check(CLI::IsMember({"text", "json"}));
    auto* dot_opt = app.add_option("--dot", dot, "Write the initial state as Graphviz DOT to this path");
    app.add_flag("--parallel", cfg.parallel, "Expand search layers in parallel");
    bool no_dedup = false;
    app.add_flag("--no-dedup", no_dedup, "Disable visited-set pruning");
    app.add_flag("--allow-large", cfg.allow_large, "Accept more than 26 fluents");
    app.add_flag("--timing", cfg.timing, "Report wall-clock search time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_error;
    }

    static const std::map<std::string, Mode> modes{{"plan", Mode::Plan}, {"check", Mode::Check}, {"dump", Mode::Dump}};
    cfg.mode = modes.at(mode);
    cfg.search = search == "bfs" ? Search::Bfs : Search::BestFirst;
    cfg.heuristic = heuristic == "goal-count" ? HeuristicKind::GoalCount : HeuristicKind::None;
    cfg.output = output == "json" ? Output::Json : Output::Text;
    cfg.prune_duplicates = !no_dedup;
    if (*query_opt) {
        cfg.query = query;
    }
    if (*dot_opt) {
        cfg.dot_path = dot;
    }
    return run(cfg, out, err);
}

} // namespace epi::cli
