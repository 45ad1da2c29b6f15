#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace epi::cli {

enum class Mode { Plan, Check, Dump };
enum class Search { Bfs, BestFirst };
enum class HeuristicKind { None, GoalCount };
enum class Output { Text, Json };

struct RunConfig {
    Mode mode = Mode::Plan;
    std::string domain_path;
    Search search = Search::Bfs;
    HeuristicKind heuristic = HeuristicKind::None;
    std::size_t max_depth = 10;
    std::size_t max_nodes = 100000;
    std::optional<std::string> query;
    Output output = Output::Text;
    std::optional<std::string> dot_path;
    bool parallel = false;
    bool prune_duplicates = true;
    bool allow_large = false;
    /// Wall-clock time varies between runs; it is only printed on request.
    bool timing = false;
};

inline constexpr int exit_success = 0;
inline constexpr int exit_negative = 1;  // no plan, or query false
inline constexpr int exit_error = 2;

/// Executes one configured run. Results go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses command-line flags into a RunConfig and runs it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace epi::cli
