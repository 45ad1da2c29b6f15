#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "epi/planner.hpp"

namespace epi::testing {

/// Tries every action sequence of length 0..limit with no state merging and
/// returns the shortest length that reaches the goal.
inline std::optional<std::size_t> shortest_by_enumeration(const PlanningProblem& p, std::size_t limit)
{
    std::vector<PointedState> layer{p.initial};
    for (std::size_t len = 0; len <= limit; ++len) {
        for (const auto& s : layer) {
            if (entails(s, *p.goal)) {
                return len;
            }
        }
        if (len == limit) {
            break;
        }
        std::vector<PointedState> next;
        for (const auto& s : layer) {
            for (const auto& act : p.domain->actions) {
                if (executable(s, act)) {
                    next.push_back(apply(s, act, p.domain->sig));
                }
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace epi::testing
