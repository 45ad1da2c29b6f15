#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epi/domain.hpp"
#include "epi/kripke.hpp"

namespace epi {

struct PlanningProblem {
    const Domain* domain = nullptr;
    PointedState initial;
    FormulaPtr goal;

    /// Initial state from the domain's initial spec, goal from its goal
    /// statement. Throws DomainError when the domain has no goal.
    static PlanningProblem from_domain(const Domain& d);
};

using Plan = std::vector<std::string>;

struct SearchStats {
    std::size_t nodes_expanded = 0;
    std::size_t nodes_generated = 0;
    std::size_t duplicates_pruned = 0;
    std::size_t max_depth_reached = 0;
    double elapsed_ms = 0.0;
};

struct SearchResult {
    std::optional<Plan> plan;
    /// Meaningful without a plan: true when the bound stopped the search,
    /// false when the reachable space was exhausted.
    bool depth_exhausted = false;
    SearchStats stats;

    bool solved() const { return plan.has_value(); }
};

/// Scores a state; 0 whenever the state entails the goal. Must be a pure
/// function of the (canonical state, goal) pair.
class Heuristic {
public:
    virtual ~Heuristic() = default;
    virtual double estimate(const PointedState& s, const FormulaPtr& goal) const = 0;
};

class ZeroHeuristic final : public Heuristic {
public:
    double estimate(const PointedState&, const FormulaPtr&) const override { return 0.0; }
};

/// Number of top-level NNF conjuncts of the goal the state does not entail.
std::size_t goal_count_heuristic(const PointedState& s, const FormulaPtr& goal);

class GoalCountHeuristic final : public Heuristic {
public:
    double estimate(const PointedState& s, const FormulaPtr& goal) const override
    {
        return static_cast<double>(goal_count_heuristic(s, goal));
    }
};

struct SearchOptions {
    /// Visited-set pruning on canonical keys. Off only for cross-checks.
    bool prune_duplicates = true;
    /// Serial is the determinism baseline; Parallel expands each frontier
    /// layer with OpenMP and merges children in serial order, so both
    /// return identical plans and counters.
    Exec exec = Exec::Serial;
};

/// Breadth-first search for a shortest plan of at most `max_depth` actions.
/// Actions are tried in declaration order.
SearchResult plan_bfs(const PlanningProblem& problem, std::size_t max_depth, const SearchOptions& options = {});

/// Greedy best-first search on the heuristic score, ties broken by
/// insertion order. The plan is replayed before being returned.
SearchResult plan_best_first(const PlanningProblem& problem, const Heuristic& heuristic, std::size_t max_nodes,
                             const SearchOptions& options = {});

struct PlanCheck {
    bool valid = false;
    /// Hex canonical keys of the initial state and every state reached.
    std::vector<std::string> trace;
    /// Why the plan failed; empty when valid.
    std::string failure;
};

/// Replays the plan. Throws std::invalid_argument on an unknown action name.
PlanCheck validate_plan(const PlanningProblem& problem, const Plan& plan);

} // namespace epi
