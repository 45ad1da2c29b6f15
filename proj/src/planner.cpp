#include "epi/planner.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace epi {

PlanningProblem PlanningProblem::from_domain(const Domain& d)
{
    if (!d.goal) {
        throw DomainError("domain declares no goal");
    }
    return PlanningProblem{&d, build_initial(d.initial, d.sig), d.goal};
}

std::size_t goal_count_heuristic(const PointedState& s, const FormulaPtr& goal)
{
    std::size_t missing = 0;
    for (const auto& c : conjuncts(to_nnf(goal))) {
        if (!entails(s, *c)) {
            ++missing;
        }
    }
    return missing;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Node {
    PointedState state;
    std::size_t parent;
    std::size_t action;
    std::size_t depth;
};

constexpr std::size_t no_parent = ~std::size_t{0};

struct Child {
    PointedState state;
    std::string key;
    bool goal = false;
};

/// Successors of every (parent, action) pair, flattened parent-major.
/// Slots for inexecutable actions stay empty.
std::vector<std::optional<Child>> expand(const std::vector<const PointedState*>& parents, const Domain& domain,
                                         const FormulaPtr& goal, bool want_keys, Exec exec)
{
    const std::size_t actions = domain.actions.size();
    const std::size_t total = parents.size() * actions;
    std::vector<std::optional<Child>> out(total);

    auto work = [&](std::size_t slot) {
        const PointedState& s = *parents[slot / actions];
        const Action& a = domain.actions[slot % actions];
        if (!executable(s, a)) {
            return;
        }
        Child c;
        c.state = apply(s, a, domain.sig);
        if (want_keys) {
            c.key = canonical_key(c.state);
        }
        c.goal = entails(c.state, *goal);
        out[slot] = std::move(c);
    };

    if (exec == Exec::Serial) {
        for (std::size_t slot = 0; slot < total; ++slot) {
            work(slot);
        }
        return out;
    }

    std::vector<std::exception_ptr> errors(total);
    const long long n = static_cast<long long>(total);
#pragma omp parallel for schedule(dynamic)
    for (long long slot = 0; slot < n; ++slot) {
        try {
            work(static_cast<std::size_t>(slot));
        } catch (...) {
            errors[slot] = std::current_exception();
        }
    }
    // Report the error the serial loop would have hit first.
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

Plan extract(const std::vector<Node>& nodes, std::size_t leaf, const Domain& domain)
{
    Plan plan;
    for (std::size_t n = leaf; nodes[n].parent != no_parent; n = nodes[n].parent) {
        plan.push_back(domain.actions[nodes[n].action].name);
    }
    std::reverse(plan.begin(), plan.end());
    return plan;
}

void require_problem(const PlanningProblem& p)
{
    if (!p.domain || !p.goal) {
        throw std::invalid_argument("planning problem needs a domain and a goal");
    }
}

} // namespace

SearchResult plan_bfs(const PlanningProblem& problem, std::size_t max_depth, const SearchOptions& options)
{
    require_problem(problem);
    const auto start = Clock::now();
    const Domain& domain = *problem.domain;
    SearchResult result;

    std::vector<Node> nodes;
    nodes.push_back({normalize(problem.initial), no_parent, 0, 0});
    if (entails(nodes[0].state, *problem.goal)) {
        result.plan = Plan{};
        result.stats.elapsed_ms = since(start);
        return result;
    }

    std::unordered_set<std::string> visited;
    if (options.prune_duplicates) {
        visited.insert(canonical_key(nodes[0].state));
    }
    std::vector<std::size_t> frontier{0};
    std::size_t depth = 0;

    while (!frontier.empty()) {
        if (depth == max_depth) {
            result.depth_exhausted = true;
            break;
        }
        std::vector<const PointedState*> parents;
        parents.reserve(frontier.size());
        for (std::size_t n : frontier) {
            parents.push_back(&nodes[n].state);
        }
        auto children = expand(parents, domain, problem.goal, options.prune_duplicates, options.exec);
        result.stats.nodes_expanded += frontier.size();
        ++depth;
        result.stats.max_depth_reached = depth;

        const std::size_t actions = domain.actions.size();
        std::vector<std::size_t> next;
        for (std::size_t slot = 0; slot < children.size(); ++slot) {
            auto& child = children[slot];
            if (!child) {
                continue;
            }
            ++result.stats.nodes_generated;
            if (options.prune_duplicates && !visited.insert(child->key).second) {
                ++result.stats.duplicates_pruned;
                continue;
            }
            nodes.push_back({std::move(child->state), frontier[slot / actions], slot % actions, depth});
            if (child->goal) {
                result.plan = extract(nodes, nodes.size() - 1, domain);
                result.stats.elapsed_ms = since(start);
                return result;
            }
            next.push_back(nodes.size() - 1);
        }
        frontier = std::move(next);
    }
    result.stats.elapsed_ms = since(start);
    return result;
}

SearchResult plan_best_first(const PlanningProblem& problem, const Heuristic& heuristic, std::size_t max_nodes,
                             const SearchOptions& options)
{
    require_problem(problem);
    const auto start = Clock::now();
    const Domain& domain = *problem.domain;
    SearchResult result;
    if (max_nodes == 0) {
        result.depth_exhausted = true;
        result.stats.elapsed_ms = since(start);
        return result;
    }

    struct Entry {
        double score;
        std::size_t seq;
        std::size_t node;
        bool operator>(const Entry& o) const { return std::tie(score, seq) > std::tie(o.score, o.seq); }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::vector<Node> nodes;
    std::vector<bool> is_goal;
    std::unordered_set<std::string> visited;
    std::size_t seq = 0;

    nodes.push_back({normalize(problem.initial), no_parent, 0, 0});
    is_goal.push_back(entails(nodes[0].state, *problem.goal));
    if (options.prune_duplicates) {
        visited.insert(canonical_key(nodes[0].state));
    }
    open.push({heuristic.estimate(nodes[0].state, problem.goal), seq++, 0});

    while (!open.empty()) {
        const std::size_t current = open.top().node;
        open.pop();
        if (is_goal[current]) {
            result.plan = extract(nodes, current, domain);
            break;
        }
        if (result.stats.nodes_expanded == max_nodes) {
            result.depth_exhausted = true;
            break;
        }
        ++result.stats.nodes_expanded;
        result.stats.max_depth_reached = std::max(result.stats.max_depth_reached, nodes[current].depth);

        auto children = expand({&nodes[current].state}, domain, problem.goal, options.prune_duplicates, options.exec);
        for (std::size_t a = 0; a < children.size(); ++a) {
            auto& child = children[a];
            if (!child) {
                continue;
            }
            ++result.stats.nodes_generated;
            if (options.prune_duplicates && !visited.insert(child->key).second) {
                ++result.stats.duplicates_pruned;
                continue;
            }
            double h = heuristic.estimate(child->state, problem.goal);
            nodes.push_back({std::move(child->state), current, a, nodes[current].depth + 1});
            is_goal.push_back(child->goal);
            open.push({h, seq++, nodes.size() - 1});
        }
    }

    if (result.plan) {
        auto check = validate_plan(problem, *result.plan);
        if (!check.valid) {
            throw std::logic_error("best-first search produced an invalid plan: " + check.failure);
        }
    }
    result.stats.elapsed_ms = since(start);
    return result;
}

PlanCheck validate_plan(const PlanningProblem& problem, const Plan& plan)
{
    require_problem(problem);
    const Domain& domain = *problem.domain;
    PlanCheck check;
    PointedState state = normalize(problem.initial);
    check.trace.push_back(to_hex(canonical_key(state)));
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const Action* a = domain.find_action(plan[i]);
        if (!a) {
            throw std::invalid_argument("unknown action '" + plan[i] + "'");
        }
        if (!executable(state, *a)) {
            check.failure = "step " + std::to_string(i + 1) + ": '" + a->name + "' is not executable";
            return check;
        }
        try {
            state = apply(state, *a, domain.sig);
        } catch (const TransitionError& e) {
            check.failure = "step " + std::to_string(i + 1) + ": " + e.what();
            return check;
        }
        check.trace.push_back(to_hex(canonical_key(state)));
    }
    if (!entails(state, *problem.goal)) {
        check.failure = "final state does not entail the goal";
        return check;
    }
    check.valid = true;
    return check;
}

} // namespace epi
