#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epi/formula.hpp"

namespace epi {

using WorldId = std::uint32_t;

/// Bit f set iff fluent f is true. Caps a domain at 64 fluents.
using Valuation = std::uint64_t;

inline constexpr std::size_t max_fluents = 64;

inline bool holds(Valuation v, FluentIndex f)
{
    return (v >> f) & 1U;
}

/// Selects the serial reference or the OpenMP kernel where both exist.
enum class Exec { Serial, Parallel };

/// Worlds with their interpretations plus one accessibility relation per
/// agent, stored as sorted successor lists.
class KripkeStructure {
public:
    KripkeStructure() = default;
    KripkeStructure(std::size_t agent_count, std::vector<Valuation> worlds);

    std::size_t world_count() const { return worlds_.size(); }
    std::size_t agent_count() const { return edges_.size(); }

    Valuation valuation(WorldId w) const { return worlds_[w]; }
    const std::vector<Valuation>& valuations() const { return worlds_; }

    const std::vector<WorldId>& successors(AgentIndex a, WorldId w) const { return edges_[a][w]; }
    bool has_edge(AgentIndex a, WorldId from, WorldId to) const;

    WorldId add_world(Valuation v);
    /// Idempotent. Throws std::out_of_range on a bad world or agent.
    void add_edge(AgentIndex a, WorldId from, WorldId to);
    /// Adds every pair in worlds x worlds for agent `a`.
    void connect_all(AgentIndex a);

    std::size_t edge_count() const;

    friend bool operator==(const KripkeStructure&, const KripkeStructure&) = default;

private:
    std::vector<Valuation> worlds_;
    std::vector<std::vector<std::vector<WorldId>>> edges_;  // [agent][world] -> sorted successors
};

struct PointedState {
    KripkeStructure structure;
    WorldId designated = 0;

    friend bool operator==(const PointedState&, const PointedState&) = default;
};

/// Throws std::invalid_argument when the designated world is out of range
/// or a valuation sets a bit outside `fluent_count`.
void validate(const PointedState& s, std::size_t fluent_count);

/// Propositional evaluation. Throws std::invalid_argument on a modal node.
bool eval_fluent(Valuation v, const Formula& f);

/// Truth of `f` at every world of `m`, indexed by WorldId. C uses the
/// non-empty-path reachability reading.
std::vector<bool> truth_set(const KripkeStructure& m, const Formula& f);

/// Throws std::out_of_range when `f` names an agent the structure lacks.
bool entails(const PointedState& s, const Formula& f);

struct AgentFrame {
    bool reflexive = false;
    bool transitive = false;
    bool euclidean = false;
    bool serial = false;

    bool kd45() const { return serial && transitive && euclidean; }
    bool s5() const { return kd45() && reflexive; }
};

struct FrameReport {
    std::vector<AgentFrame> agents;
    bool is_kd45 = false;
    bool is_s5 = false;
};

FrameReport check_frame(const KripkeStructure& m);

/// Keeps the worlds reachable from the designated world along any agent's
/// edges, re-indexed in breadth-first order.
PointedState prune_unreachable(const PointedState& s);

/// Coarsest labeled bisimulation as canonical colors: two worlds share a
/// color iff they are bisimilar. Colors are ranks of sorted signatures, so
/// they do not depend on world numbering.
std::vector<std::uint32_t> bisimulation_colors(const KripkeStructure& m, Exec exec = Exec::Serial);

/// Quotient of the pruned state by its coarsest bisimulation. The result is
/// the smallest pointed structure bisimilar to the input.
PointedState bisim_contract(const PointedState& s, Exec exec = Exec::Serial);

/// Prune then contract; the representative form used for planning states.
PointedState normalize(const PointedState& s, Exec exec = Exec::Serial);

/// Canonical world order of a structure: breadth-first from the designated
/// world, successors visited by agent then bisimulation color. Worlds not
/// reachable follow in color order.
std::vector<WorldId> canonical_order(const PointedState& s);

/// Byte key equal for two states iff they are bisimilar.
std::string canonical_key(const PointedState& s, Exec exec = Exec::Serial);

/// Throws std::invalid_argument when the states have different agent counts.
bool states_equal(const PointedState& a, const PointedState& b);

/// Lowercase hex of `bytes`; used to print keys.
std::string to_hex(const std::string& bytes);

/// Graphviz rendering. Nodes follow canonical_order; the designated world
/// is a doublecircle and each edge carries its agent's name.
std::string to_dot(const PointedState& s, const Signature& sig);

} // namespace epi
