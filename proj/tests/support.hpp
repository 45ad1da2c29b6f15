#pragma once

// Random generators and reference evaluators shared by the unit and
// acceptance suites. The oracle here evaluates formulas by direct set
// iteration and never calls into entails/truth_set.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "epi/formula.hpp"
#include "epi/kripke.hpp"

namespace epi::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5)
{
    return std::bernoulli_distribution(p)(rng);
}

inline Signature make_signature(std::size_t agents, std::size_t fluents)
{
    static const char* agent_names[] = {"a", "b", "c", "d", "e", "f"};
    static const char* fluent_names[] = {"p", "q", "r", "s", "t", "u", "v", "w", "x", "y"};
    Signature sig;
    for (std::size_t i = 0; i < agents; ++i) {
        sig.add_agent(agent_names[i]);
    }
    for (std::size_t i = 0; i < fluents; ++i) {
        sig.add_fluent(fluent_names[i]);
    }
    return sig;
}

inline Valuation random_valuation(Rng& rng, std::size_t fluents)
{
    return fluents == 0 ? 0 : rng() & ((Valuation{1} << fluents) - 1);
}

/// Arbitrary relations: each pair present with probability `density`.
inline KripkeStructure random_structure(Rng& rng, std::size_t worlds, std::size_t agents, std::size_t fluents,
                                        double density = 0.35)
{
    std::vector<Valuation> vals(worlds);
    for (auto& v : vals) {
        v = random_valuation(rng, fluents);
    }
    KripkeStructure m(agents, vals);
    for (AgentIndex a = 0; a < agents; ++a) {
        for (WorldId u = 0; u < worlds; ++u) {
            for (WorldId v = 0; v < worlds; ++v) {
                if (coin(rng, density)) {
                    m.add_edge(a, u, v);
                }
            }
        }
    }
    return m;
}

inline PointedState random_state(Rng& rng, std::size_t worlds, std::size_t agents, std::size_t fluents,
                                 double density = 0.35)
{
    auto m = random_structure(rng, worlds, agents, fluents, density);
    auto d = static_cast<WorldId>(uniform(rng, 0, worlds - 1));
    return PointedState{std::move(m), d};
}

/// Adds a random serial, transitive, euclidean relation for agent `a`:
/// disjoint non-empty belief cells, every world pointing at one cell, and
/// every world inside a cell pointing at that same cell. With `reflexive`
/// every world is in its own cell, which gives an equivalence relation.
inline void add_kd45_relation(Rng& rng, KripkeStructure& m, AgentIndex a, bool reflexive)
{
    const std::size_t n = m.world_count();
    std::vector<std::size_t> cell_of(n);
    std::size_t cells = uniform(rng, 1, n);
    if (reflexive) {
        // Every world is a member of some cell: a random partition.
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t k = 0; k < n; ++k) {
            cell_of[perm[k]] = k < cells ? k : uniform(rng, 0, cells - 1);
        }
        for (WorldId u = 0; u < n; ++u) {
            for (WorldId v = 0; v < n; ++v) {
                if (cell_of[u] == cell_of[v]) {
                    m.add_edge(a, u, v);
                }
            }
        }
        return;
    }
    // Cell members: a random non-empty subset per cell, disjoint. Worlds
    // outside every cell point at a random cell.
    constexpr std::size_t outside = ~std::size_t{0};
    std::vector<std::size_t> member(n, outside);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < cells; ++k) {
        member[perm[k]] = k;
    }
    for (std::size_t k = cells; k < n; ++k) {
        if (coin(rng, 0.4)) {
            member[perm[k]] = uniform(rng, 0, cells - 1);
        }
    }
    for (WorldId u = 0; u < n; ++u) {
        cell_of[u] = member[u] != outside ? member[u] : uniform(rng, 0, cells - 1);
    }
    for (WorldId u = 0; u < n; ++u) {
        for (WorldId v = 0; v < n; ++v) {
            if (member[v] == cell_of[u]) {
                m.add_edge(a, u, v);
            }
        }
    }
}

inline PointedState random_kd45_state(Rng& rng, std::size_t worlds, std::size_t agents, std::size_t fluents,
                                      bool reflexive)
{
    std::vector<Valuation> vals(worlds);
    for (auto& v : vals) {
        v = random_valuation(rng, fluents);
    }
    KripkeStructure m(agents, vals);
    for (AgentIndex a = 0; a < agents; ++a) {
        add_kd45_relation(rng, m, a, reflexive);
    }
    return PointedState{std::move(m), static_cast<WorldId>(uniform(rng, 0, worlds - 1))};
}

inline AgentSet random_group(Rng& rng, std::size_t agents)
{
    AgentSet g;
    while (g.empty()) {
        for (AgentIndex a = 0; a < agents; ++a) {
            if (coin(rng)) {
                g.push_back(a);
            }
        }
    }
    return g;
}

inline FormulaPtr random_propositional(Rng& rng, std::size_t fluents, std::size_t size)
{
    if (size <= 1 || coin(rng, 0.3)) {
        switch (uniform(rng, 0, 9)) {
        case 0:
            return Formula::top();
        case 1:
            return Formula::bot();
        default:
            return Formula::atom(static_cast<FluentIndex>(uniform(rng, 0, fluents - 1)));
        }
    }
    switch (uniform(rng, 0, 3)) {
    case 0:
        return Formula::negate(random_propositional(rng, fluents, size - 1));
    case 1:
        return Formula::conj(random_propositional(rng, fluents, size / 2), random_propositional(rng, fluents, size / 2));
    case 2:
        return Formula::disj(random_propositional(rng, fluents, size / 2), random_propositional(rng, fluents, size / 2));
    default:
        return Formula::implies(random_propositional(rng, fluents, size / 2),
                                random_propositional(rng, fluents, size / 2));
    }
}

/// Random belief formula with modal depth at most `depth` and roughly
/// `size` nodes. C nodes appear only when `with_common`.
inline FormulaPtr random_formula(Rng& rng, std::size_t agents, std::size_t fluents, std::size_t depth,
                                 bool with_common = true, std::size_t size = 6)
{
    if (size <= 1) {
        return random_propositional(rng, fluents, 1);
    }
    std::size_t choice = uniform(rng, 0, depth > 0 ? 7 : 3);
    switch (choice) {
    case 0:
        return random_propositional(rng, fluents, 2);
    case 1:
        return Formula::negate(random_formula(rng, agents, fluents, depth, with_common, size - 1));
    case 2: {
        auto l = random_formula(rng, agents, fluents, depth, with_common, size / 2);
        auto r = random_formula(rng, agents, fluents, depth, with_common, size / 2);
        return coin(rng) ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case 3:
        return Formula::implies(random_formula(rng, agents, fluents, depth, with_common, size / 2),
                                random_formula(rng, agents, fluents, depth, with_common, size / 2));
    case 4:
    case 5:
        return Formula::believes(static_cast<AgentIndex>(uniform(rng, 0, agents - 1)),
                                 random_formula(rng, agents, fluents, depth - 1, with_common, size - 1));
    case 6:
        return Formula::everyone(random_group(rng, agents),
                                 random_formula(rng, agents, fluents, depth - 1, with_common, size - 1));
    default:
        if (!with_common) {
            return Formula::believes(static_cast<AgentIndex>(uniform(rng, 0, agents - 1)),
                                     random_formula(rng, agents, fluents, depth - 1, with_common, size - 1));
        }
        return Formula::common(random_group(rng, agents),
                               random_formula(rng, agents, fluents, depth - 1, with_common, size - 1));
    }
}

/// Reference semantics: truth sets by direct quantification. C is the
/// conjunction of E^k for k = 1, 2, ..., iterated until the accumulated
/// set of violating worlds stops growing (bounded by the world count).
inline std::vector<bool> oracle_truth(const KripkeStructure& m, const Formula& f)
{
    const std::size_t n = m.world_count();
    auto everyone = [&](const AgentSet& group, const std::vector<bool>& sub) {
        std::vector<bool> out(n, true);
        for (WorldId w = 0; w < n; ++w) {
            for (AgentIndex a : group) {
                for (WorldId v = 0; v < n; ++v) {
                    if (m.has_edge(a, w, v) && !sub[v]) {
                        out[w] = false;
                    }
                }
            }
        }
        return out;
    };
    std::vector<bool> out(n);
    switch (f.op()) {
    case Op::Atom:
        for (WorldId w = 0; w < n; ++w) {
            out[w] = (m.valuation(w) >> f.fluent()) & 1U;
        }
        return out;
    case Op::Top:
        return std::vector<bool>(n, true);
    case Op::Bot:
        return std::vector<bool>(n, false);
    case Op::Not: {
        auto s = oracle_truth(m, *f.sub());
        for (WorldId w = 0; w < n; ++w) {
            out[w] = !s[w];
        }
        return out;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
        auto l = oracle_truth(m, *f.lhs());
        auto r = oracle_truth(m, *f.rhs());
        for (WorldId w = 0; w < n; ++w) {
            out[w] = f.op() == Op::And ? (l[w] && r[w]) : f.op() == Op::Or ? (l[w] || r[w]) : (!l[w] || r[w]);
        }
        return out;
    }
    case Op::B:
        return everyone(AgentSet{f.agent()}, oracle_truth(m, *f.sub()));
    case Op::E:
        return everyone(f.group(), oracle_truth(m, *f.sub()));
    case Op::C: {
        auto level = oracle_truth(m, *f.sub());  // E^0
        std::vector<bool> violated(n, false);
        for (std::size_t k = 1; k <= n + 1; ++k) {
            level = everyone(f.group(), level);  // E^k
            bool grew = false;
            for (WorldId w = 0; w < n; ++w) {
                if (!level[w] && !violated[w]) {
                    violated[w] = true;
                    grew = true;
                }
            }
            if (!grew) {
                break;
            }
        }
        for (WorldId w = 0; w < n; ++w) {
            out[w] = !violated[w];
        }
        return out;
    }
    }
    return out;
}

inline bool oracle_entails(const PointedState& s, const Formula& f)
{
    return oracle_truth(s.structure, f)[s.designated];
}

/// Same state with worlds renumbered by a random permutation.
inline PointedState permute(Rng& rng, const PointedState& s)
{
    const auto& m = s.structure;
    std::vector<WorldId> perm(m.world_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Valuation> vals(m.world_count());
    for (WorldId w = 0; w < m.world_count(); ++w) {
        vals[perm[w]] = m.valuation(w);
    }
    KripkeStructure out(m.agent_count(), vals);
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        for (WorldId w = 0; w < m.world_count(); ++w) {
            for (WorldId v : m.successors(a, w)) {
                out.add_edge(a, perm[w], perm[v]);
            }
        }
    }
    return PointedState{std::move(out), perm[s.designated]};
}

/// Doubles every world: each copy points at both copies of its successors.
/// The result is bisimilar to the input.
inline PointedState duplicate_worlds(const PointedState& s)
{
    const auto& m = s.structure;
    const auto n = static_cast<WorldId>(m.world_count());
    std::vector<Valuation> vals = m.valuations();
    vals.insert(vals.end(), m.valuations().begin(), m.valuations().end());
    KripkeStructure out(m.agent_count(), vals);
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        for (WorldId w = 0; w < n; ++w) {
            for (WorldId v : m.successors(a, w)) {
                out.add_edge(a, w, v);
                out.add_edge(a, w, v + n);
                out.add_edge(a, w + n, v);
                out.add_edge(a, w + n, v + n);
            }
        }
    }
    return PointedState{std::move(out), s.designated + n};
}

} // namespace epi::testing

#include "epi/actions.hpp"

namespace epi::testing {

/// Action of the given kind whose observers have the fixed classes in
/// `classes` (condition true). Ontic effects are random literals with
/// random propositional conditions; no two effects touch the same fluent.
inline Action random_action(Rng& rng, ActionKind kind, const std::vector<ObserverClass>& classes,
                            std::size_t fluents)
{
    Action a;
    a.name = "act";
    a.kind = kind;
    switch (kind) {
    case ActionKind::Ontic: {
        for (FluentIndex f = 0; f < fluents; ++f) {
            if (coin(rng, 0.5)) {
                a.effects.push_back({f, coin(rng), coin(rng) ? Formula::top() : random_propositional(rng, fluents, 3)});
            }
        }
        break;
    }
    case ActionKind::Sensing:
        a.sensed = static_cast<FluentIndex>(uniform(rng, 0, fluents - 1));
        break;
    case ActionKind::Announcement:
        a.announced = random_propositional(rng, fluents, 4);
        break;
    }
    for (AgentIndex ag = 0; ag < classes.size(); ++ag) {
        if (classes[ag] != ObserverClass::Oblivious || coin(rng)) {
            a.observability.push_back({ag, classes[ag], Formula::top()});
        }
    }
    return a;
}

inline std::vector<ObserverClass> random_classes(Rng& rng, std::size_t agents, bool allow_partial,
                                                 bool allow_oblivious = true)
{
    std::vector<ObserverClass> out(agents);
    for (auto& c : out) {
        std::size_t hi = allow_oblivious ? 2 : 1;
        do {
            c = static_cast<ObserverClass>(uniform(rng, 0, hi));
        } while (c == ObserverClass::Partial && !allow_partial);
    }
    return out;
}

} // namespace epi::testing
