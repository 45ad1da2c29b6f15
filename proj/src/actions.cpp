#include "epi/actions.hpp"

#include <optional>

namespace epi {

const char* to_string(ObserverClass c)
{
    switch (c) {
    case ObserverClass::Full:
        return "full";
    case ObserverClass::Partial:
        return "partial";
    case ObserverClass::Oblivious:
        return "oblivious";
    }
    return "?";
}

TransitionError::TransitionError(Kind kind, std::string action, std::string detail, const std::string& message)
    : std::runtime_error(message), kind_(kind), action_(std::move(action)), detail_(std::move(detail))
{
}

namespace {

[[noreturn]] void invalid(const Action& a, const std::string& what)
{
    throw TransitionError(TransitionError::Kind::Validation, a.name, "", "action '" + a.name + "': " + what);
}

void check_formula(const Action& a, const FormulaPtr& f, const Signature& sig, const char* where)
{
    if (!f) {
        invalid(a, std::string("missing ") + where);
    }
    try {
        check_declared(*f, sig);
    } catch (const std::out_of_range& e) {
        invalid(a, std::string(where) + ": " + e.what());
    }
}

} // namespace

void validate_action(const Action& a, const Signature& sig)
{
    check_formula(a, a.executability, sig, "executability");
    switch (a.kind) {
    case ActionKind::Ontic:
        for (const auto& e : a.effects) {
            if (e.fluent >= sig.fluent_count()) {
                invalid(a, "effect on undeclared fluent");
            }
            check_formula(a, e.condition, sig, "effect condition");
        }
        break;
    case ActionKind::Sensing:
        if (a.sensed >= sig.fluent_count()) {
            invalid(a, "sensing an undeclared fluent");
        }
        break;
    case ActionKind::Announcement:
        check_formula(a, a.announced, sig, "announcement");
        if (!is_propositional(*a.announced)) {
            invalid(a, "only fluent formulas can be announced");
        }
        break;
    }
    for (const auto& clause : a.observability) {
        if (clause.agent >= sig.agent_count()) {
            invalid(a, "observability clause for undeclared agent");
        }
        if (a.kind == ActionKind::Ontic && clause.observer == ObserverClass::Partial) {
            invalid(a, "ontic actions admit no partial observers (agent '" + sig.agent_name(clause.agent) + "')");
        }
        check_formula(a, clause.condition, sig, "observability condition");
    }
}

bool executable(const PointedState& s, const Action& a)
{
    return entails(s, *a.executability);
}

std::vector<ObserverClass> observers(const PointedState& s, const Action& a, const Signature& sig)
{
    std::vector<std::optional<ObserverClass>> fired(sig.agent_count());
    for (const auto& clause : a.observability) {
        if (!entails(s, *clause.condition)) {
            continue;
        }
        auto& slot = fired.at(clause.agent);
        if (slot && *slot != clause.observer) {
            const auto& agent = sig.agent_name(clause.agent);
            throw TransitionError(TransitionError::Kind::AmbiguousObservability, a.name, agent,
                                  "action '" + a.name + "': agent '" + agent + "' is both " + to_string(*slot) +
                                      " and " + to_string(clause.observer));
        }
        slot = clause.observer;
    }
    std::vector<ObserverClass> out;
    out.reserve(fired.size());
    for (const auto& f : fired) {
        out.push_back(f.value_or(ObserverClass::Oblivious));
    }
    return out;
}

namespace {

struct EventModel {
    // Event 0..outcomes-1 are the action's outcomes, the last one is skip.
    std::size_t outcomes = 1;
    std::vector<FormulaPtr> pre;  // per outcome; null means no precondition
    std::size_t designated = 0;

    std::size_t skip() const { return outcomes; }
    std::size_t size() const { return outcomes + 1; }

    /// Events agent class `c` considers possible when `e` happens.
    std::vector<std::size_t> successors(ObserverClass c, std::size_t e) const
    {
        if (e == skip()) {
            return {skip()};
        }
        switch (c) {
        case ObserverClass::Full:
            return {e};
        case ObserverClass::Partial: {
            std::vector<std::size_t> all(outcomes);
            for (std::size_t k = 0; k < outcomes; ++k) {
                all[k] = k;
            }
            return all;
        }
        case ObserverClass::Oblivious:
            return {skip()};
        }
        return {};
    }
};

/// Post-state valuation of every world under the ontic effects.
std::vector<Valuation> ontic_valuations(const KripkeStructure& m, const Action& a, const Signature& sig)
{
    const std::size_t n = m.world_count();
    std::vector<Valuation> set_true(n, 0), set_false(n, 0);
    for (const auto& e : a.effects) {
        auto cond = truth_set(m, *e.condition);
        Valuation bit = Valuation{1} << e.fluent;
        for (WorldId w = 0; w < n; ++w) {
            if (cond[w]) {
                (e.positive ? set_true : set_false)[w] |= bit;
            }
        }
    }
    std::vector<Valuation> out(n);
    for (WorldId w = 0; w < n; ++w) {
        if (Valuation clash = set_true[w] & set_false[w]; clash != 0) {
            FluentIndex f = 0;
            while (!holds(clash, f)) {
                ++f;
            }
            invalid(a, "conflicting effects on fluent '" + sig.fluent_name(f) + "'");
        }
        out[w] = (m.valuation(w) | set_true[w]) & ~set_false[w];
    }
    return out;
}

} // namespace

PointedState apply(const PointedState& s, const Action& a, const Signature& sig, Exec exec)
{
    if (!executable(s, a)) {
        throw TransitionError(TransitionError::Kind::NotExecutable, a.name, to_hex(canonical_key(s)),
                              "action '" + a.name + "' is not executable");
    }
    const auto classes = observers(s, a, sig);
    const auto& m = s.structure;
    const std::size_t n = m.world_count();

    EventModel events;
    std::vector<Valuation> effect_vals;
    if (a.kind == ActionKind::Ontic) {
        events.outcomes = 1;
        events.pre = {nullptr};
        events.designated = 0;
        effect_vals = ontic_valuations(m, a, sig);
    } else {
        FormulaPtr phi = a.kind == ActionKind::Sensing ? Formula::atom(a.sensed) : a.announced;
        events.outcomes = 2;
        events.pre = {phi, Formula::negate(phi)};
        events.designated = eval_fluent(m.valuation(s.designated), *phi) ? 0 : 1;
    }

    // Product worlds, indexed [event][world]; missing pairs are `none`.
    constexpr WorldId none = ~WorldId{0};
    std::vector<std::vector<WorldId>> id(events.size(), std::vector<WorldId>(n, none));
    KripkeStructure out(m.agent_count(), {});
    for (std::size_t e = 0; e < events.size(); ++e) {
        for (WorldId w = 0; w < n; ++w) {
            Valuation v = m.valuation(w);
            if (e < events.outcomes) {
                if (events.pre[e] && !eval_fluent(v, *events.pre[e])) {
                    continue;
                }
                if (a.kind == ActionKind::Ontic) {
                    v = effect_vals[w];
                }
            }
            id[e][w] = out.add_world(v);
        }
    }

    for (AgentIndex ag = 0; ag < m.agent_count(); ++ag) {
        for (std::size_t e = 0; e < events.size(); ++e) {
            const auto targets = events.successors(classes[ag], e);
            for (WorldId w = 0; w < n; ++w) {
                if (id[e][w] == none) {
                    continue;
                }
                for (WorldId v : m.successors(ag, w)) {
                    for (std::size_t f : targets) {
                        if (id[f][v] != none) {
                            out.add_edge(ag, id[e][w], id[f][v]);
                        }
                    }
                }
            }
        }
    }

    return normalize(PointedState{std::move(out), id[events.designated][s.designated]}, exec);
}

} // namespace epi
