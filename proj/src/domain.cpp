#include "epi/domain.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "epi/parse.hpp"

namespace epi {

const Action* Domain::find_action(std::string_view name) const
{
    for (const auto& a : actions) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

namespace {

class DomainParser {
public:
    DomainParser(std::string_view text, const ParseOptions& options) : in_(tokenize(text)), options_(options) {}

    Domain run()
    {
        while (!in_.at(Tok::End)) {
            statement();
        }
        dom_.initial.known_by.resize(dom_.sig.agent_count());
        if (!world_seen_ && dom_.sig.fluent_count() > 0 && options_.warnings) {
            *options_.warnings << "warning: no 'initially world' statement; every fluent starts false\n";
        }
        return std::move(dom_);
    }

private:
    void statement()
    {
        const Token& t = in_.peek();
        if (t.kind != Tok::Ident) {
            in_.fail("expected a declaration");
        }
        if (t.text == "agent") {
            in_.next();
            names([this](const Token& n) { declare_agent(n); });
        } else if (t.text == "fluent") {
            in_.next();
            names([this](const Token& n) { declare_fluent(n); });
        } else if (t.text == "action") {
            in_.next();
            action();
        } else if (t.text == "initially") {
            in_.next();
            initially();
        } else if (t.text == "goal") {
            in_.next();
            if (dom_.goal) {
                throw ParseError(t.pos, "duplicate goal");
            }
            in_.expect(Tok::Colon, "':'");
            dom_.goal = parse_formula(in_, dom_.sig);
            in_.expect(Tok::Semi, "';'");
        } else {
            in_.fail("expected 'agent', 'fluent', 'action', 'initially' or 'goal'");
        }
    }

    template <class F>
    void names(F declare)
    {
        declare(in_.expect(Tok::Ident, "a name"));
        while (in_.accept(Tok::Comma)) {
            declare(in_.expect(Tok::Ident, "a name"));
        }
        in_.expect(Tok::Semi, "';'");
    }

    void check_fresh(const Token& n)
    {
        static const char* reserved[] = {"true", "false"};
        for (const char* r : reserved) {
            if (n.text == r) {
                throw ParseError(n.pos, "'" + n.text + "' is reserved");
            }
        }
        if (dom_.sig.find_agent(n.text) >= 0 || dom_.sig.find_fluent(n.text) >= 0) {
            throw ParseError(n.pos, "'" + n.text + "' is already declared");
        }
    }

    void declare_agent(const Token& n)
    {
        check_fresh(n);
        dom_.sig.add_agent(n.text);
    }

    void declare_fluent(const Token& n)
    {
        check_fresh(n);
        std::size_t count = dom_.sig.fluent_count() + 1;
        if (count > max_fluents) {
            throw ParseError(n.pos, "at most " + std::to_string(max_fluents) + " fluents are supported");
        }
        if (count > fluent_hard_limit && !options_.allow_large) {
            throw ParseError(n.pos, "more than " + std::to_string(fluent_hard_limit) +
                                        " fluents; initial-state enumeration would blow up (override to allow)");
        }
        if (count == fluent_warning_threshold + 1 && options_.warnings) {
            *options_.warnings << "warning: " << n.pos.line << ":" << n.pos.column << ": more than "
                               << fluent_warning_threshold << " fluents; initial state is exponential in fluents\n";
        }
        dom_.sig.add_fluent(n.text);
    }

    FluentIndex fluent(const Token& n)
    {
        long f = dom_.sig.find_fluent(n.text);
        if (f < 0) {
            throw ParseError(n.pos, "undeclared fluent '" + n.text + "'");
        }
        return static_cast<FluentIndex>(f);
    }

    AgentIndex agent(const Token& n)
    {
        long a = dom_.sig.find_agent(n.text);
        if (a < 0) {
            throw ParseError(n.pos, "undeclared agent '" + n.text + "'");
        }
        return static_cast<AgentIndex>(a);
    }

    std::pair<FluentIndex, bool> literal()
    {
        bool positive = !in_.accept(Tok::Minus);
        return {fluent(in_.expect(Tok::Ident, "a fluent")), positive};
    }

    FormulaPtr optional_condition()
    {
        if (in_.at_word("if")) {
            in_.next();
            return parse_formula(in_, dom_.sig);
        }
        return Formula::top();
    }

    void action()
    {
        const Token name = in_.expect(Tok::Ident, "an action name");
        if (dom_.find_action(name.text)) {
            throw ParseError(name.pos, "duplicate action '" + name.text + "'");
        }
        Action act;
        act.name = name.text;
        bool has_exec = false;
        std::optional<ActionKind> kind;
        auto set_kind = [&](ActionKind k, const Token& at) {
            if (kind && (*kind != k || k != ActionKind::Ontic)) {
                throw ParseError(at.pos, "action '" + act.name + "' mixes or repeats effect kinds");
            }
            kind = k;
        };

        in_.expect(Tok::LBrace, "'{'");
        while (!in_.accept(Tok::RBrace)) {
            const Token clause = in_.expect(Tok::Ident, "an action clause");
            if (clause.text == "executable") {
                if (has_exec) {
                    throw ParseError(clause.pos, "duplicate executable clause");
                }
                has_exec = true;
                in_.expect(Tok::Colon, "':'");
                act.executability = parse_formula(in_, dom_.sig);
            } else if (clause.text == "causes") {
                set_kind(ActionKind::Ontic, clause);
                in_.expect(Tok::Colon, "':'");
                auto [f, positive] = literal();
                act.effects.push_back({f, positive, optional_condition()});
            } else if (clause.text == "determines") {
                set_kind(ActionKind::Sensing, clause);
                in_.expect(Tok::Colon, "':'");
                act.sensed = fluent(in_.expect(Tok::Ident, "a fluent"));
            } else if (clause.text == "announces") {
                set_kind(ActionKind::Announcement, clause);
                in_.expect(Tok::Colon, "':'");
                const Token& at = in_.peek();
                act.announced = parse_formula(in_, dom_.sig);
                if (!is_propositional(*act.announced)) {
                    throw ParseError(at.pos, "only fluent formulas can be announced");
                }
            } else if (clause.text == "observes" || clause.text == "aware") {
                ObservabilityClause obs;
                obs.agent = agent(in_.expect(Tok::Ident, "an agent"));
                obs.observer = clause.text == "observes" ? ObserverClass::Full : ObserverClass::Partial;
                obs.condition = optional_condition();
                act.observability.push_back(obs);
                if (obs.observer == ObserverClass::Partial) {
                    partial_at_.push_back(clause.pos);
                }
            } else {
                throw ParseError(clause.pos, "unknown action clause '" + clause.text + "'");
            }
            in_.expect(Tok::Semi, "';'");
        }
        in_.accept(Tok::Semi);
        act.kind = kind.value_or(ActionKind::Ontic);
        if (act.kind == ActionKind::Ontic && !partial_at_.empty()) {
            throw ParseError(partial_at_.front(), "ontic action '" + act.name + "' cannot have partial observers");
        }
        partial_at_.clear();
        try {
            validate_action(act, dom_.sig);
        } catch (const TransitionError& e) {
            throw ParseError(name.pos, e.what());
        }
        dom_.actions.push_back(std::move(act));
    }

    void initially()
    {
        const Token what = in_.expect(Tok::Ident, "'world', 'known' or 'knows'");
        if (what.text == "world") {
            if (world_seen_) {
                throw ParseError(what.pos, "duplicate 'initially world' statement");
            }
            world_seen_ = true;
            in_.expect(Tok::Colon, "':'");
            if (in_.accept(Tok::Semi)) {
                return;
            }
            std::vector<bool> assigned(dom_.sig.fluent_count(), false);
            do {
                const Token& at = in_.peek();
                auto [f, positive] = literal();
                if (assigned[f]) {
                    throw ParseError(at.pos, "fluent '" + dom_.sig.fluent_name(f) + "' assigned twice");
                }
                assigned[f] = true;
                if (positive) {
                    dom_.initial.real_world |= Valuation{1} << f;
                }
            } while (in_.accept(Tok::Comma));
            in_.expect(Tok::Semi, "';'");
        } else if (what.text == "known") {
            in_.expect(Tok::Colon, "':'");
            const Token& at = in_.peek();
            auto f = parse_formula(in_, dom_.sig);
            if (!is_propositional(*f)) {
                throw ParseError(at.pos, "'initially known' takes a fluent formula");
            }
            dom_.initial.common_constraints.push_back(f);
            in_.expect(Tok::Semi, "';'");
        } else if (what.text == "knows") {
            in_.expect(Tok::LParen, "'('");
            AgentIndex a = agent(in_.expect(Tok::Ident, "an agent"));
            in_.expect(Tok::RParen, "')'");
            in_.expect(Tok::Colon, "':'");
            auto& known = dom_.initial.known_by;
            known.resize(dom_.sig.agent_count());
            do {
                FluentIndex f = fluent(in_.expect(Tok::Ident, "a fluent"));
                if (std::find(known[a].begin(), known[a].end(), f) == known[a].end()) {
                    known[a].push_back(f);
                }
            } while (in_.accept(Tok::Comma));
            in_.expect(Tok::Semi, "';'");
        } else {
            throw ParseError(what.pos, "expected 'world', 'known' or 'knows'");
        }
    }

    TokenStream in_;
    const ParseOptions& options_;
    Domain dom_;
    bool world_seen_ = false;
    std::vector<SourcePos> partial_at_;
};

} // namespace

Domain parse_domain(std::string_view text, const ParseOptions& options)
{
    return DomainParser(text, options).run();
}

std::vector<Valuation> initial_models(const InitialSpec& spec, const Signature& sig)
{
    const std::size_t n = sig.fluent_count();
    if (n >= max_fluents) {
        throw DomainError("too many fluents to enumerate initial worlds");
    }
    std::vector<Valuation> models;
    const Valuation end = Valuation{1} << n;
    for (Valuation v = 0; v < end; ++v) {
        bool ok = std::all_of(spec.common_constraints.begin(), spec.common_constraints.end(),
                              [&](const FormulaPtr& c) { return eval_fluent(v, *c); });
        if (ok) {
            models.push_back(v);
        }
    }
    return models;
}

PointedState build_initial(const InitialSpec& spec, const Signature& sig)
{
    for (const auto& c : spec.common_constraints) {
        check_declared(*c, sig);
        if (!is_propositional(*c)) {
            throw DomainError("initial constraint is not a fluent formula");
        }
    }
    auto models = initial_models(spec, sig);
    if (models.empty()) {
        throw DomainError("initial constraints are unsatisfiable");
    }
    auto real = std::lower_bound(models.begin(), models.end(), spec.real_world);
    if (real == models.end() || *real != spec.real_world) {
        throw DomainError("the real world violates an initially known constraint");
    }

    KripkeStructure m(sig.agent_count(), models);
    for (AgentIndex a = 0; a < sig.agent_count(); ++a) {
        Valuation mask = 0;
        if (a < spec.known_by.size()) {
            for (FluentIndex f : spec.known_by[a]) {
                if (f >= sig.fluent_count()) {
                    throw DomainError("known fluent index out of range");
                }
                mask |= Valuation{1} << f;
            }
        }
        // Worlds agreeing on the known fluents form one equivalence class.
        std::map<Valuation, std::vector<WorldId>> classes;
        for (WorldId w = 0; w < models.size(); ++w) {
            classes[models[w] & mask].push_back(w);
        }
        for (const auto& [_, members] : classes) {
            for (WorldId u : members) {
                for (WorldId v : members) {
                    m.add_edge(a, u, v);
                }
            }
        }
    }
    auto designated = static_cast<WorldId>(real - models.begin());
    return normalize(PointedState{std::move(m), designated});
}

} // namespace epi
