#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epi/actions.hpp"
#include "epi/formula.hpp"
#include "epi/kripke.hpp"

namespace epi {

/// Finitary S5 initial description: the actual world, propositional facts
/// that are common knowledge, and the fluents each agent knows the value of.
struct InitialSpec {
    Valuation real_world = 0;
    std::vector<FormulaPtr> common_constraints;
    std::vector<std::vector<FluentIndex>> known_by;  // per agent
};

struct Domain {
    Signature sig;
    std::vector<Action> actions;
    InitialSpec initial;
    FormulaPtr goal;  // null when the file declares no goal

    /// Null when no action has that name.
    const Action* find_action(std::string_view name) const;
};

/// The initial specification cannot produce a state.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t fluent_warning_threshold = 20;
inline constexpr std::size_t fluent_hard_limit = 26;

struct ParseOptions {
    /// Accept up to 64 fluents instead of stopping at fluent_hard_limit.
    bool allow_large = false;
    /// Receives warnings, e.g. above fluent_warning_threshold. May be null.
    std::ostream* warnings = nullptr;
};

/// Reads a domain description. Names must be declared before use.
///
///     agent a, b;
///     fluent heads, opened;
///     action open {
///         executable: !opened;
///         causes: opened;             % `causes: -f if <formula>;` also valid
///         observes a if looking_a;    % Full observer
///         aware b;                    % Partial observer (epistemic actions)
///     }
///     initially world: heads, -opened;
///     initially known: !opened;
///     initially knows(a): heads;
///     goal: B(a, heads);
///
/// Sensing actions use `determines: f;`, announcements `announces: <formula>;`.
/// Fluents missing from `initially world` are false. Throws ParseError.
Domain parse_domain(std::string_view text, const ParseOptions& options = {});

/// Every valuation satisfying all common constraints, in increasing order.
/// These are the worlds of the initial structure before contraction.
std::vector<Valuation> initial_models(const InitialSpec& spec, const Signature& sig);

/// Builds the S5 initial state: all models of the constraints, agent i
/// relating worlds that agree on known_by[i], pointed at the real world,
/// then pruned and contracted. Throws DomainError when there are no models
/// or the real world violates a constraint.
PointedState build_initial(const InitialSpec& spec, const Signature& sig);

} // namespace epi
