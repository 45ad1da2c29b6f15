#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "epi/formula.hpp"
#include "epi/kripke.hpp"

namespace epi {

enum class ObserverClass { Full, Partial, Oblivious };

const char* to_string(ObserverClass c);

enum class ActionKind { Ontic, Sensing, Announcement };

/// `fluent` becomes `positive` in every world where `condition` holds.
struct Effect {
    FluentIndex fluent = 0;
    bool positive = true;
    FormulaPtr condition = Formula::top();
};

/// `agent` is in class `observer` in states that entail `condition`.
struct ObservabilityClause {
    AgentIndex agent = 0;
    ObserverClass observer = ObserverClass::Full;
    FormulaPtr condition = Formula::top();
};

struct Action {
    std::string name;
    ActionKind kind = ActionKind::Ontic;
    std::vector<Effect> effects;       // Ontic
    FluentIndex sensed = 0;            // Sensing
    FormulaPtr announced;              // Announcement; propositional
    FormulaPtr executability = Formula::top();
    std::vector<ObservabilityClause> observability;
};

class TransitionError : public std::runtime_error {
public:
    enum class Kind { NotExecutable, AmbiguousObservability, Validation };

    TransitionError(Kind kind, std::string action, std::string detail, const std::string& message);

    Kind kind() const { return kind_; }
    const std::string& action() const { return action_; }
    /// Hex state key for NotExecutable, agent name for
    /// AmbiguousObservability, empty otherwise.
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    std::string action_;
    std::string detail_;
};

/// Static checks against the vocabulary: declared names, propositional
/// announcements, no Partial observers on ontic actions. Throws
/// TransitionError::Kind::Validation.
void validate_action(const Action& a, const Signature& sig);

bool executable(const PointedState& s, const Action& a);

/// Observer class of every agent, evaluated at the pointed state. Agents
/// without a firing clause are Oblivious.
std::vector<ObserverClass> observers(const PointedState& s, const Action& a, const Signature& sig);

/// Event-update product of `s` with the action's event model, then pruned
/// and bisimulation-contracted.
///
/// Ontic actions use an effect event (effects applied) and a skip event.
/// Sensing and announcements use a positive outcome event, a negative one
/// and a skip event; worlds are paired only with outcome events whose
/// precondition they satisfy. Full agents relate equal events, Partial
/// agents relate both outcome events to each other, Oblivious agents map
/// every event to skip. The skip copy keeps the original relations.
PointedState apply(const PointedState& s, const Action& a, const Signature& sig, Exec exec = Exec::Serial);

} // namespace epi
