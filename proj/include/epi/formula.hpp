#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epi {

using AgentIndex = std::uint32_t;
using FluentIndex = std::uint32_t;

/// Sorted, duplicate-free set of agent indices. Used by the group operators.
using AgentSet = std::vector<AgentIndex>;

/// Agent and fluent vocabulary. Indices are declaration order; the name
/// tables are what formulas resolve against when parsed or printed.
class Signature {
public:
    Signature() = default;
    Signature(std::vector<std::string> agents, std::vector<std::string> fluents);

    AgentIndex add_agent(std::string name);
    FluentIndex add_fluent(std::string name);

    const std::vector<std::string>& agents() const { return agents_; }
    const std::vector<std::string>& fluents() const { return fluents_; }
    std::size_t agent_count() const { return agents_.size(); }
    std::size_t fluent_count() const { return fluents_.size(); }

    const std::string& agent_name(AgentIndex a) const { return agents_.at(a); }
    const std::string& fluent_name(FluentIndex f) const { return fluents_.at(f); }

    /// Index lookup; negative when undeclared.
    long find_agent(std::string_view name) const;
    long find_fluent(std::string_view name) const;

    AgentSet all_agents() const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<std::string> agents_;
    std::vector<std::string> fluents_;
};

/// True when `name` is a lowercase letter followed by letters, digits or '_'.
bool is_identifier(std::string_view name);

enum class Op : std::uint8_t { Atom, Top, Bot, Not, And, Or, Implies, B, E, C };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable belief-formula node. Fluent formulas are the subset without
/// B/E/C nodes; there is no separate wrapper type for them.
class Formula {
public:
    Op op() const { return op_; }
    FluentIndex fluent() const { return index_; }
    AgentIndex agent() const { return index_; }
    const AgentSet& group() const { return group_; }
    const FormulaPtr& lhs() const { return lhs_; }
    const FormulaPtr& rhs() const { return rhs_; }
    /// Single operand of Not / B / E / C.
    const FormulaPtr& sub() const { return lhs_; }

    bool is_modal() const { return op_ == Op::B || op_ == Op::E || op_ == Op::C; }

    static FormulaPtr atom(FluentIndex f);
    static FormulaPtr top();
    static FormulaPtr bot();
    static FormulaPtr negate(FormulaPtr sub);
    static FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr believes(AgentIndex agent, FormulaPtr sub);
    /// Throws std::invalid_argument on an empty group.
    static FormulaPtr everyone(AgentSet group, FormulaPtr sub);
    static FormulaPtr common(AgentSet group, FormulaPtr sub);

    /// Fluent literal: the atom or its negation.
    static FormulaPtr literal(FluentIndex f, bool positive);

private:
    Formula(Op op, std::uint32_t index, AgentSet group, FormulaPtr lhs, FormulaPtr rhs)
        : op_(op), index_(index), group_(std::move(group)), lhs_(std::move(lhs)), rhs_(std::move(rhs))
    {
    }

    Op op_;
    std::uint32_t index_;
    AgentSet group_;
    FormulaPtr lhs_;
    FormulaPtr rhs_;
};

/// Structural equality.
bool equal(const Formula& a, const Formula& b);

/// No B/E/C anywhere in the tree.
bool is_propositional(const Formula& f);

/// No C anywhere in the tree.
bool is_common_free(const Formula& f);

std::size_t modal_depth(const Formula& f);

/// Negation normal form. Implications are eliminated and negations pushed
/// down to atoms or to the modal operator directly above them; no dual
/// modality is introduced, so `!B(a, p)` stays as is.
FormulaPtr to_nnf(const FormulaPtr& f);

/// Splits nested top-level conjunctions into their conjuncts.
std::vector<FormulaPtr> conjuncts(const FormulaPtr& f);

/// Fully parenthesized canonical text; agent sets print sorted. Re-parses to
/// a structurally equal formula.
std::string to_string(const Formula& f, const Signature& sig);

/// Throws std::out_of_range naming the first agent or fluent index the
/// signature does not declare.
void check_declared(const Formula& f, const Signature& sig);

} // namespace epi
