#include "epi/formula.hpp"

#include <algorithm>
#include <cctype>

namespace epi {

Signature::Signature(std::vector<std::string> agents, std::vector<std::string> fluents)
{
    for (auto& a : agents) {
        add_agent(std::move(a));
    }
    for (auto& f : fluents) {
        add_fluent(std::move(f));
    }
}

AgentIndex Signature::add_agent(std::string name)
{
    if (!is_identifier(name)) {
        throw std::invalid_argument("invalid agent name '" + name + "'");
    }
    if (find_agent(name) >= 0) {
        throw std::invalid_argument("duplicate agent '" + name + "'");
    }
    agents_.push_back(std::move(name));
    return static_cast<AgentIndex>(agents_.size() - 1);
}

FluentIndex Signature::add_fluent(std::string name)
{
    if (!is_identifier(name)) {
        throw std::invalid_argument("invalid fluent name '" + name + "'");
    }
    if (find_fluent(name) >= 0) {
        throw std::invalid_argument("duplicate fluent '" + name + "'");
    }
    fluents_.push_back(std::move(name));
    return static_cast<FluentIndex>(fluents_.size() - 1);
}

long Signature::find_agent(std::string_view name) const
{
    auto it = std::find(agents_.begin(), agents_.end(), name);
    return it == agents_.end() ? -1 : static_cast<long>(it - agents_.begin());
}

long Signature::find_fluent(std::string_view name) const
{
    auto it = std::find(fluents_.begin(), fluents_.end(), name);
    return it == fluents_.end() ? -1 : static_cast<long>(it - fluents_.begin());
}

AgentSet Signature::all_agents() const
{
    AgentSet all(agents_.size());
    for (AgentIndex i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return all;
}

bool is_identifier(std::string_view name)
{
    if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_';
    });
}

FormulaPtr Formula::atom(FluentIndex f)
{
    return FormulaPtr(new Formula(Op::Atom, f, {}, nullptr, nullptr));
}

FormulaPtr Formula::top()
{
    static const FormulaPtr t(new Formula(Op::Top, 0, {}, nullptr, nullptr));
    return t;
}

FormulaPtr Formula::bot()
{
    static const FormulaPtr b(new Formula(Op::Bot, 0, {}, nullptr, nullptr));
    return b;
}

FormulaPtr Formula::negate(FormulaPtr sub)
{
    return FormulaPtr(new Formula(Op::Not, 0, {}, std::move(sub), nullptr));
}

FormulaPtr Formula::conj(FormulaPtr lhs, FormulaPtr rhs)
{
    return FormulaPtr(new Formula(Op::And, 0, {}, std::move(lhs), std::move(rhs)));
}

FormulaPtr Formula::disj(FormulaPtr lhs, FormulaPtr rhs)
{
    return FormulaPtr(new Formula(Op::Or, 0, {}, std::move(lhs), std::move(rhs)));
}

FormulaPtr Formula::implies(FormulaPtr lhs, FormulaPtr rhs)
{
    return FormulaPtr(new Formula(Op::Implies, 0, {}, std::move(lhs), std::move(rhs)));
}

FormulaPtr Formula::believes(AgentIndex agent, FormulaPtr sub)
{
    return FormulaPtr(new Formula(Op::B, agent, {}, std::move(sub), nullptr));
}

namespace {

AgentSet normalize_group(AgentSet group)
{
    if (group.empty()) {
        throw std::invalid_argument("group operator needs a non-empty agent set");
    }
    std::sort(group.begin(), group.end());
    group.erase(std::unique(group.begin(), group.end()), group.end());
    return group;
}

} // namespace

FormulaPtr Formula::everyone(AgentSet group, FormulaPtr sub)
{
    return FormulaPtr(new Formula(Op::E, 0, normalize_group(std::move(group)), std::move(sub), nullptr));
}

FormulaPtr Formula::common(AgentSet group, FormulaPtr sub)
{
    return FormulaPtr(new Formula(Op::C, 0, normalize_group(std::move(group)), std::move(sub), nullptr));
}

FormulaPtr Formula::literal(FluentIndex f, bool positive)
{
    return positive ? atom(f) : negate(atom(f));
}

bool equal(const Formula& a, const Formula& b)
{
    if (&a == &b) {
        return true;
    }
    if (a.op() != b.op()) {
        return false;
    }
    switch (a.op()) {
    case Op::Top:
    case Op::Bot:
        return true;
    case Op::Atom:
        return a.fluent() == b.fluent();
    case Op::Not:
        return equal(*a.sub(), *b.sub());
    case Op::And:
    case Op::Or:
    case Op::Implies:
        return equal(*a.lhs(), *b.lhs()) && equal(*a.rhs(), *b.rhs());
    case Op::B:
        return a.agent() == b.agent() && equal(*a.sub(), *b.sub());
    case Op::E:
    case Op::C:
        return a.group() == b.group() && equal(*a.sub(), *b.sub());
    }
    return false;
}

bool is_propositional(const Formula& f)
{
    switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
        return true;
    case Op::Not:
        return is_propositional(*f.sub());
    case Op::And:
    case Op::Or:
    case Op::Implies:
        return is_propositional(*f.lhs()) && is_propositional(*f.rhs());
    default:
        return false;
    }
}

bool is_common_free(const Formula& f)
{
    switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
        return true;
    case Op::C:
        return false;
    case Op::And:
    case Op::Or:
    case Op::Implies:
        return is_common_free(*f.lhs()) && is_common_free(*f.rhs());
    default:
        return is_common_free(*f.sub());
    }
}

std::size_t modal_depth(const Formula& f)
{
    switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
        return 0;
    case Op::Not:
        return modal_depth(*f.sub());
    case Op::And:
    case Op::Or:
    case Op::Implies:
        return std::max(modal_depth(*f.lhs()), modal_depth(*f.rhs()));
    default:
        return 1 + modal_depth(*f.sub());
    }
}

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool negated)
{
    switch (f->op()) {
    case Op::Atom:
        return negated ? Formula::negate(f) : f;
    case Op::Top:
        return negated ? Formula::bot() : f;
    case Op::Bot:
        return negated ? Formula::top() : f;
    case Op::Not:
        return nnf(f->sub(), !negated);
    case Op::And:
        return negated ? Formula::disj(nnf(f->lhs(), true), nnf(f->rhs(), true))
                       : Formula::conj(nnf(f->lhs(), false), nnf(f->rhs(), false));
    case Op::Or:
        return negated ? Formula::conj(nnf(f->lhs(), true), nnf(f->rhs(), true))
                       : Formula::disj(nnf(f->lhs(), false), nnf(f->rhs(), false));
    case Op::Implies:
        return negated ? Formula::conj(nnf(f->lhs(), false), nnf(f->rhs(), true))
                       : Formula::disj(nnf(f->lhs(), true), nnf(f->rhs(), false));
    case Op::B: {
        auto inner = Formula::believes(f->agent(), nnf(f->sub(), false));
        return negated ? Formula::negate(inner) : inner;
    }
    case Op::E: {
        auto inner = Formula::everyone(f->group(), nnf(f->sub(), false));
        return negated ? Formula::negate(inner) : inner;
    }
    case Op::C: {
        auto inner = Formula::common(f->group(), nnf(f->sub(), false));
        return negated ? Formula::negate(inner) : inner;
    }
    }
    return f;
}

void collect_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out)
{
    if (f->op() == Op::And) {
        collect_conjuncts(f->lhs(), out);
        collect_conjuncts(f->rhs(), out);
    } else {
        out.push_back(f);
    }
}

void print_group(const AgentSet& group, const Signature& sig, std::string& out)
{
    out += '{';
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += sig.agent_name(group[i]);
    }
    out += '}';
}

void print(const Formula& f, const Signature& sig, std::string& out)
{
    switch (f.op()) {
    case Op::Atom:
        out += sig.fluent_name(f.fluent());
        return;
    case Op::Top:
        out += "true";
        return;
    case Op::Bot:
        out += "false";
        return;
    case Op::Not:
        out += '!';
        print(*f.sub(), sig, out);
        return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
        out += '(';
        print(*f.lhs(), sig, out);
        out += f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " -> ";
        print(*f.rhs(), sig, out);
        out += ')';
        return;
    case Op::B:
        out += "B(";
        out += sig.agent_name(f.agent());
        break;
    case Op::E:
        out += "E(";
        print_group(f.group(), sig, out);
        break;
    case Op::C:
        out += "C(";
        print_group(f.group(), sig, out);
        break;
    }
    out += ", ";
    print(*f.sub(), sig, out);
    out += ')';
}

} // namespace

FormulaPtr to_nnf(const FormulaPtr& f)
{
    return nnf(f, false);
}

std::vector<FormulaPtr> conjuncts(const FormulaPtr& f)
{
    std::vector<FormulaPtr> out;
    collect_conjuncts(f, out);
    return out;
}

std::string to_string(const Formula& f, const Signature& sig)
{
    std::string out;
    print(f, sig, out);
    return out;
}

void check_declared(const Formula& f, const Signature& sig)
{
    switch (f.op()) {
    case Op::Top:
    case Op::Bot:
        return;
    case Op::Atom:
        if (f.fluent() >= sig.fluent_count()) {
            throw std::out_of_range("undeclared fluent index " + std::to_string(f.fluent()));
        }
        return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
        check_declared(*f.lhs(), sig);
        check_declared(*f.rhs(), sig);
        return;
    case Op::B:
        if (f.agent() >= sig.agent_count()) {
            throw std::out_of_range("undeclared agent index " + std::to_string(f.agent()));
        }
        break;
    case Op::E:
    case Op::C:
        for (AgentIndex a : f.group()) {
            if (a >= sig.agent_count()) {
                throw std::out_of_range("undeclared agent index " + std::to_string(a));
            }
        }
        break;
    case Op::Not:
        break;
    }
    check_declared(*f.sub(), sig);
}

} // namespace epi
