#include "epi/kripke.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace epi {

KripkeStructure::KripkeStructure(std::size_t agent_count, std::vector<Valuation> worlds)
    : worlds_(std::move(worlds)),
      edges_(agent_count, std::vector<std::vector<WorldId>>(worlds_.size()))
{
}

bool KripkeStructure::has_edge(AgentIndex a, WorldId from, WorldId to) const
{
    const auto& succ = edges_[a][from];
    return std::binary_search(succ.begin(), succ.end(), to);
}

WorldId KripkeStructure::add_world(Valuation v)
{
    worlds_.push_back(v);
    for (auto& rel : edges_) {
        rel.emplace_back();
    }
    return static_cast<WorldId>(worlds_.size() - 1);
}

void KripkeStructure::add_edge(AgentIndex a, WorldId from, WorldId to)
{
    if (a >= edges_.size() || from >= worlds_.size() || to >= worlds_.size()) {
        throw std::out_of_range("edge references a missing agent or world");
    }
    auto& succ = edges_[a][from];
    auto it = std::lower_bound(succ.begin(), succ.end(), to);
    if (it == succ.end() || *it != to) {
        succ.insert(it, to);
    }
}

void KripkeStructure::connect_all(AgentIndex a)
{
    std::vector<WorldId> all(worlds_.size());
    for (WorldId w = 0; w < all.size(); ++w) {
        all[w] = w;
    }
    for (auto& succ : edges_.at(a)) {
        succ = all;
    }
}

std::size_t KripkeStructure::edge_count() const
{
    std::size_t n = 0;
    for (const auto& rel : edges_) {
        for (const auto& succ : rel) {
            n += succ.size();
        }
    }
    return n;
}

void validate(const PointedState& s, std::size_t fluent_count)
{
    if (s.designated >= s.structure.world_count()) {
        throw std::invalid_argument("designated world out of range");
    }
    Valuation allowed = fluent_count >= 64 ? ~Valuation{0} : (Valuation{1} << fluent_count) - 1;
    for (Valuation v : s.structure.valuations()) {
        if ((v & ~allowed) != 0) {
            throw std::invalid_argument("world interpretation contains an undeclared fluent");
        }
    }
}

bool eval_fluent(Valuation v, const Formula& f)
{
    switch (f.op()) {
    case Op::Atom:
        return holds(v, f.fluent());
    case Op::Top:
        return true;
    case Op::Bot:
        return false;
    case Op::Not:
        return !eval_fluent(v, *f.sub());
    case Op::And:
        return eval_fluent(v, *f.lhs()) && eval_fluent(v, *f.rhs());
    case Op::Or:
        return eval_fluent(v, *f.lhs()) || eval_fluent(v, *f.rhs());
    case Op::Implies:
        return !eval_fluent(v, *f.lhs()) || eval_fluent(v, *f.rhs());
    default:
        throw std::invalid_argument("eval_fluent: formula is not propositional");
    }
}

namespace {

void check_agents(const KripkeStructure& m, const Formula& f)
{
    switch (f.op()) {
    case Op::Atom:
        if (f.fluent() >= max_fluents) {
            throw std::out_of_range("fluent index out of range");
        }
        return;
    case Op::Top:
    case Op::Bot:
        return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
        check_agents(m, *f.lhs());
        check_agents(m, *f.rhs());
        return;
    case Op::B:
        if (f.agent() >= m.agent_count()) {
            throw std::out_of_range("undeclared agent index " + std::to_string(f.agent()));
        }
        break;
    case Op::E:
    case Op::C:
        for (AgentIndex a : f.group()) {
            if (a >= m.agent_count()) {
                throw std::out_of_range("undeclared agent index " + std::to_string(a));
            }
        }
        break;
    case Op::Not:
        break;
    }
    check_agents(m, *f.sub());
}

std::vector<bool> label(const KripkeStructure& m, const Formula& f)
{
    const std::size_t n = m.world_count();
    std::vector<bool> out(n);
    switch (f.op()) {
    case Op::Atom:
        for (WorldId w = 0; w < n; ++w) {
            out[w] = holds(m.valuation(w), f.fluent());
        }
        return out;
    case Op::Top:
        out.assign(n, true);
        return out;
    case Op::Bot:
        return out;
    case Op::Not:
        out = label(m, *f.sub());
        out.flip();
        return out;
    case Op::And:
    case Op::Or:
    case Op::Implies: {
        auto l = label(m, *f.lhs());
        auto r = label(m, *f.rhs());
        for (WorldId w = 0; w < n; ++w) {
            out[w] = f.op() == Op::And ? (l[w] && r[w]) : f.op() == Op::Or ? (l[w] || r[w]) : (!l[w] || r[w]);
        }
        return out;
    }
    case Op::B:
    case Op::E: {
        auto sub = label(m, *f.sub());
        AgentSet single{f.agent()};
        const AgentSet& group = f.op() == Op::B ? single : f.group();
        for (WorldId w = 0; w < n; ++w) {
            bool ok = true;
            for (AgentIndex a : group) {
                for (WorldId v : m.successors(a, w)) {
                    ok = ok && sub[v];
                }
            }
            out[w] = ok;
        }
        return out;
    }
    case Op::C: {
        // A world fails C iff some non-empty group path reaches a world
        // falsifying the operand: backward search from those worlds.
        auto sub = label(m, *f.sub());
        std::vector<std::vector<WorldId>> pred(n);
        for (AgentIndex a : f.group()) {
            for (WorldId w = 0; w < n; ++w) {
                for (WorldId v : m.successors(a, w)) {
                    pred[v].push_back(w);
                }
            }
        }
        std::vector<bool> fails(n, false);
        std::deque<WorldId> queue;
        for (WorldId v = 0; v < n; ++v) {
            if (!sub[v]) {
                for (WorldId u : pred[v]) {
                    if (!fails[u]) {
                        fails[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        while (!queue.empty()) {
            WorldId v = queue.front();
            queue.pop_front();
            for (WorldId u : pred[v]) {
                if (!fails[u]) {
                    fails[u] = true;
                    queue.push_back(u);
                }
            }
        }
        for (WorldId w = 0; w < n; ++w) {
            out[w] = !fails[w];
        }
        return out;
    }
    }
    return out;
}

} // namespace

std::vector<bool> truth_set(const KripkeStructure& m, const Formula& f)
{
    check_agents(m, f);
    return label(m, f);
}

bool entails(const PointedState& s, const Formula& f)
{
    check_agents(s.structure, f);
    if (is_propositional(f)) {
        return eval_fluent(s.structure.valuation(s.designated), f);
    }
    return label(s.structure, f)[s.designated];
}

FrameReport check_frame(const KripkeStructure& m)
{
    FrameReport report;
    report.is_kd45 = true;
    report.is_s5 = true;
    const std::size_t n = m.world_count();
    const std::size_t words = (n + 63) / 64;
    // Successor rows as bitsets; transitivity and euclideanness become row
    // inclusions: R(v) <= R(u) and R(u) <= R(v) for every v in R(u).
    std::vector<std::uint64_t> rows(n * words);
    auto row = [&](WorldId w) { return rows.data() + std::size_t{w} * words; };
    auto subset = [&](const std::uint64_t* x, const std::uint64_t* y) {
        for (std::size_t k = 0; k < words; ++k) {
            if (x[k] & ~y[k]) {
                return false;
            }
        }
        return true;
    };
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        std::fill(rows.begin(), rows.end(), 0);
        for (WorldId u = 0; u < n; ++u) {
            for (WorldId v : m.successors(a, u)) {
                row(u)[v / 64] |= std::uint64_t{1} << (v % 64);
            }
        }
        AgentFrame fr{true, true, true, true};
        for (WorldId u = 0; u < n; ++u) {
            const auto& succ = m.successors(a, u);
            if (succ.empty()) {
                fr.serial = false;
            }
            if (!(row(u)[u / 64] >> (u % 64) & 1)) {
                fr.reflexive = false;
            }
            for (WorldId v : succ) {
                if (fr.transitive && !subset(row(v), row(u))) {
                    fr.transitive = false;
                }
                if (fr.euclidean && !subset(row(u), row(v))) {
                    fr.euclidean = false;
                }
            }
        }
        report.is_kd45 = report.is_kd45 && fr.kd45();
        report.is_s5 = report.is_s5 && fr.s5();
        report.agents.push_back(fr);
    }
    return report;
}

namespace {

/// Rebuilds `m` keeping the worlds in `order`, renumbered by position.
KripkeStructure reindex(const KripkeStructure& m, const std::vector<WorldId>& order)
{
    constexpr WorldId missing = ~WorldId{0};
    std::vector<WorldId> position(m.world_count(), missing);
    std::vector<Valuation> vals;
    vals.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        position[order[i]] = static_cast<WorldId>(i);
        vals.push_back(m.valuation(order[i]));
    }
    KripkeStructure out(m.agent_count(), std::move(vals));
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (WorldId v : m.successors(a, order[i])) {
                if (position[v] != missing) {
                    out.add_edge(a, static_cast<WorldId>(i), position[v]);
                }
            }
        }
    }
    return out;
}

} // namespace

PointedState prune_unreachable(const PointedState& s)
{
    const auto& m = s.structure;
    std::vector<bool> seen(m.world_count(), false);
    std::vector<WorldId> order{s.designated};
    seen[s.designated] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
        WorldId w = order[head];
        for (AgentIndex a = 0; a < m.agent_count(); ++a) {
            for (WorldId v : m.successors(a, w)) {
                if (!seen[v]) {
                    seen[v] = true;
                    order.push_back(v);
                }
            }
        }
    }
    return PointedState{reindex(m, order), 0};
}

namespace {

using Signature_ = std::vector<std::uint32_t>;

/// Replaces each signature by its rank among the sorted distinct ones.
std::vector<std::uint32_t> rank(const std::vector<Signature_>& sigs, std::size_t& distinct)
{
    std::vector<std::uint32_t> idx(sigs.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t x, std::uint32_t y) { return sigs[x] < sigs[y]; });
    std::vector<std::uint32_t> out(sigs.size());
    std::uint32_t r = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0 && sigs[idx[k]] != sigs[idx[k - 1]]) {
            ++r;
        }
        out[idx[k]] = r;
    }
    distinct = sigs.empty() ? 0 : r + 1;
    return out;
}

Signature_ world_signature(const KripkeStructure& m, const std::vector<std::uint32_t>& color, WorldId w)
{
    Signature_ sig{color[w]};
    std::vector<std::uint32_t> succ_colors;
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        succ_colors.clear();
        for (WorldId v : m.successors(a, w)) {
            succ_colors.push_back(color[v]);
        }
        std::sort(succ_colors.begin(), succ_colors.end());
        succ_colors.erase(std::unique(succ_colors.begin(), succ_colors.end()), succ_colors.end());
        sig.push_back(static_cast<std::uint32_t>(succ_colors.size()));
        sig.insert(sig.end(), succ_colors.begin(), succ_colors.end());
    }
    return sig;
}

} // namespace

std::vector<std::uint32_t> bisimulation_colors(const KripkeStructure& m, Exec exec)
{
    const std::size_t n = m.world_count();
    std::vector<Signature_> sigs(n);
    for (WorldId w = 0; w < n; ++w) {
        Valuation v = m.valuation(w);
        sigs[w] = {static_cast<std::uint32_t>(v >> 32), static_cast<std::uint32_t>(v)};
    }
    std::size_t count = 0;
    auto color = rank(sigs, count);
    while (true) {
        if (exec == Exec::Parallel) {
            const long long total = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
            for (long long w = 0; w < total; ++w) {
                sigs[w] = world_signature(m, color, static_cast<WorldId>(w));
            }
        } else {
            for (WorldId w = 0; w < n; ++w) {
                sigs[w] = world_signature(m, color, w);
            }
        }
        std::size_t refined = 0;
        auto next = rank(sigs, refined);
        // Each signature starts with the old color, so blocks only split;
        // an unchanged block count means the partition is stable.
        if (refined == count) {
            return next;
        }
        count = refined;
        color = std::move(next);
    }
}

std::vector<WorldId> canonical_order(const PointedState& s)
{
    const auto& m = s.structure;
    const auto color = bisimulation_colors(m);
    auto by_color = [&](WorldId x, WorldId y) { return std::pair(color[x], x) < std::pair(color[y], y); };

    std::vector<bool> seen(m.world_count(), false);
    std::vector<WorldId> order{s.designated};
    seen[s.designated] = true;
    std::vector<WorldId> succ;
    for (std::size_t head = 0; head < order.size(); ++head) {
        WorldId w = order[head];
        for (AgentIndex a = 0; a < m.agent_count(); ++a) {
            succ = m.successors(a, w);
            std::sort(succ.begin(), succ.end(), by_color);
            for (WorldId v : succ) {
                if (!seen[v]) {
                    seen[v] = true;
                    order.push_back(v);
                }
            }
        }
    }
    std::vector<WorldId> rest;
    for (WorldId w = 0; w < m.world_count(); ++w) {
        if (!seen[w]) {
            rest.push_back(w);
        }
    }
    std::sort(rest.begin(), rest.end(), by_color);
    order.insert(order.end(), rest.begin(), rest.end());
    return order;
}

PointedState bisim_contract(const PointedState& s, Exec exec)
{
    PointedState pruned = prune_unreachable(s);
    const auto& m = pruned.structure;
    const auto color = bisimulation_colors(m, exec);
    std::uint32_t blocks = 0;
    for (auto c : color) {
        blocks = std::max(blocks, c + 1);
    }
    std::vector<Valuation> vals(blocks);
    for (WorldId w = 0; w < m.world_count(); ++w) {
        vals[color[w]] = m.valuation(w);
    }
    KripkeStructure quotient(m.agent_count(), std::move(vals));
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        for (WorldId w = 0; w < m.world_count(); ++w) {
            for (WorldId v : m.successors(a, w)) {
                quotient.add_edge(a, color[w], color[v]);
            }
        }
    }
    PointedState contracted{std::move(quotient), color[pruned.designated]};
    // Renumber into canonical order so equal states have equal layouts.
    auto order = canonical_order(contracted);
    return PointedState{reindex(contracted.structure, order), 0};
}

PointedState normalize(const PointedState& s, Exec exec)
{
    return bisim_contract(s, exec);
}

namespace {

void put_u32(std::string& out, std::uint32_t x)
{
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
    }
}

void put_u64(std::string& out, std::uint64_t x)
{
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
    }
}

} // namespace

std::string canonical_key(const PointedState& s, Exec exec)
{
    PointedState c = normalize(s, exec);
    const auto& m = c.structure;
    std::string key;
    key.reserve(8 + 8 * m.world_count() + 4 * m.edge_count() + 4 * m.agent_count() * m.world_count());
    put_u32(key, static_cast<std::uint32_t>(m.agent_count()));
    put_u32(key, static_cast<std::uint32_t>(m.world_count()));
    put_u32(key, c.designated);
    for (Valuation v : m.valuations()) {
        put_u64(key, v);
    }
    for (AgentIndex a = 0; a < m.agent_count(); ++a) {
        for (WorldId w = 0; w < m.world_count(); ++w) {
            const auto& succ = m.successors(a, w);
            put_u32(key, static_cast<std::uint32_t>(succ.size()));
            for (WorldId v : succ) {
                put_u32(key, v);
            }
        }
    }
    return key;
}

bool states_equal(const PointedState& a, const PointedState& b)
{
    if (a.structure.agent_count() != b.structure.agent_count()) {
        throw std::invalid_argument("states_equal: states belong to different domains");
    }
    return canonical_key(a) == canonical_key(b);
}

std::string to_hex(const std::string& bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xF]);
    }
    return out;
}

std::string to_dot(const PointedState& s, const Signature& sig)
{
    const auto& m = s.structure;
    auto order = canonical_order(s);
    std::vector<WorldId> position(m.world_count());
    for (std::size_t i = 0; i < order.size(); ++i) {
        position[order[i]] = static_cast<WorldId>(i);
    }

    std::string out = "digraph epistemic_state {\n    node [shape=circle];\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
        Valuation v = m.valuation(order[i]);
        std::string label;
        for (FluentIndex f = 0; f < sig.fluent_count(); ++f) {
            if (holds(v, f)) {
                if (!label.empty()) {
                    label += "\\n";
                }
                label += sig.fluent_name(f);
            }
        }
        out += "    w" + std::to_string(i) + " [";
        if (order[i] == s.designated) {
            out += "shape=doublecircle, ";
        }
        out += "label=\"" + label + "\"];\n";
    }
    std::vector<WorldId> targets;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (AgentIndex a = 0; a < m.agent_count(); ++a) {
            targets.clear();
            for (WorldId v : m.successors(a, order[i])) {
                targets.push_back(position[v]);
            }
            std::sort(targets.begin(), targets.end());
            for (WorldId t : targets) {
                out += "    w" + std::to_string(i) + " -> w" + std::to_string(t) + " [label=\"" +
                       sig.agent_name(a) + "\"];\n";
            }
        }
    }
    out += "}\n";
    return out;
}

} // namespace epi
