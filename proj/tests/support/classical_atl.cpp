#include "classical_atl.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvtest {

using namespace mvstrat;

namespace {

// Successor under a complete action profile, indexed by agent.
StateId successor(const GameStructure& s, StateId q, const std::vector<ActionId>& profile) {
    for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
        const auto j = s.joint(t);
        if (std::equal(j.begin(), j.end(), profile.begin(), profile.end())) {
            return s.to(t);
        }
    }
    throw std::logic_error("ClassicalAtl needs a total transition function");
}

// Calls visit(profile) for every assignment of available actions to the
// given agents, leaving the other entries of profile untouched.
template <class F>
bool any_profile(const GameStructure& s, StateId q, const std::vector<AgentId>& who, std::vector<ActionId>& profile,
                 std::size_t i, F&& visit) {
    if (i == who.size()) {
        return visit(profile);
    }
    for (ActionId x : s.available(who[i], q)) {
        profile[who[i]] = x;
        if (any_profile(s, q, who, profile, i + 1, visit)) {
            return true;
        }
    }
    return false;
}

// Least or greatest solution of Z = b | (a & step(Z)).
template <class Step>
std::vector<bool> solve(std::size_t n, const std::vector<bool>& a, const std::vector<bool>& b, bool greatest,
                        Step&& step) {
    std::vector<bool> z(n, greatest);
    while (true) {
        const auto s = step(z);
        std::vector<bool> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            next[q] = b[q] || (a[q] && s[q]);
        }
        if (next == z) {
            return z;
        }
        z = std::move(next);
    }
}

} // namespace

std::vector<bool> ClassicalAtl::eval(const Formula& f) const {
    const std::size_t n = m_.num_states();
    switch (f.op()) {
    case StateOp::constant: {
        const auto c = m_.constant(f.name());
        if (!c) {
            throw std::invalid_argument("unknown constant " + f.name());
        }
        return Bits(n, *c);
    }
    case StateOp::atom: {
        Bits out(n);
        const auto& h = m_.holds(f.name());
        for (StateId q = 0; q < n; ++q) {
            out[q] = h.contains(q);
        }
        return out;
    }
    case StateOp::conj:
    case StateOp::disj:
    case StateOp::implies:
    case StateOp::iff: {
        const auto a = eval(f.lhs());
        const auto b = eval(f.rhs());
        Bits out(n);
        for (std::size_t q = 0; q < n; ++q) {
            switch (f.op()) {
            case StateOp::conj: out[q] = a[q] && b[q]; break;
            case StateOp::disj: out[q] = a[q] || b[q]; break;
            case StateOp::implies: out[q] = !a[q] || b[q]; break;
            default: out[q] = a[q] == b[q]; break;
            }
        }
        return out;
    }
    case StateOp::coalition:
        return strategic(f, true);
    case StateOp::no_avoid:
        return strategic(f, false);
    }
    return {};
}

ClassicalAtl::Bits ClassicalAtl::strategic(const Formula& f, bool universal_outcome) const {
    const GameStructure& s = m_.structure();
    std::vector<AgentId> coalition;
    for (const auto& name : f.agents()) {
        coalition.push_back(s.agent(name));
    }
    const PathFormula& g = f.path();
    const std::size_t n = m_.num_states();
    Bits a(n, true);
    Bits b;
    PathOp op = g.op();
    switch (op) {
    case PathOp::next:
        b = eval(g.lhs().state_formula());
        break;
    case PathOp::sometime:
        op = PathOp::until;
        b = eval(g.lhs().state_formula());
        break;
    case PathOp::always:
        op = PathOp::weak_until;
        a = eval(g.lhs().state_formula());
        b = Bits(n, false);
        break;
    case PathOp::until:
    case PathOp::weak_until:
        a = eval(g.lhs().state_formula());
        b = eval(g.rhs().state_formula());
        break;
    default:
        throw std::invalid_argument("not an ATL formula");
    }
    return mode_ == Mode::perfect ? perfect(coalition, op, a, b, !universal_outcome)
                                  : uniform(coalition, op, a, b, !universal_outcome);
}

ClassicalAtl::Bits ClassicalAtl::perfect(const std::vector<AgentId>& coalition, PathOp op, const Bits& a,
                                         const Bits& b, bool cannot_avoid) const {
    const GameStructure& s = m_.structure();
    const std::size_t n = m_.num_states();
    std::vector<AgentId> others;
    for (AgentId x = 0; x < s.num_agents(); ++x) {
        if (std::find(coalition.begin(), coalition.end(), x) == coalition.end()) {
            others.push_back(x);
        }
    }
    // <<A>>: some A-profile such that every completion lands in z.
    // [[A]]: every A-profile has some completion landing in z.
    auto step = [&](const Bits& z) {
        Bits out(n);
        for (StateId q = 0; q < n; ++q) {
            std::vector<ActionId> profile(s.num_agents(), 0);
            if (!cannot_avoid) {
                out[q] = any_profile(s, q, coalition, profile, 0, [&](std::vector<ActionId>& p) {
                    return !any_profile(s, q, others, p, 0,
                                        [&](std::vector<ActionId>& full) { return !z[successor(s, q, full)]; });
                });
            } else {
                out[q] = !any_profile(s, q, coalition, profile, 0, [&](std::vector<ActionId>& p) {
                    return !any_profile(s, q, others, p, 0,
                                        [&](std::vector<ActionId>& full) { return z[successor(s, q, full)]; });
                });
            }
        }
        return out;
    };
    if (op == PathOp::next) {
        return step(b);
    }
    return solve(n, a, b, op == PathOp::weak_until, step);
}

ClassicalAtl::Bits ClassicalAtl::uniform(const std::vector<AgentId>& coalition, PathOp op, const Bits& a,
                                         const Bits& b, bool cannot_avoid) const {
    const GameStructure& s = m_.structure();
    const std::size_t n = m_.num_states();

    // One slot per (member, class), with the actions available there.
    struct Slot {
        AgentId agent;
        std::uint32_t cls;
        std::vector<ActionId> options;
    };
    std::vector<Slot> slots;
    for (AgentId x : coalition) {
        for (std::uint32_t c = 0; c < s.class_count(x); ++c) {
            const auto members = s.class_members(x, c);
            const auto av = s.available(x, members.front());
            slots.push_back({x, c, {av.begin(), av.end()}});
        }
    }

    Bits result(n, cannot_avoid);
    std::vector<std::size_t> digits(slots.size(), 0);
    while (true) {
        // Successors consistent with the current strategy.
        std::vector<std::vector<StateId>> succ(n);
        for (StateId q = 0; q < n; ++q) {
            for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
                const auto j = s.joint(t);
                bool follows = true;
                for (std::size_t i = 0; i < slots.size() && follows; ++i) {
                    if (s.class_of(slots[i].agent, q) == slots[i].cls) {
                        follows = j[slots[i].agent] == slots[i].options[digits[i]];
                    }
                }
                if (follows) {
                    succ[q].push_back(s.to(t));
                }
            }
        }
        auto step = [&](const Bits& z) {
            Bits out(n);
            for (StateId q = 0; q < n; ++q) {
                const auto in = [&](StateId r) { return static_cast<bool>(z[r]); };
                out[q] = cannot_avoid ? std::any_of(succ[q].begin(), succ[q].end(), in)
                                      : std::all_of(succ[q].begin(), succ[q].end(), in);
            }
            return out;
        };
        const Bits sat = op == PathOp::next ? step(b) : solve(n, a, b, op == PathOp::weak_until, step);
        for (StateId q = 0; q < n; ++q) {
            result[q] = cannot_avoid ? (result[q] && sat[q]) : (result[q] || sat[q]);
        }

        std::size_t i = 0;
        while (i < slots.size() && ++digits[i] == slots[i].options.size()) {
            digits[i++] = 0;
        }
        if (i == slots.size()) {
            break;
        }
    }
    return result;
}

} // namespace mvtest
