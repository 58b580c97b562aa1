// Brute-force reference semantics. Deliberately shares nothing with mc2: every
// strategic operator is decided state by state by searching over strategy
// assignments and inspecting the induced outcome graph.

#include <algorithm>
#include <map>

#include "mvstrat/error.hpp"
#include "mvstrat/mvmc.hpp"

namespace mvstrat {

namespace {

struct Goal {
    PathOp op;
    StateSet phi;
    StateSet psi;
};

class StrategySearch {
public:
    StrategySearch(const GameStructure& s, std::vector<AgentId> coalition, bool uniform, std::uint64_t cap)
        : s_(s), coalition_(std::move(coalition)), uniform_(uniform), cap_(cap) {}

    // Some assignment makes every path from q good (refute = false), or makes
    // every path from q bad (refute = true).
    bool exists(StateId q, const Goal& goal, bool refute) {
        assignment_.clear();
        return extend(q, goal, refute);
    }

private:
    using Key = std::pair<std::size_t, std::uint32_t>; // coalition member, state or class

    Key key(std::size_t i, StateId r) const {
        return {i, uniform_ ? s_.class_of(coalition_[i], r) : r};
    }

    std::vector<ActionId> options(std::size_t i, StateId r) const {
        const AgentId a = coalition_[i];
        if (!uniform_) {
            auto av = s_.available(a, r);
            return {av.begin(), av.end()};
        }
        std::vector<ActionId> acc;
        bool first = true;
        for (StateId x : s_.class_members(a, s_.class_of(a, r))) {
            auto av = s_.available(a, x);
            std::vector<ActionId> here(av.begin(), av.end());
            std::sort(here.begin(), here.end());
            if (first) {
                acc = std::move(here);
                first = false;
            } else {
                std::vector<ActionId> both;
                std::set_intersection(acc.begin(), acc.end(), here.begin(), here.end(), std::back_inserter(both));
                acc = std::move(both);
            }
        }
        return acc;
    }

    std::vector<StateId> outcomes(StateId r) const {
        std::vector<StateId> out;
        for (TransitionId t = s_.out_begin(r); t < s_.out_end(r); ++t) {
            auto joint = s_.joint(t);
            bool match = true;
            for (std::size_t i = 0; i < coalition_.size() && match; ++i) {
                match = joint[coalition_[i]] == assignment_.at(key(i, r));
            }
            if (match) {
                out.push_back(s_.to(t));
            }
        }
        return out;
    }

    bool expands(StateId r, const Goal& goal) const {
        if (goal.op == PathOp::next) {
            return false;
        }
        return goal.phi.contains(r) && !goal.psi.contains(r);
    }

    // First coalition member without a choice at r, or coalition size.
    std::size_t open_member(StateId r) const {
        for (std::size_t i = 0; i < coalition_.size(); ++i) {
            if (!assignment_.count(key(i, r))) {
                return i;
            }
        }
        return coalition_.size();
    }

    bool extend(StateId q, const Goal& goal, bool refute) {
        // Walk the part of the outcome graph that the current assignment fixes.
        std::vector<char> seen(s_.num_states(), 0);
        std::vector<StateId> stack{q};
        seen[q] = 1;
        while (!stack.empty()) {
            const StateId r = stack.back();
            stack.pop_back();
            const bool root_move = r == q && goal.op == PathOp::next;
            if (!root_move && !expands(r, goal)) {
                continue;
            }
            const std::size_t i = open_member(r);
            if (i < coalition_.size()) {
                const Key k = key(i, r);
                for (ActionId x : options(i, r)) {
                    assignment_[k] = x;
                    if (extend(q, goal, refute)) {
                        return true;
                    }
                }
                assignment_.erase(k);
                return false;
            }
            for (StateId next : outcomes(r)) {
                if (!seen[next]) {
                    seen[next] = 1;
                    stack.push_back(next);
                }
            }
        }
        if (++evaluations_ > cap_) {
            throw Error(ErrorCode::oracle_scale_exceeded,
                        "more than " + std::to_string(cap_) + " strategy assignments");
        }
        return refute ? all_bad(q, goal) : all_good(q, goal);
    }

    bool all_good(StateId q, const Goal& goal) const {
        if (goal.op == PathOp::next) {
            const auto out = outcomes(q);
            return !out.empty() && std::all_of(out.begin(), out.end(), [&](StateId r) { return goal.psi.contains(r); });
        }
        const auto reach = reachable(q, goal);
        for (StateId r : reach) {
            if (!goal.phi.contains(r) && !goal.psi.contains(r)) {
                return false;
            }
        }
        return goal.op == PathOp::weak_until || !has_cycle(q, goal);
    }

    bool all_bad(StateId q, const Goal& goal) const {
        if (goal.op == PathOp::next) {
            const auto out = outcomes(q);
            return std::none_of(out.begin(), out.end(), [&](StateId r) { return goal.psi.contains(r); });
        }
        const auto reach = reachable(q, goal);
        for (StateId r : reach) {
            if (goal.psi.contains(r)) {
                return false;
            }
        }
        return goal.op == PathOp::until || !has_cycle(q, goal);
    }

    // States on outcome paths from q, expanding only through phi-and-not-psi.
    std::vector<StateId> reachable(StateId q, const Goal& goal) const {
        std::vector<char> seen(s_.num_states(), 0);
        std::vector<StateId> order{q};
        seen[q] = 1;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const StateId r = order[k];
            if (!expands(r, goal)) {
                continue;
            }
            for (StateId next : outcomes(r)) {
                if (!seen[next]) {
                    seen[next] = 1;
                    order.push_back(next);
                }
            }
        }
        return order;
    }

    // A cycle through expanding states reachable from q.
    bool has_cycle(StateId q, const Goal& goal) const {
        std::vector<char> colour(s_.num_states(), 0);
        return cycle_from(q, goal, colour);
    }

    bool cycle_from(StateId r, const Goal& goal, std::vector<char>& colour) const {
        if (!expands(r, goal)) {
            return false;
        }
        colour[r] = 1;
        for (StateId next : outcomes(r)) {
            if (colour[next] == 1 && expands(next, goal)) {
                return true;
            }
            if (colour[next] == 0 && cycle_from(next, goal, colour)) {
                return true;
            }
        }
        colour[r] = 2;
        return false;
    }

    const GameStructure& s_;
    std::vector<AgentId> coalition_;
    bool uniform_;
    std::uint64_t cap_;
    std::uint64_t evaluations_ = 0;
    std::map<Key, ActionId> assignment_;
};

class Oracle {
public:
    Oracle(const MvCGS& m, const CheckerConfig& cfg) : m_(m), s_(m.structure()), l_(m.lattice()), cfg_(cfg) {}

    std::vector<Element> value(const Formula& f) {
        const std::size_t n = m_.num_states();
        switch (f.op()) {
        case StateOp::constant:
            return std::vector<Element>(n, m_.interpretation().resolve(f.name()));
        case StateOp::atom: {
            auto p = m_.find_proposition(f.name());
            if (!p) {
                throw Error(ErrorCode::unknown_proposition, f.name());
            }
            auto v = m_.values(*p);
            return {v.begin(), v.end()};
        }
        case StateOp::conj:
        case StateOp::disj:
        case StateOp::implies:
        case StateOp::iff: {
            const auto a = value(f.lhs());
            const auto b = value(f.rhs());
            std::vector<Element> out(n);
            for (StateId q = 0; q < n; ++q) {
                switch (f.op()) {
                case StateOp::conj:
                    out[q] = l_.meet(a[q], b[q]);
                    break;
                case StateOp::disj:
                    out[q] = l_.join(a[q], b[q]);
                    break;
                case StateOp::implies:
                    out[q] = l_.leq(a[q], b[q]) ? l_.top() : l_.bottom();
                    break;
                default:
                    out[q] = a[q] == b[q] ? l_.top() : l_.bottom();
                    break;
                }
            }
            return out;
        }
        case StateOp::coalition:
        case StateOp::no_avoid:
            return strategic(f);
        }
        return {};
    }

private:
    std::vector<Element> strategic(const Formula& f) {
        const PathFormula& g = f.path();
        auto operand = [&](const PathFormula& p) -> Formula {
            if (p.op() != PathOp::state) {
                throw Error(ErrorCode::not_atl_fragment, to_string(f));
            }
            return p.state_formula();
        };
        Formula lhs = Formula::top();
        Formula rhs = Formula::top();
        switch (g.op()) {
        case PathOp::next:
            rhs = operand(g.lhs());
            break;
        case PathOp::until:
        case PathOp::weak_until:
            lhs = operand(g.lhs());
            rhs = operand(g.rhs());
            break;
        default:
            throw Error(ErrorCode::not_atl_fragment, to_string(f));
        }
        const auto a = value(lhs);
        const auto b = value(rhs);
        const std::size_t n = m_.num_states();
        const bool uniform = cfg_.semantics != Semantics::perfect;
        StrategySearch search(s_, s_.coalition(f.agents()), uniform, cfg_.oracle_cap);

        std::vector<Element> out(n, l_.bottom());
        for (Element level : l_.join_irreducibles()) {
            Goal goal{g.op(), StateSet(n), StateSet(n)};
            for (StateId q = 0; q < n; ++q) {
                if (l_.leq(level, a[q])) {
                    goal.phi.insert(q);
                }
                if (l_.leq(level, b[q])) {
                    goal.psi.insert(q);
                }
            }
            for (StateId q = 0; q < n; ++q) {
                cfg_.deadline.check();
                const bool holds = f.op() == StateOp::coalition ? search.exists(q, goal, false)
                                                                : !search.exists(q, goal, true);
                if (holds) {
                    out[q] = l_.join(out[q], level);
                }
            }
        }
        return out;
    }

    const MvCGS& m_;
    const GameStructure& s_;
    const Lattice& l_;
    const CheckerConfig& cfg_;
};

} // namespace

CheckOutcome mv_oracle(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    if (!m.lattice().is_distributive()) {
        throw Error(ErrorCode::not_distributive, "the model's lattice is not distributive");
    }
    if (m.weighted()) {
        throw Error(ErrorCode::invalid_model, "weighted model: prune it with a designated set first");
    }
    const GameStructure& s = m.structure();
    if (s.partial()) {
        throw Error(ErrorCode::invalid_model, "the oracle needs a total transition function");
    }
    for (StateId q = 0; q < s.num_states(); ++q) {
        if (s.dead_end(q)) {
            throw Error(ErrorCode::dead_end, "state '" + s.state_name(q) + "' has no outgoing transition");
        }
    }
    const Formula g = expand_derived(f);
    if (!classify(g).atl_fragment) {
        throw Error(ErrorCode::not_atl_fragment, to_string(f));
    }
    Valuation v(m.lattice_ptr(), Oracle(m, cfg).value(g));
    return CheckOutcome{v, v, {}, {}, {}};
}

} // namespace mvstrat
