#include "mvstrat/mc2.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mvstrat/error.hpp"

namespace mvstrat {

namespace {

// Outgoing transitions of every state grouped by the coalition's part of the
// joint action. Only joint A-actions that occur in some transition count.
class Moves {
public:
    Moves(const GameStructure& s, const std::vector<AgentId>& coalition) : s_(s) {
        const std::size_t n = s.num_states();
        group_offset_.assign(n + 1, 0);
        std::vector<TransitionId> order;
        for (StateId q = 0; q < n; ++q) {
            order.clear();
            for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
                order.push_back(t);
            }
            auto less = [&](TransitionId x, TransitionId y) {
                for (AgentId a : coalition) {
                    if (s.choice(x, a) != s.choice(y, a)) {
                        return s.choice(x, a) < s.choice(y, a);
                    }
                }
                return false;
            };
            std::stable_sort(order.begin(), order.end(), less);
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i == 0 || less(order[i - 1], order[i])) {
                    target_offset_.push_back(static_cast<std::uint32_t>(targets_.size()));
                }
                targets_.push_back(s.to(order[i]));
            }
            group_offset_[q + 1] = static_cast<std::uint32_t>(target_offset_.size());
        }
        target_offset_.push_back(static_cast<std::uint32_t>(targets_.size()));
    }

    [[nodiscard]] StateSet pre(const StateSet& z) const {
        StateSet out(s_.num_states());
        for (StateId q = 0; q < s_.num_states(); ++q) {
            if (s_.dead_end(q)) {
                out.insert(q);
                continue;
            }
            for (std::uint32_t g = group_offset_[q]; g < group_offset_[q + 1]; ++g) {
                bool all = true;
                for (std::uint32_t i = target_offset_[g]; i < target_offset_[g + 1] && all; ++i) {
                    all = z.contains(targets_[i]);
                }
                if (all) {
                    out.insert(q);
                    break;
                }
            }
        }
        return out;
    }

    [[nodiscard]] StateSet pre_dual(const StateSet& z) const {
        StateSet out(s_.num_states());
        for (StateId q = 0; q < s_.num_states(); ++q) {
            if (s_.dead_end(q)) {
                continue;
            }
            bool every = true;
            for (std::uint32_t g = group_offset_[q]; g < group_offset_[q + 1] && every; ++g) {
                bool some = false;
                for (std::uint32_t i = target_offset_[g]; i < target_offset_[g + 1] && !some; ++i) {
                    some = z.contains(targets_[i]);
                }
                every = some;
            }
            if (every) {
                out.insert(q);
            }
        }
        return out;
    }

private:
    const GameStructure& s_;
    std::vector<std::uint32_t> group_offset_;
    std::vector<std::uint32_t> target_offset_;
    std::vector<StateId> targets_;
};

struct Temporal {
    PathOp op;
    Formula lhs; // unused for next
    Formula rhs;
};

Temporal temporal_of(const Formula& f) {
    const PathFormula& g = f.path();
    auto state_arg = [&](const PathFormula& p) -> const Formula& {
        if (p.op() != PathOp::state) {
            throw Error(ErrorCode::not_atl_fragment, to_string(f));
        }
        return p.state_formula();
    };
    switch (g.op()) {
    case PathOp::next:
        return {PathOp::next, Formula::top(), state_arg(g.lhs())};
    case PathOp::until:
    case PathOp::weak_until:
        return {g.op(), state_arg(g.lhs()), state_arg(g.rhs())};
    default:
        throw Error(ErrorCode::not_atl_fragment, to_string(f));
    }
}

Formula prepare(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts) {
    Formula g = expand_derived(f);
    const auto c = classify(g);
    if (!c.atl_fragment) {
        throw Error(ErrorCode::not_atl_fragment, to_string(f));
    }
    if (!c.implication_free) {
        throw Error(ErrorCode::implication_present, to_string(f));
    }
    if (opts.dead_ends == DeadEndPolicy::error) {
        const auto dead = reachable_dead_ends(m.structure());
        if (!dead.empty()) {
            throw Error(ErrorCode::dead_end, "state '" + m.structure().state_name(dead.front()) +
                                                 "' has no outgoing transition");
        }
    }
    return g;
}

StateSet atom_set(const TwoValuedCGS& m, const Formula& f) {
    if (f.op() == StateOp::constant) {
        auto v = m.constant(f.name());
        if (!v) {
            throw Error(ErrorCode::unknown_constant, "#" + f.name());
        }
        return StateSet(m.num_states(), *v);
    }
    return m.holds(f.name());
}

template <class Step>
StateSet least_fixpoint(const StateSet& phi, const StateSet& psi, Step step, const Deadline& deadline) {
    StateSet z = psi;
    for (;;) {
        deadline.check();
        StateSet next = psi | (phi & step(z));
        if (next == z) {
            return z;
        }
        z = std::move(next);
    }
}

template <class Step>
StateSet greatest_fixpoint(const StateSet& phi, const StateSet& psi, Step step, const Deadline& deadline) {
    StateSet z = phi | psi;
    for (;;) {
        deadline.check();
        StateSet next = psi | (phi & step(z));
        if (next == z) {
            return z;
        }
        z = std::move(next);
    }
}

template <class Step>
StateSet solve(PathOp op, const StateSet& phi, const StateSet& psi, Step step, const Deadline& deadline) {
    switch (op) {
    case PathOp::next:
        return step(psi);
    case PathOp::until:
        return least_fixpoint(phi, psi, step, deadline);
    default:
        return greatest_fixpoint(phi, psi, step, deadline);
    }
}

class MovesCache {
public:
    explicit MovesCache(const GameStructure& s) : s_(s) {}

    const Moves& get(const std::vector<AgentId>& coalition) {
        auto it = cache_.find(coalition);
        if (it == cache_.end()) {
            it = cache_.emplace(coalition, Moves(s_, coalition)).first;
        }
        return it->second;
    }

private:
    const GameStructure& s_;
    std::map<std::vector<AgentId>, Moves> cache_;
};

class PerfectChecker {
public:
    PerfectChecker(const TwoValuedCGS& m, const EngineOptions& opts) : m_(m), opts_(opts), moves_(m.structure()) {}

    StateSet eval(const Formula& f) {
        switch (f.op()) {
        case StateOp::constant:
        case StateOp::atom:
            return atom_set(m_, f);
        case StateOp::conj:
            return eval(f.lhs()) & eval(f.rhs());
        case StateOp::disj:
            return eval(f.lhs()) | eval(f.rhs());
        case StateOp::coalition:
        case StateOp::no_avoid: {
            const Temporal t = temporal_of(f);
            const StateSet phi = eval(t.lhs);
            const StateSet psi = eval(t.rhs);
            return strategic(f.op(), m_.structure().coalition(f.agents()), t.op, phi, psi);
        }
        default:
            throw Error(ErrorCode::implication_present, to_string(f));
        }
    }

    StateSet strategic(StateOp kind, const std::vector<AgentId>& coalition, PathOp op, const StateSet& phi,
                       const StateSet& psi) {
        const Moves& mv = moves_.get(coalition);
        if (kind == StateOp::coalition) {
            return solve(op, phi, psi, [&](const StateSet& z) { return mv.pre(z); }, opts_.deadline);
        }
        return solve(op, phi, psi, [&](const StateSet& z) { return mv.pre_dual(z); }, opts_.deadline);
    }

private:
    const TwoValuedCGS& m_;
    const EngineOptions& opts_;
    MovesCache moves_;
};

// Actions available at every non-dead-end member of a set of states.
std::vector<ActionId> common_actions(const GameStructure& s, AgentId a, std::span<const StateId> states) {
    std::optional<std::vector<ActionId>> acc;
    for (StateId q : states) {
        if (s.dead_end(q)) {
            continue;
        }
        auto av = s.available(a, q);
        std::vector<ActionId> here(av.begin(), av.end());
        std::sort(here.begin(), here.end());
        if (!acc) {
            acc = std::move(here);
        } else {
            std::vector<ActionId> both;
            std::set_intersection(acc->begin(), acc->end(), here.begin(), here.end(), std::back_inserter(both));
            acc = std::move(both);
        }
    }
    return acc ? *acc : std::vector<ActionId>{};
}

class IrChecker {
public:
    IrChecker(const TwoValuedCGS& m, const EngineOptions& opts) : m_(m), s_(m.structure()), opts_(opts) {}

    StateSet eval(const Formula& f) {
        switch (f.op()) {
        case StateOp::constant:
        case StateOp::atom:
            return atom_set(m_, f);
        case StateOp::conj:
            return eval(f.lhs()) & eval(f.rhs());
        case StateOp::disj:
            return eval(f.lhs()) | eval(f.rhs());
        case StateOp::coalition:
        case StateOp::no_avoid: {
            const Temporal t = temporal_of(f);
            const StateSet phi = eval(t.lhs);
            const StateSet psi = eval(t.rhs);
            return enumerate(f.op() == StateOp::coalition, s_.coalition(f.agents()), t.op, phi, psi);
        }
        default:
            throw Error(ErrorCode::implication_present, to_string(f));
        }
    }

    std::optional<UniformStrategy> last_witness;
    std::uint64_t strategies = 0;

private:
    StateSet enumerate(bool forall, const std::vector<AgentId>& coalition, PathOp op, const StateSet& phi,
                       const StateSet& psi) {
        const std::size_t n = s_.num_states();
        // options[i][c]: choices of coalition member i in its class c.
        std::vector<std::vector<std::vector<ActionId>>> options(coalition.size());
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < coalition.size(); ++i) {
            const AgentId a = coalition[i];
            for (std::uint32_t c = 0; c < s_.class_count(a); ++c) {
                auto opts = common_actions(s_, a, s_.class_members(a, c));
                if (opts.empty()) {
                    opts.push_back(no_position);
                }
                if (total > opts_.strategy_cap / opts.size()) {
                    throw Error(ErrorCode::strategy_space_too_large,
                                "more than " + std::to_string(opts_.strategy_cap) + " uniform strategies");
                }
                total *= opts.size();
                options[i].push_back(std::move(opts));
            }
        }
        if (total > opts_.strategy_cap) {
            throw Error(ErrorCode::strategy_space_too_large,
                        "more than " + std::to_string(opts_.strategy_cap) + " uniform strategies");
        }

        std::vector<std::vector<std::size_t>> digit(coalition.size());
        for (std::size_t i = 0; i < coalition.size(); ++i) {
            digit[i].assign(options[i].size(), 0);
        }

        StateSet acc(n, !forall);
        last_witness.reset();
        std::vector<std::uint32_t> offset(n + 1);
        std::vector<StateId> succ;
        succ.reserve(s_.num_transitions());

        for (std::uint64_t k = 0; k < total; ++k) {
            if ((k & 1023U) == 0) {
                opts_.deadline.check();
            }
            ++strategies;
            succ.clear();
            for (StateId q = 0; q < n; ++q) {
                offset[q] = static_cast<std::uint32_t>(succ.size());
                for (TransitionId t = s_.out_begin(q); t < s_.out_end(q); ++t) {
                    bool ok = true;
                    auto joint = s_.joint(t);
                    for (std::size_t i = 0; i < coalition.size() && ok; ++i) {
                        const AgentId a = coalition[i];
                        const std::uint32_t c = s_.class_of(a, q);
                        ok = joint[a] == options[i][c][digit[i][c]];
                    }
                    if (ok) {
                        succ.push_back(s_.to(t));
                    }
                }
            }
            offset[n] = static_cast<std::uint32_t>(succ.size());

            // A state whose every transition disagrees with the strategy is
            // losing for <<A>> and cannot refute [[A]].
            auto step = [&](const StateSet& z) {
                StateSet out(n);
                for (StateId q = 0; q < n; ++q) {
                    const bool real_dead = s_.dead_end(q);
                    const bool cut = !real_dead && offset[q] == offset[q + 1];
                    bool in;
                    if (forall) {
                        in = real_dead || (!cut && std::all_of(succ.begin() + offset[q], succ.begin() + offset[q + 1],
                                                               [&](StateId r) { return z.contains(r); }));
                    } else {
                        in = cut || (!real_dead && std::any_of(succ.begin() + offset[q],
                                                               succ.begin() + offset[q + 1],
                                                               [&](StateId r) { return z.contains(r); }));
                    }
                    if (in) {
                        out.insert(q);
                    }
                }
                return out;
            };
            const StateSet sat = solve(op, phi, psi, step, opts_.deadline);

            if (forall) {
                if (!last_witness && sat.contains(s_.initial())) {
                    UniformStrategy w{coalition, {}};
                    for (std::size_t i = 0; i < coalition.size(); ++i) {
                        std::vector<ActionId> acts;
                        for (std::size_t c = 0; c < options[i].size(); ++c) {
                            acts.push_back(options[i][c][digit[i][c]]);
                        }
                        w.actions.push_back(std::move(acts));
                    }
                    last_witness = std::move(w);
                }
                acc |= sat;
                if (acc.full()) {
                    break;
                }
            } else {
                acc &= sat;
                if (acc.empty()) {
                    break;
                }
            }

            // Odometer; the last class of the last member moves fastest.
            for (std::size_t i = coalition.size(); i-- > 0;) {
                bool carry = false;
                for (std::size_t c = options[i].size(); c-- > 0;) {
                    if (++digit[i][c] < options[i][c].size()) {
                        carry = false;
                        break;
                    }
                    digit[i][c] = 0;
                    carry = true;
                }
                if (!carry) {
                    break;
                }
            }
        }
        return acc;
    }

    const TwoValuedCGS& m_;
    const GameStructure& s_;
    const EngineOptions& opts_;
};

// Transitive closure of the coalition's indistinguishability relations.
std::vector<std::vector<StateId>> common_classes(const GameStructure& s, const std::vector<AgentId>& coalition) {
    const std::size_t n = s.num_states();
    std::vector<StateId> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](StateId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (AgentId a : coalition) {
        for (std::uint32_t c = 0; c < s.class_count(a); ++c) {
            auto members = s.class_members(a, c);
            for (std::size_t i = 1; i < members.size(); ++i) {
                const StateId x = find(members[0]);
                const StateId y = find(members[i]);
                if (x != y) {
                    parent[std::max(x, y)] = std::min(x, y);
                }
            }
        }
    }
    std::vector<std::vector<StateId>> classes;
    std::vector<std::int64_t> index(n, -1);
    for (StateId q = 0; q < n; ++q) {
        const StateId r = find(q);
        if (index[r] < 0) {
            index[r] = static_cast<std::int64_t>(classes.size());
            classes.emplace_back();
        }
        classes[static_cast<std::size_t>(index[r])].push_back(q);
    }
    return classes;
}

class ApproxChecker {
public:
    ApproxChecker(const TwoValuedCGS& m, const EngineOptions& opts)
        : m_(m), s_(m.structure()), opts_(opts), perfect_(m, opts) {}

    // Each bound only depends on the same bound of the operands.
    StateSet eval(const Formula& f, Side side) {
        switch (f.op()) {
        case StateOp::constant:
        case StateOp::atom:
            return atom_set(m_, f);
        case StateOp::conj:
            return eval(f.lhs(), side) & eval(f.rhs(), side);
        case StateOp::disj:
            return eval(f.lhs(), side) | eval(f.rhs(), side);
        case StateOp::coalition:
        case StateOp::no_avoid: {
            const Temporal t = temporal_of(f);
            const StateSet phi = eval(t.lhs, side);
            const StateSet psi = eval(t.rhs, side);
            const auto coalition = s_.coalition(f.agents());
            if (f.op() == StateOp::coalition) {
                return side == Side::lower ? lower_coalition(coalition, t.op, phi, psi)
                                           : perfect_.strategic(StateOp::coalition, coalition, t.op, phi, psi);
            }
            if (side == Side::lower) {
                return perfect_.strategic(StateOp::no_avoid, coalition, t.op, phi, psi);
            }
            // [[A]] g is the complement of <<A>> not-g.
            const StateSet nphi = phi.complement();
            const StateSet npsi = psi.complement();
            switch (t.op) {
            case PathOp::next:
                return lower_coalition(coalition, PathOp::next, StateSet::all(s_.num_states()), npsi).complement();
            case PathOp::until:
                return lower_coalition(coalition, PathOp::weak_until, npsi, nphi & npsi).complement();
            default:
                return lower_coalition(coalition, PathOp::until, npsi, nphi & npsi).complement();
            }
        }
        default:
            throw Error(ErrorCode::implication_present, to_string(f));
        }
    }

private:
    // Members of claim whose common-knowledge class has one joint action that
    // keeps every claimed member's outcomes inside z.
    StateSet pre_uniform(const std::vector<AgentId>& coalition, const std::vector<std::vector<StateId>>& classes,
                         const StateSet& z, const StateSet& claim) const {
        StateSet out(s_.num_states());
        std::vector<StateId> claimed;
        for (const auto& k : classes) {
            claimed.clear();
            for (StateId q : k) {
                if (claim.contains(q)) {
                    claimed.push_back(q);
                }
            }
            if (claimed.empty()) {
                continue;
            }
            std::vector<std::vector<ActionId>> options;
            bool possible = true;
            for (AgentId a : coalition) {
                options.push_back(common_actions(s_, a, k));
                if (options.back().empty()) {
                    possible = false;
                }
            }
            const bool all_dead = std::all_of(claimed.begin(), claimed.end(), [&](StateId q) { return s_.dead_end(q); });
            if (!possible && !all_dead) {
                continue;
            }
            if (!possible) {
                options.assign(coalition.size(), {no_position});
            }
            std::vector<std::size_t> digit(coalition.size(), 0);
            bool found = false;
            for (;;) {
                bool ok = true;
                for (StateId q : claimed) {
                    if (s_.dead_end(q)) {
                        continue;
                    }
                    bool matched = false;
                    for (TransitionId t = s_.out_begin(q); t < s_.out_end(q) && ok; ++t) {
                        auto joint = s_.joint(t);
                        bool match = true;
                        for (std::size_t i = 0; i < coalition.size() && match; ++i) {
                            match = joint[coalition[i]] == options[i][digit[i]];
                        }
                        if (match) {
                            matched = true;
                            ok = z.contains(s_.to(t));
                        }
                    }
                    if (!ok || !matched) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    found = true;
                    break;
                }
                std::size_t i = coalition.size();
                while (i-- > 0) {
                    if (++digit[i] < options[i].size()) {
                        break;
                    }
                    digit[i] = 0;
                }
                if (i == static_cast<std::size_t>(-1)) {
                    break;
                }
            }
            if (found) {
                for (StateId q : claimed) {
                    out.insert(q);
                }
            }
        }
        return out;
    }

    StateSet lower_coalition(const std::vector<AgentId>& coalition, PathOp op, const StateSet& phi,
                             const StateSet& psi) {
        const auto classes = common_classes(s_, coalition);
        const std::size_t n = s_.num_states();
        switch (op) {
        case PathOp::next:
            return pre_uniform(coalition, classes, psi, StateSet::all(n));
        case PathOp::until: {
            const StateSet claim = phi & psi.complement();
            StateSet z = psi;
            for (;;) {
                opts_.deadline.check();
                StateSet next = psi | pre_uniform(coalition, classes, z, claim);
                if (next == z) {
                    return z;
                }
                z = std::move(next);
            }
        }
        default: {
            StateSet z = phi | psi;
            for (;;) {
                opts_.deadline.check();
                const StateSet claim = z & phi & psi.complement();
                StateSet next = psi | pre_uniform(coalition, classes, z, claim);
                if (next == z) {
                    return z;
                }
                z = std::move(next);
            }
        }
        }
    }

    const TwoValuedCGS& m_;
    const GameStructure& s_;
    const EngineOptions& opts_;
    PerfectChecker perfect_;
};

} // namespace

StateSet pre(const GameStructure& s, const std::vector<AgentId>& coalition, const StateSet& q) {
    return Moves(s, coalition).pre(q);
}

StateSet pre_dual(const GameStructure& s, const std::vector<AgentId>& coalition, const StateSet& q) {
    return Moves(s, coalition).pre_dual(q);
}

StateSet mc_atl_perfect(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts) {
    const Formula g = prepare(m, f, opts);
    return PerfectChecker(m, opts).eval(g);
}

IrResult mc_atl_ir_exact(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts) {
    const Formula g = prepare(m, f, opts);
    IrChecker checker(m, opts);
    IrResult out{checker.eval(g), std::nullopt, 0};
    if (g.op() == StateOp::coalition) {
        out.witness = checker.last_witness;
    }
    out.strategies = checker.strategies;
    return out;
}

Bounds mc_atl_ir_bounds(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts) {
    const Formula g = prepare(m, f, opts);
    ApproxChecker checker(m, opts);
    return {checker.eval(g, Side::lower), checker.eval(g, Side::upper)};
}

StateSet mc_atl_ir_approx(const TwoValuedCGS& m, const Formula& f, Side side, const EngineOptions& opts) {
    const Formula g = prepare(m, f, opts);
    return ApproxChecker(m, opts).eval(g, side);
}

} // namespace mvstrat
