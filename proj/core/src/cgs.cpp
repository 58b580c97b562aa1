#include "mvstrat/cgs.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "hash.hpp"
#include "mvstrat/error.hpp"

namespace mvstrat {

namespace {

template <class Map>
std::optional<std::uint32_t> lookup(const Map& m, std::string_view name) {
    auto it = m.find(std::string(name));
    if (it == m.end()) {
        return std::nullopt;
    }
    return it->second;
}

template <class Map>
std::uint32_t intern(std::vector<std::string>& names, Map& index, std::string_view name) {
    auto [it, fresh] = index.emplace(std::string(name), static_cast<std::uint32_t>(names.size()));
    if (fresh) {
        names.emplace_back(name);
    }
    return it->second;
}

} // namespace

std::optional<AgentId> GameStructure::find_agent(std::string_view name) const { return lookup(agent_index_, name); }
std::optional<StateId> GameStructure::find_state(std::string_view name) const { return lookup(state_index_, name); }
std::optional<ActionId> GameStructure::find_action(std::string_view name) const {
    return lookup(action_index_, name);
}

AgentId GameStructure::agent(std::string_view name) const {
    if (auto a = find_agent(name)) {
        return *a;
    }
    throw Error(ErrorCode::unknown_agent, "'" + std::string(name) + "'");
}

StateId GameStructure::state(std::string_view name) const {
    if (auto q = find_state(name)) {
        return *q;
    }
    throw Error(ErrorCode::unknown_state, "'" + std::string(name) + "'");
}

std::vector<AgentId> GameStructure::coalition(const std::vector<std::string>& names) const {
    std::vector<AgentId> out;
    for (const auto& n : names) {
        out.push_back(agent(n));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::span<const ActionId> GameStructure::available(AgentId a, StateId q) const {
    const std::size_t k = static_cast<std::size_t>(q) * agents_.size() + a;
    return {avail_.data() + avail_offset_[k], avail_offset_[k + 1] - avail_offset_[k]};
}

std::span<const ActionId> GameStructure::joint(TransitionId t) const {
    return {joint_.data() + static_cast<std::size_t>(t) * agents_.size(), agents_.size()};
}

std::uint32_t GameStructure::class_of(AgentId a, StateId q) const { return class_of_.at(a).at(q); }

std::size_t GameStructure::class_count(AgentId a) const { return classes_.at(a).size(); }

std::span<const StateId> GameStructure::class_members(AgentId a, std::uint32_t cls) const {
    return classes_.at(a).at(cls);
}

bool GameStructure::epistemic_declared(AgentId a) const { return declared_flag_.at(a); }

std::span<const std::vector<StateId>> GameStructure::declared_classes(AgentId a) const {
    return declared_.at(a);
}

void GameStructure::finish() {
    const std::size_t na = agents_.size();
    const std::size_t nt = to_.size();
    choice_.assign(nt * na, no_position);
    for (TransitionId t = 0; t < nt; ++t) {
        for (AgentId a = 0; a < na; ++a) {
            auto av = available(a, from_[t]);
            auto it = std::find(av.begin(), av.end(), joint_[t * na + a]);
            if (it != av.end()) {
                choice_[t * na + a] = static_cast<std::uint32_t>(it - av.begin());
            }
        }
    }

    declared_.resize(na);
    declared_flag_.assign(na, false);
    class_of_.assign(na, {});
    classes_.assign(na, {});
    for (AgentId a = 0; a < na; ++a) {
        auto& of = class_of_[a];
        auto& cls = classes_[a];
        of.assign(states_.size(), no_position);
        if (!declared_[a].empty()) {
            declared_flag_[a] = true;
            any_declared_ = true;
            for (const auto& c : declared_[a]) {
                const auto id = static_cast<std::uint32_t>(cls.size());
                cls.emplace_back();
                for (StateId q : c) {
                    if (of[q] == no_position) {
                        of[q] = id;
                        cls.back().push_back(q);
                    }
                }
                if (cls.back().empty()) {
                    cls.pop_back();
                }
            }
        }
        for (StateId q = 0; q < states_.size(); ++q) {
            if (of[q] == no_position) {
                of[q] = static_cast<std::uint32_t>(cls.size());
                cls.push_back({q});
            }
        }
    }

    detail::Fnv h;
    for (const auto& v : {&agents_, &states_, &actions_}) {
        h.u64(v->size());
        for (const auto& s : *v) {
            h.text(s);
        }
    }
    h.u64(initial_);
    h.bytes(avail_offset_.data(), avail_offset_.size() * sizeof(std::uint32_t));
    h.bytes(avail_.data(), avail_.size() * sizeof(ActionId));
    h.bytes(from_.data(), from_.size() * sizeof(StateId));
    h.bytes(to_.data(), to_.size() * sizeof(StateId));
    h.bytes(joint_.data(), joint_.size() * sizeof(ActionId));
    for (AgentId a = 0; a < na; ++a) {
        h.bytes(class_of_[a].data(), class_of_[a].size() * sizeof(std::uint32_t));
    }
    h.u64(partial_ ? 1 : 0);
    fingerprint_ = h.value();
}

std::optional<std::size_t> MvCGS::find_proposition(std::string_view name) const {
    auto it = prop_index_.find(std::string(name));
    if (it == prop_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Element MvCGS::value(std::string_view prop, StateId q) const {
    auto p = find_proposition(prop);
    if (!p) {
        throw Error(ErrorCode::unknown_proposition, "'" + std::string(prop) + "'");
    }
    return values_[*p].at(q);
}

void MvCGS::finish() {
    prop_index_.clear();
    for (std::size_t i = 0; i < props_.size(); ++i) {
        prop_index_.emplace(props_[i], i);
    }
    detail::Fnv h;
    h.u64(structure_->fingerprint());
    const Lattice& l = lattice();
    for (Element e : l.elements()) {
        h.text(l.name(e));
    }
    for (const auto& [c, e] : lattice_.constants()) {
        h.text(c);
        h.u64(e.id);
    }
    for (std::size_t i = 0; i < props_.size(); ++i) {
        h.text(props_[i]);
        h.bytes(values_[i].data(), values_[i].size() * sizeof(Element));
    }
    if (weight_lattice_) {
        for (Element e : weight_lattice_->elements()) {
            h.text(weight_lattice_->name(e));
        }
        h.bytes(weights_.data(), weights_.size() * sizeof(Element));
    }
    fingerprint_ = h.value();
}

MvCGS MvCGS::with_proposition(const std::string& name, std::vector<Element> values) const {
    if (values.size() != num_states()) {
        throw Error(ErrorCode::invalid_model, "valuation of '" + name + "' has the wrong length");
    }
    MvCGS out(*this);
    if (auto p = find_proposition(name)) {
        out.values_[*p] = std::move(values);
    } else {
        out.props_.push_back(name);
        out.values_.push_back(std::move(values));
    }
    out.finish();
    return out;
}

MvCGS MvCGS::relabel(InterpretedLattice lattice, std::vector<std::vector<Element>> values,
                     LatticePtr weight_lattice, std::vector<Element> weights) const {
    if (values.size() != props_.size()) {
        throw Error(ErrorCode::invalid_model, "relabel needs one value vector per proposition");
    }
    MvCGS out;
    out.structure_ = structure_;
    out.lattice_ = std::move(lattice);
    out.props_ = props_;
    out.values_ = std::move(values);
    out.weight_lattice_ = std::move(weight_lattice);
    out.weights_ = std::move(weights);
    out.finish();
    return out;
}

MvCGSBuilder::MvCGSBuilder(InterpretedLattice lattice) : lattice_(std::move(lattice)) {}

AgentId MvCGSBuilder::agent(std::string_view name) { return intern(agents_, agent_index_, name); }
StateId MvCGSBuilder::state(std::string_view name) { return intern(states_, state_index_, name); }
ActionId MvCGSBuilder::action(std::string_view name) { return intern(actions_, action_index_, name); }

MvCGSBuilder& MvCGSBuilder::initial(StateId q) {
    initial_ = q;
    return *this;
}

MvCGSBuilder& MvCGSBuilder::available(AgentId a, StateId q, std::vector<ActionId> actions) {
    available_.push_back({{a, q}, std::move(actions)});
    return *this;
}

MvCGSBuilder& MvCGSBuilder::transition(StateId from, std::vector<ActionId> joint, StateId to,
                                       std::optional<Element> weight) {
    transitions_.push_back({from, std::move(joint), to, weight});
    return *this;
}

MvCGSBuilder& MvCGSBuilder::proposition(std::string_view name) {
    auto [it, fresh] = prop_index_.emplace(std::string(name), props_.size());
    if (fresh) {
        props_.emplace_back(name);
        values_.emplace_back();
    }
    return *this;
}

MvCGSBuilder& MvCGSBuilder::value(std::string_view prop, StateId q, Element v) {
    proposition(prop);
    values_[prop_index_.at(std::string(prop))].emplace_back(q, v);
    return *this;
}

MvCGSBuilder& MvCGSBuilder::weight_lattice(LatticePtr lattice) {
    weight_lattice_ = std::move(lattice);
    return *this;
}

MvCGSBuilder& MvCGSBuilder::epistemic(AgentId a, std::vector<std::vector<StateId>> classes) {
    epistemic_.emplace_back(a, std::move(classes));
    return *this;
}

MvCGSBuilder& MvCGSBuilder::partial(bool allow) {
    partial_ = allow;
    return *this;
}

MvCGS MvCGSBuilder::build() const {
    if (states_.empty()) {
        throw Error(ErrorCode::invalid_model, "a model needs at least one state");
    }
    const std::size_t na = agents_.size();
    const std::size_t ns = states_.size();
    auto check_state = [&](StateId q) {
        if (q >= ns) {
            throw Error(ErrorCode::invalid_model, "state index " + std::to_string(q) + " out of range");
        }
    };
    auto check_action = [&](ActionId x) {
        if (x >= actions_.size()) {
            throw Error(ErrorCode::invalid_model, "action index " + std::to_string(x) + " out of range");
        }
    };

    auto s = std::make_shared<GameStructure>();
    s->agents_ = agents_;
    s->states_ = states_;
    s->actions_ = actions_;
    s->agent_index_ = agent_index_;
    s->state_index_ = state_index_;
    s->action_index_ = action_index_;
    s->initial_ = initial_.value_or(0);
    check_state(s->initial_);
    s->partial_ = partial_;

    std::vector<const PendingTransition*> order;
    for (const auto& t : transitions_) {
        check_state(t.from);
        check_state(t.to);
        if (t.joint.size() != na) {
            throw Error(ErrorCode::invalid_model, "transition from '" + states_[t.from] + "' has " +
                                                      std::to_string(t.joint.size()) + " actions for " +
                                                      std::to_string(na) + " agents");
        }
        for (ActionId x : t.joint) {
            check_action(x);
        }
        if (t.weight && !weight_lattice_) {
            throw Error(ErrorCode::invalid_model, "weighted transition without a weight lattice");
        }
        if (t.weight && !weight_lattice_->contains(*t.weight)) {
            throw Error(ErrorCode::unknown_element, "transition weight outside the weight lattice");
        }
        order.push_back(&t);
    }
    std::stable_sort(order.begin(), order.end(), [](const PendingTransition* x, const PendingTransition* y) {
        return std::tie(x->from, x->joint) < std::tie(y->from, y->joint);
    });
    s->out_offset_.assign(ns + 1, 0);
    std::vector<Element> weights;
    for (const auto* t : order) {
        s->from_.push_back(t->from);
        s->to_.push_back(t->to);
        s->joint_.insert(s->joint_.end(), t->joint.begin(), t->joint.end());
        ++s->out_offset_[t->from + 1];
        if (weight_lattice_) {
            weights.push_back(t->weight.value_or(Element{no_position}));
        }
    }
    for (std::size_t q = 0; q < ns; ++q) {
        s->out_offset_[q + 1] += s->out_offset_[q];
    }

    std::map<std::pair<AgentId, StateId>, std::vector<ActionId>> explicit_d;
    for (const auto& [key, acts] : available_) {
        if (key.first >= na) {
            throw Error(ErrorCode::invalid_model, "agent index out of range");
        }
        check_state(key.second);
        for (ActionId x : acts) {
            check_action(x);
        }
        auto& slot = explicit_d[key];
        slot = acts;
        std::sort(slot.begin(), slot.end());
        slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
    }
    s->avail_offset_.push_back(0);
    for (StateId q = 0; q < ns; ++q) {
        for (AgentId a = 0; a < na; ++a) {
            std::vector<ActionId> acts;
            if (auto it = explicit_d.find({a, q}); it != explicit_d.end()) {
                acts = it->second;
            } else {
                for (TransitionId t = s->out_offset_[q]; t < s->out_offset_[q + 1]; ++t) {
                    acts.push_back(s->joint_[t * na + a]);
                }
                std::sort(acts.begin(), acts.end());
                acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
            }
            s->avail_.insert(s->avail_.end(), acts.begin(), acts.end());
            s->avail_offset_.push_back(static_cast<std::uint32_t>(s->avail_.size()));
        }
    }

    s->declared_.assign(na, {});
    for (const auto& [a, classes] : epistemic_) {
        if (a >= na) {
            throw Error(ErrorCode::invalid_model, "agent index out of range");
        }
        for (const auto& c : classes) {
            for (StateId q : c) {
                check_state(q);
            }
        }
        s->declared_[a] = classes;
    }
    s->finish();

    MvCGS m;
    m.structure_ = std::move(s);
    m.lattice_ = lattice_;
    m.props_ = props_;
    m.values_.assign(props_.size(), std::vector<Element>(ns, lattice_.lattice().bottom()));
    for (std::size_t p = 0; p < props_.size(); ++p) {
        for (const auto& [q, v] : values_[p]) {
            check_state(q);
            if (!lattice_.lattice().contains(v)) {
                throw Error(ErrorCode::unknown_element, "value of '" + props_[p] + "' outside the lattice");
            }
            m.values_[p][q] = v;
        }
    }
    m.weight_lattice_ = weight_lattice_;
    m.weights_ = std::move(weights);
    m.finish();
    return m;
}

namespace {

std::string joint_text(const GameStructure& s, std::span<const ActionId> joint) {
    std::string out = "(";
    for (std::size_t i = 0; i < joint.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += s.action_name(joint[i]);
    }
    return out + ")";
}

} // namespace

std::vector<Violation> validate(const MvCGS& m) {
    std::vector<Violation> out;
    const GameStructure& s = m.structure();
    const std::size_t na = s.num_agents();
    if (s.num_states() == 0) {
        out.push_back({ViolationKind::no_states, "model has no states"});
        return out;
    }
    for (StateId q = 0; q < s.num_states(); ++q) {
        const bool tolerated = s.partial() && s.dead_end(q);
        std::uint64_t expected = 1;
        for (AgentId a = 0; a < na; ++a) {
            const auto n = s.available(a, q).size();
            if (n == 0 && !tolerated) {
                out.push_back({ViolationKind::empty_availability,
                               "no action available to agent '" + s.agent_name(a) + "' at '" + s.state_name(q) + "'"});
            }
            expected = std::min<std::uint64_t>(expected * n, std::uint64_t{1} << 40);
        }
        std::set<std::vector<std::uint32_t>> seen;
        for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
            std::vector<std::uint32_t> key;
            bool ok = true;
            for (AgentId a = 0; a < na; ++a) {
                if (s.choice(t, a) == no_position) {
                    ok = false;
                    out.push_back({ViolationKind::unavailable_action,
                                   "transition " + joint_text(s, s.joint(t)) + " at '" + s.state_name(q) +
                                       "' uses an action unavailable to agent '" + s.agent_name(a) + "'"});
                }
                key.push_back(s.choice(t, a));
            }
            if (ok && !seen.insert(key).second) {
                out.push_back({ViolationKind::duplicate_transition,
                               "joint action " + joint_text(s, s.joint(t)) + " at '" + s.state_name(q) +
                                   "' has more than one target"});
            }
        }
        if (!s.partial() && seen.size() < expected) {
            // Report the first missing joint action in mixed-radix order.
            std::vector<std::uint32_t> key(na, 0);
            std::string missing;
            for (std::uint64_t i = 0; i < expected && i < 1'000'000; ++i) {
                if (!seen.contains(key)) {
                    std::vector<ActionId> acts;
                    for (AgentId a = 0; a < na; ++a) {
                        acts.push_back(s.available(a, q)[key[a]]);
                    }
                    missing = joint_text(s, acts);
                    break;
                }
                for (std::size_t a = na; a-- > 0;) {
                    if (++key[a] < s.available(static_cast<AgentId>(a), q).size()) {
                        break;
                    }
                    key[a] = 0;
                }
            }
            out.push_back({ViolationKind::missing_transition,
                           "no transition for joint action " + missing + " at '" + s.state_name(q) + "'"});
        }
    }
    if (m.weighted()) {
        for (TransitionId t = 0; t < s.num_transitions(); ++t) {
            if (!m.weight_lattice()->contains(m.weights()[t])) {
                out.push_back({ViolationKind::missing_weight, "transition " + joint_text(s, s.joint(t)) + " at '" +
                                                                  s.state_name(s.from(t)) + "' has no weight"});
            }
        }
    }
    for (AgentId a = 0; a < na; ++a) {
        if (!s.epistemic_declared(a)) {
            continue;
        }
        std::vector<std::uint32_t> hits(s.num_states(), 0);
        for (const auto& c : s.declared_classes(a)) {
            for (StateId q : c) {
                ++hits[q];
            }
        }
        for (StateId q = 0; q < s.num_states(); ++q) {
            if (hits[q] != 1) {
                out.push_back({ViolationKind::epistemic_not_partition,
                               "state '" + s.state_name(q) + "' appears in " + std::to_string(hits[q]) +
                                   " epistemic classes of agent '" + s.agent_name(a) + "'"});
            }
        }
        for (std::uint32_t c = 0; c < s.class_count(a); ++c) {
            auto members = s.class_members(a, c);
            for (StateId q : members) {
                auto d0 = s.available(a, members.front());
                auto dq = s.available(a, q);
                if (!std::equal(d0.begin(), d0.end(), dq.begin(), dq.end())) {
                    out.push_back({ViolationKind::non_uniform,
                                   "agent '" + s.agent_name(a) + "' cannot distinguish '" +
                                       s.state_name(members.front()) + "' and '" + s.state_name(q) +
                                       "' but has different actions there"});
                }
            }
        }
    }
    return out;
}

void ensure_valid(const MvCGS& m) {
    auto v = validate(m);
    if (v.empty()) {
        return;
    }
    std::string msg = v.front().message;
    if (v.size() > 1) {
        msg += " (and " + std::to_string(v.size() - 1) + " more)";
    }
    throw Error(ErrorCode::invalid_model, msg);
}

std::vector<Successor> successors(const MvCGS& m, StateId q) {
    const GameStructure& s = m.structure();
    if (q >= s.num_states()) {
        throw Error(ErrorCode::unknown_state, "state index " + std::to_string(q));
    }
    std::vector<Successor> out;
    for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
        auto j = s.joint(t);
        out.push_back({std::vector<ActionId>(j.begin(), j.end()), s.to(t)});
    }
    return out;
}

std::vector<Successor> successors(const MvCGS& m, std::string_view state) {
    return successors(m, m.structure().state(state));
}

PruneResult prune_designated(const MvCGS& m, const std::vector<Element>& designated) {
    if (!m.weighted()) {
        throw Error(ErrorCode::invalid_model, "designated-value pruning needs transition weights");
    }
    const GameStructure& s = m.structure();
    MvCGSBuilder b(m.interpretation());
    for (const auto& a : s.agents()) {
        b.agent(a);
    }
    for (const auto& q : s.states()) {
        b.state(q);
    }
    for (const auto& x : s.actions()) {
        b.action(x);
    }
    b.initial(s.initial());
    for (TransitionId t = 0; t < s.num_transitions(); ++t) {
        if (std::find(designated.begin(), designated.end(), m.weights()[t]) != designated.end()) {
            auto j = s.joint(t);
            b.transition(s.from(t), std::vector<ActionId>(j.begin(), j.end()), s.to(t));
        }
    }
    for (AgentId a = 0; a < s.num_agents(); ++a) {
        if (!s.epistemic_declared(a)) {
            continue;
        }
        std::vector<std::vector<StateId>> classes;
        for (std::uint32_t c = 0; c < s.class_count(a); ++c) {
            auto mem = s.class_members(a, c);
            classes.emplace_back(mem.begin(), mem.end());
        }
        b.epistemic(a, std::move(classes));
    }
    for (std::size_t p = 0; p < m.propositions().size(); ++p) {
        b.proposition(m.propositions()[p]);
        auto vals = m.values(p);
        for (StateId q = 0; q < s.num_states(); ++q) {
            b.value(m.propositions()[p], q, vals[q]);
        }
    }
    b.partial(true);
    PruneResult r{b.build(), {}};
    for (StateId q = 0; q < s.num_states(); ++q) {
        if (r.model.structure().dead_end(q)) {
            r.dead_ends.push_back(q);
        }
    }
    return r;
}

std::vector<StateId> reachable_dead_ends(const GameStructure& s) {
    std::vector<bool> seen(s.num_states(), false);
    std::deque<StateId> queue{s.initial()};
    seen[s.initial()] = true;
    std::vector<StateId> out;
    while (!queue.empty()) {
        const StateId q = queue.front();
        queue.pop_front();
        if (s.dead_end(q)) {
            out.push_back(q);
        }
        for (TransitionId t = s.out_begin(q); t < s.out_end(q); ++t) {
            if (!seen[s.to(t)]) {
                seen[s.to(t)] = true;
                queue.push_back(s.to(t));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

LatticePtr may_must_weight_lattice() {
    static const LatticePtr l = Lattice::make({"bot", "U", "top"}, {{"bot", "U"}, {"U", "top"}});
    return l;
}

MvCGS from_may_must(const MayMustStructure& k) {
    const std::size_t n = k.states.size();
    if (n == 0) {
        throw Error(ErrorCode::invalid_model, "may/must structure has no states");
    }
    auto in_range = [&](const std::pair<StateId, StateId>& e) { return e.first < n && e.second < n; };
    std::set<std::pair<StateId, StateId>> may(k.may.begin(), k.may.end());
    std::set<std::pair<StateId, StateId>> must(k.must.begin(), k.must.end());
    for (const auto& e : may) {
        if (!in_range(e)) {
            throw Error(ErrorCode::invalid_model, "may edge references an unknown state");
        }
    }
    for (const auto& e : must) {
        if (!may.contains(e)) {
            throw Error(ErrorCode::invalid_model, "must edge (" + k.states.at(e.first) + ", " +
                                                      k.states.at(e.second) + ") is not a may edge");
        }
    }
    std::vector<bool> has_succ(n, false);
    for (const auto& e : may) {
        has_succ[e.first] = true;
    }
    for (StateId q = 0; q < n; ++q) {
        if (!has_succ[q]) {
            throw Error(ErrorCode::not_a_function, "state '" + k.states[q] + "' has no may successor");
        }
    }

    auto truth = builtin_lattice("3");
    auto weights = may_must_weight_lattice();
    MvCGSBuilder b{InterpretedLattice(truth)};
    const AgentId env = b.agent("env");
    for (const auto& q : k.states) {
        b.state(q);
    }
    b.initial(0);
    b.weight_lattice(weights);
    for (const auto& e : may) {
        const ActionId go = b.action("to:" + k.states[e.second]);
        b.transition(e.first, {go}, e.second,
                     must.contains(e) ? weights->top() : weights->element("U"));
    }
    (void)env;
    const Element kleene[] = {truth->bottom(), truth->element("u"), truth->top()};
    for (const auto& [prop, vals] : k.valuation) {
        b.proposition(prop);
        if (vals.size() != n) {
            throw Error(ErrorCode::invalid_model, "valuation of '" + prop + "' has the wrong length");
        }
        for (StateId q = 0; q < n; ++q) {
            b.value(prop, q, kleene[static_cast<int>(vals[q])]);
        }
    }
    return b.build();
}

} // namespace mvstrat
