#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvstrat/lattice.hpp"
#include "mvstrat/state_set.hpp"

namespace mvstrat {

using AgentId = std::uint32_t;
using ActionId = std::uint32_t;
using TransitionId = std::uint32_t;

inline constexpr std::uint32_t no_position = 0xffffffffU;

class MvCGSBuilder;

// Agents, states, actions, availability, transitions and epistemic classes.
// Shared between a model and all of its projections.
class GameStructure {
public:
    [[nodiscard]] std::size_t num_agents() const noexcept { return agents_.size(); }
    [[nodiscard]] std::size_t num_states() const noexcept { return states_.size(); }
    [[nodiscard]] std::size_t num_actions() const noexcept { return actions_.size(); }
    [[nodiscard]] std::size_t num_transitions() const noexcept { return to_.size(); }

    [[nodiscard]] const std::vector<std::string>& agents() const noexcept { return agents_; }
    [[nodiscard]] const std::vector<std::string>& states() const noexcept { return states_; }
    [[nodiscard]] const std::vector<std::string>& actions() const noexcept { return actions_; }
    [[nodiscard]] const std::string& agent_name(AgentId a) const { return agents_.at(a); }
    [[nodiscard]] const std::string& state_name(StateId q) const { return states_.at(q); }
    [[nodiscard]] const std::string& action_name(ActionId x) const { return actions_.at(x); }
    [[nodiscard]] std::optional<AgentId> find_agent(std::string_view name) const;
    [[nodiscard]] std::optional<StateId> find_state(std::string_view name) const;
    [[nodiscard]] std::optional<ActionId> find_action(std::string_view name) const;
    // Throw UnknownAgent / UnknownState.
    [[nodiscard]] AgentId agent(std::string_view name) const;
    [[nodiscard]] StateId state(std::string_view name) const;
    [[nodiscard]] std::vector<AgentId> coalition(const std::vector<std::string>& names) const;

    [[nodiscard]] StateId initial() const noexcept { return initial_; }

    [[nodiscard]] std::span<const ActionId> available(AgentId a, StateId q) const;

    [[nodiscard]] TransitionId out_begin(StateId q) const { return out_offset_[q]; }
    [[nodiscard]] TransitionId out_end(StateId q) const { return out_offset_[q + 1]; }
    [[nodiscard]] bool dead_end(StateId q) const { return out_begin(q) == out_end(q); }
    [[nodiscard]] StateId from(TransitionId t) const { return from_[t]; }
    [[nodiscard]] StateId to(TransitionId t) const { return to_[t]; }
    [[nodiscard]] std::span<const ActionId> joint(TransitionId t) const;
    // Position of agent a's action inside available(a, from(t)), or no_position.
    [[nodiscard]] std::uint32_t choice(TransitionId t, AgentId a) const {
        return choice_[static_cast<std::size_t>(t) * agents_.size() + a];
    }

    [[nodiscard]] bool has_epistemic() const noexcept { return any_declared_; }
    // Identity classes for agents without a declared relation.
    [[nodiscard]] std::uint32_t class_of(AgentId a, StateId q) const;
    [[nodiscard]] std::size_t class_count(AgentId a) const;
    [[nodiscard]] std::span<const StateId> class_members(AgentId a, std::uint32_t cls) const;
    [[nodiscard]] bool epistemic_declared(AgentId a) const;
    // Classes exactly as given to the builder.
    [[nodiscard]] std::span<const std::vector<StateId>> declared_classes(AgentId a) const;

    // True for pruned models whose transition function may be partial.
    [[nodiscard]] bool partial() const noexcept { return partial_; }

    [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    friend class MvCGSBuilder;

    void finish();

    std::vector<std::string> agents_;
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, std::uint32_t> agent_index_;
    std::unordered_map<std::string, std::uint32_t> state_index_;
    std::unordered_map<std::string, std::uint32_t> action_index_;
    StateId initial_ = 0;

    std::vector<std::uint32_t> avail_offset_; // (q * agents + a) -> range in avail_
    std::vector<ActionId> avail_;

    std::vector<TransitionId> out_offset_;
    std::vector<StateId> from_;
    std::vector<StateId> to_;
    std::vector<ActionId> joint_;
    std::vector<std::uint32_t> choice_;

    // Per agent; identity classes where nothing was declared.
    std::vector<std::vector<std::uint32_t>> class_of_;
    std::vector<std::vector<std::vector<StateId>>> classes_;
    // Raw declared classes, kept for validation.
    std::vector<std::vector<std::vector<StateId>>> declared_;

    std::vector<bool> declared_flag_;
    bool any_declared_ = false;

    bool partial_ = false;
    std::uint64_t fingerprint_ = 0;
};

using StructurePtr = std::shared_ptr<const GameStructure>;

class MvCGS {
public:
    [[nodiscard]] const GameStructure& structure() const noexcept { return *structure_; }
    [[nodiscard]] const StructurePtr& structure_ptr() const noexcept { return structure_; }
    [[nodiscard]] const InterpretedLattice& interpretation() const noexcept { return lattice_; }
    [[nodiscard]] const Lattice& lattice() const { return lattice_.lattice(); }
    [[nodiscard]] const LatticePtr& lattice_ptr() const noexcept { return lattice_.lattice_ptr(); }

    [[nodiscard]] std::size_t num_states() const noexcept { return structure_->num_states(); }
    [[nodiscard]] const std::vector<std::string>& propositions() const noexcept { return props_; }
    [[nodiscard]] std::optional<std::size_t> find_proposition(std::string_view name) const;
    [[nodiscard]] std::span<const Element> values(std::size_t prop) const { return values_.at(prop); }
    // Throws UnknownProposition.
    [[nodiscard]] Element value(std::string_view prop, StateId q) const;

    [[nodiscard]] bool weighted() const noexcept { return weight_lattice_ != nullptr; }
    [[nodiscard]] const LatticePtr& weight_lattice() const noexcept { return weight_lattice_; }
    [[nodiscard]] std::span<const Element> weights() const noexcept { return weights_; }

    // Copy with one extra proposition (replaces an existing one of that name).
    [[nodiscard]] MvCGS with_proposition(const std::string& name, std::vector<Element> values) const;
    // Copy over another lattice with new values, same structure.
    [[nodiscard]] MvCGS relabel(InterpretedLattice lattice, std::vector<std::vector<Element>> values,
                                LatticePtr weight_lattice, std::vector<Element> weights) const;

    // Stable content hash of structure, valuation and constants.
    [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    friend class MvCGSBuilder;

    MvCGS() = default;
    void finish();

    StructurePtr structure_;
    InterpretedLattice lattice_;
    std::vector<std::string> props_;
    std::unordered_map<std::string, std::size_t> prop_index_;
    std::vector<std::vector<Element>> values_;
    LatticePtr weight_lattice_;
    std::vector<Element> weights_; // by transition id
    std::uint64_t fingerprint_ = 0;
};

class MvCGSBuilder {
public:
    explicit MvCGSBuilder(InterpretedLattice lattice);

    // Each returns the id of the named entity, creating it if needed.
    AgentId agent(std::string_view name);
    StateId state(std::string_view name);
    ActionId action(std::string_view name);

    MvCGSBuilder& initial(StateId q);
    // Without an explicit call, d(a,q) is derived from the transitions.
    MvCGSBuilder& available(AgentId a, StateId q, std::vector<ActionId> actions);
    MvCGSBuilder& transition(StateId from, std::vector<ActionId> joint, StateId to,
                             std::optional<Element> weight = std::nullopt);
    MvCGSBuilder& proposition(std::string_view name);
    MvCGSBuilder& value(std::string_view prop, StateId q, Element v);
    MvCGSBuilder& weight_lattice(LatticePtr lattice);
    MvCGSBuilder& epistemic(AgentId a, std::vector<std::vector<StateId>> classes);
    MvCGSBuilder& partial(bool allow);

    // Throws InvalidModel only for malformed input (bad ids, arity); semantic
    // problems are left for validate().
    [[nodiscard]] MvCGS build() const;

private:
    struct PendingTransition {
        StateId from;
        std::vector<ActionId> joint;
        StateId to;
        std::optional<Element> weight;
    };

    InterpretedLattice lattice_;
    std::vector<std::string> agents_;
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, std::uint32_t> agent_index_;
    std::unordered_map<std::string, std::uint32_t> state_index_;
    std::unordered_map<std::string, std::uint32_t> action_index_;
    std::optional<StateId> initial_;
    std::vector<std::pair<std::pair<AgentId, StateId>, std::vector<ActionId>>> available_;
    std::vector<PendingTransition> transitions_;
    std::vector<std::string> props_;
    std::unordered_map<std::string, std::size_t> prop_index_;
    std::vector<std::vector<std::pair<StateId, Element>>> values_;
    LatticePtr weight_lattice_;
    std::vector<std::pair<AgentId, std::vector<std::vector<StateId>>>> epistemic_;
    bool partial_ = false;
};

enum class ViolationKind {
    no_states,
    empty_availability,
    unavailable_action,
    duplicate_transition,
    missing_transition,
    missing_weight,
    epistemic_not_partition,
    non_uniform,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

[[nodiscard]] std::vector<Violation> validate(const MvCGS& m);
// Throws InvalidModel listing the violations.
void ensure_valid(const MvCGS& m);

struct Successor {
    std::vector<ActionId> joint;
    StateId to;
};

[[nodiscard]] std::vector<Successor> successors(const MvCGS& m, StateId q);
[[nodiscard]] std::vector<Successor> successors(const MvCGS& m, std::string_view state);

struct PruneResult {
    MvCGS model;
    std::vector<StateId> dead_ends;
};

// Keeps transitions whose weight is designated; d is re-derived from the kept
// transitions. Throws InvalidModel if m has no weights.
[[nodiscard]] PruneResult prune_designated(const MvCGS& m, const std::vector<Element>& designated);

// States with no outgoing transition that are reachable from the initial state.
[[nodiscard]] std::vector<StateId> reachable_dead_ends(const GameStructure& s);

enum class Kleene { f, u, t };

struct MayMustStructure {
    std::vector<std::string> states; // first is initial
    std::vector<std::pair<std::string, std::vector<Kleene>>> valuation;
    std::vector<std::pair<StateId, StateId>> must;
    std::vector<std::pair<StateId, StateId>> may;
};

// Weight lattice of from_may_must: bot < U < top.
[[nodiscard]] LatticePtr may_must_weight_lattice();
// Single agent "env"; one action per may-successor. Throws NotAFunction when a
// state has no may-successor, InvalidModel when must is not inside may.
[[nodiscard]] MvCGS from_may_must(const MayMustStructure& k);

} // namespace mvstrat
