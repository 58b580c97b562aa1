#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvstrat/cgs.hpp"
#include "mvstrat/formula.hpp"
#include "mvstrat/lattice.hpp"
#include "mvstrat/state_set.hpp"

namespace mvstrat {

// A classical model: every proposition is a set of states, every constant a
// truth value.
class TwoValuedCGS {
public:
    TwoValuedCGS(StructurePtr structure, std::vector<std::string> props, std::vector<StateSet> holds,
                 std::map<std::string, bool> constants);

    [[nodiscard]] const GameStructure& structure() const noexcept { return *structure_; }
    [[nodiscard]] const StructurePtr& structure_ptr() const noexcept { return structure_; }
    [[nodiscard]] std::size_t num_states() const noexcept { return structure_->num_states(); }

    [[nodiscard]] const std::vector<std::string>& propositions() const noexcept { return props_; }
    [[nodiscard]] std::optional<std::size_t> find_proposition(std::string_view name) const;
    [[nodiscard]] const StateSet& holds(std::size_t prop) const { return holds_.at(prop); }
    // Throws UnknownProposition.
    [[nodiscard]] const StateSet& holds(std::string_view prop) const;

    [[nodiscard]] const std::map<std::string, bool>& constants() const noexcept { return constants_; }
    // "true" and "false" are always defined.
    [[nodiscard]] std::optional<bool> constant(std::string_view name) const;

    [[nodiscard]] TwoValuedCGS with_proposition(const std::string& name, StateSet holds) const;

private:
    StructurePtr structure_;
    std::vector<std::string> props_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<StateSet> holds_;
    std::map<std::string, bool> constants_;
};

// Same structure and the same proposition sets; constants are not compared.
[[nodiscard]] bool same_labelling(const TwoValuedCGS& a, const TwoValuedCGS& b);

// View of a model over a two-element lattice. Throws LatticeMismatch.
[[nodiscard]] TwoValuedCGS to_two_valued(const MvCGS& m);

// Throws LatticeMismatch or NotHomomorphism.
[[nodiscard]] MvCGS project(const MvCGS& m, const ReductionMap& r);
// Throws NotDistributive or NotJoinIrreducible. Weights are dropped.
[[nodiscard]] TwoValuedCGS project_threshold(const MvCGS& m, Element level);

// Memoizes project_threshold by (model fingerprint, level). Thread-safe. With a
// directory, entries are also persisted there.
class ProjectionCache {
public:
    ProjectionCache() = default;
    explicit ProjectionCache(std::filesystem::path directory);

    [[nodiscard]] std::shared_ptr<const TwoValuedCGS> get(const MvCGS& m, Element level);
    [[nodiscard]] std::size_t hits() const;
    [[nodiscard]] std::size_t misses() const;

private:
    std::optional<TwoValuedCGS> load(const MvCGS& m, Element level) const;
    void store(const MvCGS& m, Element level, const TwoValuedCGS& p) const;

    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint32_t>& k) const noexcept {
            return static_cast<std::size_t>(k.first ^ (k.second * 0x9e3779b97f4a7c15ULL));
        }
    };

    mutable std::mutex mutex_;
    std::unordered_map<std::pair<std::uint64_t, std::uint32_t>, std::shared_ptr<const TwoValuedCGS>, KeyHash>
        entries_;
    std::optional<std::filesystem::path> directory_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

// Realized values of both operands of one implication subformula, per state.
struct OperandValues {
    Formula implication;
    std::vector<Element> lhs;
    std::vector<Element> rhs;
};

enum class ConditionScope {
    // Every value of the left operand against every value of the right one,
    // wherever they occur.
    value_sets,
    // Only the pair of values found at the same state.
    per_state,
};

struct ConditionWitness {
    Formula implication;
    std::string condition; // "C1'" or "C2'"
    StateId lhs_state;
    StateId rhs_state;
    Element x1;
    Element x2;
    // Whether the same condition also fails with the operands swapped.
    bool swapped_fails;
};

struct ConditionReport {
    bool ok = true;
    std::optional<ConditionWitness> witness;

    explicit operator bool() const noexcept { return ok; }
};

// Throws MissingValues when an implication of f has no entry in values.
[[nodiscard]] ConditionReport check_formula_conditions(const MvCGS& m, const Formula& f, const ReductionMap& r,
                                                       const std::vector<OperandValues>& values,
                                                       ConditionScope scope = ConditionScope::value_sets);

} // namespace mvstrat
