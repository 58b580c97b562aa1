#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvstrat/cgs.hpp"
#include "mvstrat/formula.hpp"
#include "mvstrat/lattice.hpp"
#include "mvstrat/mc2.hpp"
#include "mvstrat/projection.hpp"

namespace mvstrat {

// Value of one formula at every state.
class Valuation {
public:
    Valuation() = default;
    Valuation(LatticePtr lattice, std::vector<Element> values);
    // Constant valuation.
    Valuation(LatticePtr lattice, std::size_t states, Element value);

    [[nodiscard]] const Lattice& lattice() const { return *lattice_; }
    [[nodiscard]] const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<Element>& values() const noexcept { return values_; }
    [[nodiscard]] Element operator[](StateId q) const { return values_.at(q); }
    Element& operator[](StateId q) { return values_.at(q); }

    // Compares names, so valuations over equivalent lattices compare equal.
    friend bool operator==(const Valuation& a, const Valuation& b);

private:
    LatticePtr lattice_;
    std::vector<Element> values_;
};

enum class Semantics {
    perfect,
    ir_exact,
    // Both fixpoint approximations; lower and upper of the outcome differ where
    // the verdict is open.
    ir_approx,
    // A single bound, reported as both lower and upper.
    ir_lower,
    ir_upper,
};

enum class Algorithm { translate, recursive, oracle };

struct CheckerConfig {
    Semantics semantics = Semantics::perfect;
    Algorithm algorithm = Algorithm::recursive;
    unsigned parallelism = 1;
    std::uint64_t strategy_cap = 10'000'000;
    DeadEndPolicy dead_ends = DeadEndPolicy::error;
    ProjectionCache* cache = nullptr;
    Deadline deadline;
    // Strategy assignments the oracle may try per state before giving up.
    std::uint64_t oracle_cap = 2'000'000;
};

struct LevelTiming {
    Element level;
    double seconds = 0;
};

struct FreshAtom {
    std::string name;
    Formula replaced;
};

struct LevelWitness {
    Element level;
    UniformStrategy strategy;
};

struct CheckOutcome {
    Valuation lower;
    Valuation upper;
    std::vector<LevelTiming> timings;
    std::vector<FreshAtom> fresh_atoms;
    std::vector<LevelWitness> witnesses;

    [[nodiscard]] bool conclusive() const { return lower == upper; }
    [[nodiscard]] bool conclusive(StateId q) const;
    // Throws Inconclusive unless conclusive().
    [[nodiscard]] const Valuation& value() const;
};

// Join of the levels whose projection satisfies the formula.
// Throws NotDistributive, ImplicationPresent, NotATLFragment, InvalidModel
// (weighted or, for ir semantics, no epistemic relation), DeadEnd, Timeout.
[[nodiscard]] CheckOutcome gmcheck_tr(const MvCGS& m, const Formula& f, const CheckerConfig& cfg = {});
// Only the given join-irreducible levels, joined in the given order.
[[nodiscard]] CheckOutcome gmcheck_tr_levels(const MvCGS& m, const Formula& f, const CheckerConfig& cfg,
                                             std::span<const Element> levels);
// Value at one state; lower and upper agree unless semantics is ir_approx.
[[nodiscard]] std::pair<Element, Element> mcheck_tr(const MvCGS& m, StateId q, const Formula& f,
                                                    const CheckerConfig& cfg = {});

// Replaces implications innermost first by fresh two-valued atoms. Throws
// Inconclusive when an approximate operand value is open at some state.
[[nodiscard]] CheckOutcome gmcheck_rec(const MvCGS& m, const Formula& f, const CheckerConfig& cfg = {});

// Strategy enumeration and graph search per level, no projections or
// fixpoints. Exact for every semantics. Throws OracleScaleExceeded, DeadEnd,
// InvalidModel for models with a partial transition function.
[[nodiscard]] CheckOutcome mv_oracle(const MvCGS& m, const Formula& f, const CheckerConfig& cfg = {});

// Dispatches on cfg.algorithm.
[[nodiscard]] CheckOutcome check(const MvCGS& m, const Formula& f, const CheckerConfig& cfg = {});

// Whether the value is top. Throws Inconclusive when the bounds disagree.
[[nodiscard]] bool truth_level(const MvCGS& m, StateId q, const Formula& f, const CheckerConfig& cfg = {});
[[nodiscard]] bool valid_in_model(const MvCGS& m, const Formula& f, const CheckerConfig& cfg = {});

} // namespace mvstrat
