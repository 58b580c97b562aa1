#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mvstrat/cgs.hpp"
#include "mvstrat/deadline.hpp"
#include "mvstrat/formula.hpp"
#include "mvstrat/projection.hpp"
#include "mvstrat/state_set.hpp"

namespace mvstrat {

enum class DeadEndPolicy {
    // A reachable state without successors aborts checking.
    error,
    // The empty outcome set satisfies every path formula under <<A>> and none
    // under [[A]].
    vacuous,
};

struct EngineOptions {
    std::uint64_t strategy_cap = 10'000'000;
    DeadEndPolicy dead_ends = DeadEndPolicy::error;
    Deadline deadline;
};

// One action per epistemic class for each coalition member; no_position where
// the class offers no action at all.
struct UniformStrategy {
    std::vector<AgentId> agents;
    std::vector<std::vector<ActionId>> actions; // [member][class]
};

// States where some A-action forces every outcome into q.
[[nodiscard]] StateSet pre(const GameStructure& s, const std::vector<AgentId>& coalition, const StateSet& q);
// States where every A-action admits some outcome in q.
[[nodiscard]] StateSet pre_dual(const GameStructure& s, const std::vector<AgentId>& coalition, const StateSet& q);

// The following throw NotATLFragment, ImplicationPresent, UnknownProposition,
// UnknownConstant, UnknownAgent, DeadEnd and Timeout as appropriate.
[[nodiscard]] StateSet mc_atl_perfect(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts = {});

struct IrResult {
    StateSet states;
    // For a strategic top-level formula under <<A>>: the first strategy in
    // enumeration order that works from the initial state.
    std::optional<UniformStrategy> witness;
    std::uint64_t strategies = 0;
};

// Also throws StrategySpaceTooLarge.
[[nodiscard]] IrResult mc_atl_ir_exact(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts = {});

enum class Side { lower, upper };

struct Bounds {
    StateSet lower;
    StateSet upper;
};

// lower is sound but not complete for uniform strategies; upper is the
// perfect-information result for <<A>>.
[[nodiscard]] Bounds mc_atl_ir_bounds(const TwoValuedCGS& m, const Formula& f, const EngineOptions& opts = {});
[[nodiscard]] StateSet mc_atl_ir_approx(const TwoValuedCGS& m, const Formula& f, Side side,
                                        const EngineOptions& opts = {});

} // namespace mvstrat
