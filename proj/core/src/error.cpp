#include "mvstrat/error.hpp"

namespace mvstrat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::not_a_lattice: return "NotALattice";
    case ErrorCode::cycle_in_order: return "CycleInOrder";
    case ErrorCode::unknown_element: return "UnknownElement";
    case ErrorCode::not_distributive: return "NotDistributive";
    case ErrorCode::not_join_irreducible: return "NotJoinIrreducible";
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::unknown_agent: return "UnknownAgent";
    case ErrorCode::unknown_state: return "UnknownState";
    case ErrorCode::unknown_proposition: return "UnknownProposition";
    case ErrorCode::unknown_constant: return "UnknownConstant";
    case ErrorCode::invalid_model: return "InvalidModel";
    case ErrorCode::not_a_function: return "NotAFunction";
    case ErrorCode::not_homomorphism: return "NotHomomorphism";
    case ErrorCode::lattice_mismatch: return "LatticeMismatch";
    case ErrorCode::missing_values: return "MissingValues";
    case ErrorCode::not_atl_fragment: return "NotATLFragment";
    case ErrorCode::implication_present: return "ImplicationPresent";
    case ErrorCode::strategy_space_too_large: return "StrategySpaceTooLarge";
    case ErrorCode::oracle_scale_exceeded: return "OracleScaleExceeded";
    case ErrorCode::dead_end: return "DeadEnd";
    case ErrorCode::inconclusive: return "Inconclusive";
    case ErrorCode::map_invalid: return "MapInvalid";
    case ErrorCode::state_space_cap_exceeded: return "StateSpaceCapExceeded";
    case ErrorCode::unknown_model: return "UnknownModel";
    case ErrorCode::timeout: return "Timeout";
    case ErrorCode::io_error: return "IOError";
    }
    return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::syntax_error, message + " at position " + std::to_string(position)),
      position_(position) {}

} // namespace mvstrat
