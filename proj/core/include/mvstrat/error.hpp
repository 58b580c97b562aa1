#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvstrat {

enum class ErrorCode {
    not_a_lattice,
    cycle_in_order,
    unknown_element,
    not_distributive,
    not_join_irreducible,
    syntax_error,
    unknown_agent,
    unknown_state,
    unknown_proposition,
    unknown_constant,
    invalid_model,
    not_a_function,
    not_homomorphism,
    lattice_mismatch,
    missing_values,
    not_atl_fragment,
    implication_present,
    strategy_space_too_large,
    oracle_scale_exceeded,
    dead_end,
    inconclusive,
    map_invalid,
    state_space_cap_exceeded,
    unknown_model,
    timeout,
    io_error,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    // what() without the kind prefix.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

// Parse failure; position is a 0-based byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message);

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace mvstrat
