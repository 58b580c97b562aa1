#pragma once

#include <chrono>
#include <optional>

#include "mvstrat/error.hpp"

namespace mvstrat {

struct Deadline {
    std::optional<std::chrono::steady_clock::time_point> at;

    static Deadline after(std::chrono::duration<double> d) {
        return {std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(d)};
    }
    // Throws Timeout once expired.
    void check() const {
        if (at && std::chrono::steady_clock::now() > *at) {
            throw Error(ErrorCode::timeout, "deadline exceeded");
        }
    }
};

} // namespace mvstrat
