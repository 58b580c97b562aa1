#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mvstrat {

using StateId = std::uint32_t;

// Fixed-universe bitset over state indices.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe, bool full = false);

    static StateSet all(std::size_t universe) { return StateSet(universe, true); }

    [[nodiscard]] std::size_t universe() const noexcept { return universe_; }
    [[nodiscard]] bool contains(StateId q) const noexcept {
        return q < universe_ && ((words_[q >> 6] >> (q & 63)) & 1U) != 0;
    }
    void insert(StateId q) noexcept { words_[q >> 6] |= std::uint64_t{1} << (q & 63); }
    void erase(StateId q) noexcept { words_[q >> 6] &= ~(std::uint64_t{1} << (q & 63)); }

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] bool empty() const noexcept;
    [[nodiscard]] bool full() const noexcept { return count() == universe_; }
    [[nodiscard]] bool subset_of(const StateSet& other) const noexcept;
    [[nodiscard]] std::vector<StateId> members() const;

    StateSet& operator&=(const StateSet& other) noexcept;
    StateSet& operator|=(const StateSet& other) noexcept;
    [[nodiscard]] StateSet complement() const;

    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    void trim() noexcept;

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace mvstrat
