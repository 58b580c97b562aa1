#include "mvstrat/state_set.hpp"

#include <bit>

namespace mvstrat {

StateSet::StateSet(std::size_t universe, bool full)
    : universe_(universe), words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0) {
    trim();
}

void StateSet::trim() noexcept {
    if (universe_ % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }
}

std::size_t StateSet::count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

bool StateSet::empty() const noexcept {
    for (auto w : words_) {
        if (w != 0) {
            return false;
        }
    }
    return true;
}

bool StateSet::subset_of(const StateSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if ((words_[i] & ~other.words_[i]) != 0) {
            return false;
        }
    }
    return true;
}

std::vector<StateId> StateSet::members() const {
    std::vector<StateId> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto w = words_[i];
        while (w != 0) {
            const int b = std::countr_zero(w);
            out.push_back(static_cast<StateId>(i * 64 + static_cast<std::size_t>(b)));
            w &= w - 1;
        }
    }
    return out;
}

StateSet& StateSet::operator&=(const StateSet& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] &= other.words_[i];
    }
    return *this;
}

StateSet& StateSet::operator|=(const StateSet& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] |= other.words_[i];
    }
    return *this;
}

StateSet StateSet::complement() const {
    StateSet out(*this);
    for (auto& w : out.words_) {
        w = ~w;
    }
    out.trim();
    return out;
}

} // namespace mvstrat
