#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mvstrat {

// Index of an element inside one Lattice. The ordering operators compare
// indices only; use Lattice::leq for the lattice order.
struct Element {
    std::uint32_t id = 0;

    friend constexpr auto operator<=>(Element, Element) = default;
};

class Lattice;
using LatticePtr = std::shared_ptr<const Lattice>;

class Lattice {
public:
    static Lattice build(const std::vector<std::string>& elements,
                         const std::vector<std::pair<std::string, std::string>>& hasse);
    static LatticePtr make(const std::vector<std::string>& elements,
                           const std::vector<std::pair<std::string, std::string>>& hasse);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] std::vector<Element> elements() const;
    [[nodiscard]] Element bottom() const noexcept { return bottom_; }
    [[nodiscard]] Element top() const noexcept { return top_; }

    [[nodiscard]] const std::string& name(Element x) const;
    [[nodiscard]] std::optional<Element> find(std::string_view name) const;
    // Throws UnknownElement.
    [[nodiscard]] Element element(std::string_view name) const;
    [[nodiscard]] bool contains(Element x) const noexcept { return x.id < names_.size(); }

    [[nodiscard]] bool leq(Element x, Element y) const;
    [[nodiscard]] bool less(Element x, Element y) const { return x != y && leq(x, y); }
    [[nodiscard]] bool incomparable(Element x, Element y) const { return !leq(x, y) && !leq(y, x); }

    [[nodiscard]] Element meet(Element x, Element y) const;
    [[nodiscard]] Element join(Element x, Element y) const;
    [[nodiscard]] Element big_meet(std::span<const Element> xs) const;
    [[nodiscard]] Element big_join(std::span<const Element> xs) const;

    [[nodiscard]] std::vector<Element> up_closure(Element x) const;
    [[nodiscard]] std::vector<Element> down_closure(Element x) const;

    [[nodiscard]] bool is_distributive() const noexcept { return distributive_; }
    // Sorted by (height, id), which is a linear extension of the order.
    [[nodiscard]] std::span<const Element> join_irreducibles() const noexcept { return ji_; }
    [[nodiscard]] bool is_join_irreducible(Element x) const;
    // JI ∩ ↓x in the same order as join_irreducibles(). Throws NotDistributive.
    [[nodiscard]] std::vector<Element> decompose(Element x) const;

    [[nodiscard]] std::vector<std::pair<Element, Element>> covers() const;

    // Same names and same order; element indices may differ.
    [[nodiscard]] bool equivalent(const Lattice& other) const;

private:
    Lattice() = default;
    void check(Element x) const;

    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::uint8_t> leq_;
    std::vector<Element> meet_;
    std::vector<Element> join_;
    Element bottom_{};
    Element top_{};
    bool distributive_ = false;
    std::vector<Element> ji_;
};

// σ: constant names to elements. The names "true" and "false" always denote
// top and bottom and cannot be rebound.
class InterpretedLattice {
public:
    InterpretedLattice() = default;
    // Every element name becomes a constant denoting itself.
    explicit InterpretedLattice(LatticePtr lattice);
    InterpretedLattice(LatticePtr lattice, std::map<std::string, Element> constants);

    [[nodiscard]] const Lattice& lattice() const { return *lattice_; }
    [[nodiscard]] const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
    [[nodiscard]] const std::map<std::string, Element>& constants() const noexcept { return constants_; }
    [[nodiscard]] std::optional<Element> constant(std::string_view name) const;
    // Throws UnknownConstant.
    [[nodiscard]] Element resolve(std::string_view name) const;

private:
    LatticePtr lattice_;
    std::map<std::string, Element> constants_;
};

struct ReductionMap {
    LatticePtr source;
    LatticePtr target;
    std::vector<Element> mapping; // indexed by source element id, values are target elements

    [[nodiscard]] Element operator()(Element x) const { return mapping.at(x.id); }
};

// Builds a map from element names; checks that target is a sublattice of
// source (names ⊆ and order agrees). Throws LatticeMismatch.
[[nodiscard]] ReductionMap make_reduction_map(LatticePtr source, LatticePtr target,
                                              const std::map<std::string, std::string>& by_name);
[[nodiscard]] ReductionMap identity_map(LatticePtr lattice);
// f_ℓ onto the two-element sublattice {⊥, ⊤}. Throws NotDistributive or
// NotJoinIrreducible.
[[nodiscard]] ReductionMap threshold(LatticePtr lattice, Element level);
[[nodiscard]] ReductionMap compose(const ReductionMap& first, const ReductionMap& second);

enum class TripleMode { homomorphism, c1c2 };

struct TripleCheck {
    bool ok = true;
    std::optional<std::pair<Element, Element>> witness; // source elements
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

[[nodiscard]] TripleCheck check_reduction_triple(const ReductionMap& r, TripleMode mode);

// "2", "3", "4", "2x2", "2+2x2", "2+2x2+2x2", plus the non-distributive
// "M5" and "N5". Throws UnknownElement for other names.
[[nodiscard]] LatticePtr builtin_lattice(std::string_view name);
[[nodiscard]] std::vector<std::string> builtin_lattice_names();
// Chain 0 < 1 < ... < n-1 with decimal names.
[[nodiscard]] LatticePtr chain_lattice(std::size_t n);

} // namespace mvstrat
