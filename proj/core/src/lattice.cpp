#include "mvstrat/lattice.hpp"

#include <algorithm>

#include "mvstrat/error.hpp"

namespace mvstrat {

namespace {

std::string pair_text(const std::string& a, const std::string& b) {
    return "(" + a + ", " + b + ")";
}

} // namespace

Lattice Lattice::build(const std::vector<std::string>& elements,
                       const std::vector<std::pair<std::string, std::string>>& hasse) {
    if (elements.empty()) {
        throw Error(ErrorCode::not_a_lattice, "a lattice needs at least one element");
    }
    Lattice l;
    l.names_ = elements;
    for (std::uint32_t i = 0; i < elements.size(); ++i) {
        if (!l.index_.emplace(elements[i], i).second) {
            throw Error(ErrorCode::not_a_lattice, "duplicate element '" + elements[i] + "'");
        }
    }
    const std::size_t n = elements.size();
    l.leq_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        l.leq_[i * n + i] = 1;
    }
    for (const auto& [lo, hi] : hasse) {
        const Element a = l.element(lo);
        const Element b = l.element(hi);
        l.leq_[a.id * n + b.id] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!l.leq_[i * n + k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (l.leq_[k * n + j]) {
                    l.leq_[i * n + j] = 1;
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (l.leq_[i * n + j] && l.leq_[j * n + i]) {
                throw Error(ErrorCode::cycle_in_order,
                            "order has a cycle through " + pair_text(elements[i], elements[j]));
            }
        }
    }

    l.meet_.assign(n * n, Element{});
    l.join_.assign(n * n, Element{});
    std::vector<std::uint32_t> bounds;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i; j < n; ++j) {
            // greatest lower bound
            bounds.clear();
            for (std::uint32_t k = 0; k < n; ++k) {
                if (l.leq_[k * n + i] && l.leq_[k * n + j]) {
                    bounds.push_back(k);
                }
            }
            auto greatest = std::find_if(bounds.begin(), bounds.end(), [&](std::uint32_t c) {
                return std::all_of(bounds.begin(), bounds.end(),
                                   [&](std::uint32_t o) { return l.leq_[o * n + c] != 0; });
            });
            if (greatest == bounds.end()) {
                throw Error(ErrorCode::not_a_lattice,
                            "no unique meet for " + pair_text(elements[i], elements[j]));
            }
            l.meet_[i * n + j] = l.meet_[j * n + i] = Element{*greatest};

            bounds.clear();
            for (std::uint32_t k = 0; k < n; ++k) {
                if (l.leq_[i * n + k] && l.leq_[j * n + k]) {
                    bounds.push_back(k);
                }
            }
            auto least = std::find_if(bounds.begin(), bounds.end(), [&](std::uint32_t c) {
                return std::all_of(bounds.begin(), bounds.end(),
                                   [&](std::uint32_t o) { return l.leq_[c * n + o] != 0; });
            });
            if (least == bounds.end()) {
                throw Error(ErrorCode::not_a_lattice,
                            "no unique join for " + pair_text(elements[i], elements[j]));
            }
            l.join_[i * n + j] = l.join_[j * n + i] = Element{*least};
        }
    }

    Element bot{0};
    Element top{0};
    for (std::uint32_t i = 1; i < n; ++i) {
        bot = l.meet_[bot.id * n + i];
        top = l.join_[top.id * n + i];
    }
    l.bottom_ = bot;
    l.top_ = top;

    l.distributive_ = true;
    for (std::uint32_t x = 0; x < n && l.distributive_; ++x) {
        for (std::uint32_t y = 0; y < n && l.distributive_; ++y) {
            for (std::uint32_t z = 0; z < n; ++z) {
                const Element xy_join = l.join_[x * n + y];
                const Element xy_meet = l.meet_[x * n + y];
                const Element lhs1 = l.meet_[z * n + xy_join.id];
                const Element rhs1 = l.join_[l.meet_[z * n + x].id * n + l.meet_[z * n + y].id];
                const Element lhs2 = l.join_[z * n + xy_meet.id];
                const Element rhs2 = l.meet_[l.join_[z * n + x].id * n + l.join_[z * n + y].id];
                if (lhs1 != rhs1 || lhs2 != rhs2) {
                    l.distributive_ = false;
                    break;
                }
            }
        }
    }

    // ℓ ≠ ⊥ is join-irreducible iff the join of everything strictly below it is
    // strictly below it.
    std::vector<std::pair<std::size_t, Element>> ranked;
    for (std::uint32_t x = 0; x < n; ++x) {
        if (Element{x} == bot) {
            continue;
        }
        Element below = bot;
        std::size_t height = 0;
        for (std::uint32_t y = 0; y < n; ++y) {
            if (l.leq_[y * n + x]) {
                ++height;
                if (y != x) {
                    below = l.join_[below.id * n + y];
                }
            }
        }
        if (below.id != x) {
            ranked.emplace_back(height, Element{x});
        }
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [h, x] : ranked) {
        l.ji_.push_back(x);
    }
    return l;
}

LatticePtr Lattice::make(const std::vector<std::string>& elements,
                         const std::vector<std::pair<std::string, std::string>>& hasse) {
    return std::make_shared<const Lattice>(build(elements, hasse));
}

std::vector<Element> Lattice::elements() const {
    std::vector<Element> out;
    out.reserve(size());
    for (std::uint32_t i = 0; i < size(); ++i) {
        out.push_back(Element{i});
    }
    return out;
}

void Lattice::check(Element x) const {
    if (!contains(x)) {
        throw Error(ErrorCode::unknown_element, "element index " + std::to_string(x.id));
    }
}

const std::string& Lattice::name(Element x) const {
    check(x);
    return names_[x.id];
}

std::optional<Element> Lattice::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return Element{it->second};
}

Element Lattice::element(std::string_view name) const {
    if (auto e = find(name)) {
        return *e;
    }
    throw Error(ErrorCode::unknown_element, "'" + std::string(name) + "'");
}

bool Lattice::leq(Element x, Element y) const {
    check(x);
    check(y);
    return leq_[x.id * size() + y.id] != 0;
}

Element Lattice::meet(Element x, Element y) const {
    check(x);
    check(y);
    return meet_[x.id * size() + y.id];
}

Element Lattice::join(Element x, Element y) const {
    check(x);
    check(y);
    return join_[x.id * size() + y.id];
}

Element Lattice::big_meet(std::span<const Element> xs) const {
    Element acc = top_;
    for (Element x : xs) {
        acc = meet(acc, x);
    }
    return acc;
}

Element Lattice::big_join(std::span<const Element> xs) const {
    Element acc = bottom_;
    for (Element x : xs) {
        acc = join(acc, x);
    }
    return acc;
}

std::vector<Element> Lattice::up_closure(Element x) const {
    std::vector<Element> out;
    for (std::uint32_t y = 0; y < size(); ++y) {
        if (leq(x, Element{y})) {
            out.push_back(Element{y});
        }
    }
    return out;
}

std::vector<Element> Lattice::down_closure(Element x) const {
    std::vector<Element> out;
    for (std::uint32_t y = 0; y < size(); ++y) {
        if (leq(Element{y}, x)) {
            out.push_back(Element{y});
        }
    }
    return out;
}

bool Lattice::is_join_irreducible(Element x) const {
    check(x);
    return std::find(ji_.begin(), ji_.end(), x) != ji_.end();
}

std::vector<Element> Lattice::decompose(Element x) const {
    check(x);
    if (!distributive_) {
        throw Error(ErrorCode::not_distributive, "decomposition needs a distributive lattice");
    }
    std::vector<Element> out;
    for (Element l : ji_) {
        if (leq(l, x)) {
            out.push_back(l);
        }
    }
    return out;
}

std::vector<std::pair<Element, Element>> Lattice::covers() const {
    std::vector<std::pair<Element, Element>> out;
    const std::size_t n = size();
    for (std::uint32_t x = 0; x < n; ++x) {
        for (std::uint32_t y = 0; y < n; ++y) {
            if (x == y || !leq_[x * n + y]) {
                continue;
            }
            bool direct = true;
            for (std::uint32_t z = 0; z < n && direct; ++z) {
                if (z != x && z != y && leq_[x * n + z] && leq_[z * n + y]) {
                    direct = false;
                }
            }
            if (direct) {
                out.emplace_back(Element{x}, Element{y});
            }
        }
    }
    return out;
}

bool Lattice::equivalent(const Lattice& other) const {
    if (size() != other.size()) {
        return false;
    }
    std::vector<Element> to_other;
    for (const auto& n : names_) {
        auto e = other.find(n);
        if (!e) {
            return false;
        }
        to_other.push_back(*e);
    }
    for (std::uint32_t x = 0; x < size(); ++x) {
        for (std::uint32_t y = 0; y < size(); ++y) {
            if (leq(Element{x}, Element{y}) != other.leq(to_other[x], to_other[y])) {
                return false;
            }
        }
    }
    return true;
}

InterpretedLattice::InterpretedLattice(LatticePtr lattice) : lattice_(std::move(lattice)) {
    for (Element e : lattice_->elements()) {
        constants_.emplace(lattice_->name(e), e);
    }
}

InterpretedLattice::InterpretedLattice(LatticePtr lattice, std::map<std::string, Element> constants)
    : lattice_(std::move(lattice)), constants_(std::move(constants)) {
    for (const auto& [name, e] : constants_) {
        if (!lattice_->contains(e)) {
            throw Error(ErrorCode::unknown_element, "constant '" + name + "' is not a lattice element");
        }
        if (name == "true" || name == "false") {
            throw Error(ErrorCode::unknown_constant, "'" + name + "' is reserved");
        }
    }
}

std::optional<Element> InterpretedLattice::constant(std::string_view name) const {
    if (name == "true") {
        return lattice_->top();
    }
    if (name == "false") {
        return lattice_->bottom();
    }
    auto it = constants_.find(std::string(name));
    if (it == constants_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Element InterpretedLattice::resolve(std::string_view name) const {
    if (auto e = constant(name)) {
        return *e;
    }
    throw Error(ErrorCode::unknown_constant, "#" + std::string(name));
}

ReductionMap make_reduction_map(LatticePtr source, LatticePtr target,
                                const std::map<std::string, std::string>& by_name) {
    for (Element t : target->elements()) {
        auto s = source->find(target->name(t));
        if (!s) {
            throw Error(ErrorCode::lattice_mismatch,
                        "target element '" + target->name(t) + "' is not in the source lattice");
        }
        for (Element u : target->elements()) {
            auto su = source->element(target->name(u));
            if (target->leq(t, u) != source->leq(*s, su)) {
                throw Error(ErrorCode::lattice_mismatch, "target order disagrees with source order on " +
                                                             target->name(t) + ", " + target->name(u));
            }
        }
    }
    ReductionMap r{source, target, {}};
    r.mapping.resize(source->size());
    for (Element s : source->elements()) {
        auto it = by_name.find(source->name(s));
        if (it == by_name.end()) {
            throw Error(ErrorCode::lattice_mismatch, "mapping is undefined on '" + source->name(s) + "'");
        }
        r.mapping[s.id] = target->element(it->second);
    }
    return r;
}

ReductionMap identity_map(LatticePtr lattice) {
    ReductionMap r{lattice, lattice, lattice->elements()};
    return r;
}

ReductionMap threshold(LatticePtr lattice, Element level) {
    if (!lattice->is_distributive()) {
        throw Error(ErrorCode::not_distributive, "threshold maps need a distributive lattice");
    }
    if (!lattice->is_join_irreducible(level)) {
        throw Error(ErrorCode::not_join_irreducible, "'" + lattice->name(level) + "'");
    }
    const auto& bot = lattice->name(lattice->bottom());
    const auto& top = lattice->name(lattice->top());
    auto two = Lattice::make({bot, top}, {{bot, top}});
    ReductionMap r{lattice, two, {}};
    r.mapping.reserve(lattice->size());
    for (Element x : lattice->elements()) {
        r.mapping.push_back(lattice->leq(level, x) ? two->top() : two->bottom());
    }
    return r;
}

ReductionMap compose(const ReductionMap& first, const ReductionMap& second) {
    if (!first.target->equivalent(*second.source)) {
        throw Error(ErrorCode::lattice_mismatch, "maps do not compose");
    }
    ReductionMap r{first.source, second.target, {}};
    for (Element x : first.source->elements()) {
        const Element mid = second.source->element(first.target->name(first(x)));
        r.mapping.push_back(second(mid));
    }
    return r;
}

TripleCheck check_reduction_triple(const ReductionMap& r, TripleMode mode) {
    const Lattice& s = *r.source;
    const Lattice& t = *r.target;
    if (r.mapping.size() != s.size()) {
        return {false, std::nullopt, "mapping is not total"};
    }
    if (mode == TripleMode::homomorphism) {
        if (r(s.bottom()) != t.bottom()) {
            return {false, std::pair{s.bottom(), s.bottom()}, "bottom is not preserved"};
        }
        if (r(s.top()) != t.top()) {
            return {false, std::pair{s.top(), s.top()}, "top is not preserved"};
        }
        for (Element x : s.elements()) {
            for (Element y : s.elements()) {
                if (r(s.meet(x, y)) != t.meet(r(x), r(y))) {
                    return {false, std::pair{x, y}, "meet of " + s.name(x) + ", " + s.name(y) + " is not preserved"};
                }
                if (r(s.join(x, y)) != t.join(r(x), r(y))) {
                    return {false, std::pair{x, y}, "join of " + s.name(x) + ", " + s.name(y) + " is not preserved"};
                }
            }
        }
        return {};
    }
    for (Element x : s.elements()) {
        for (Element y : s.elements()) {
            if (s.less(x, y) && !t.less(r(x), r(y))) {
                return {false, std::pair{x, y}, "C1 fails: " + s.name(x) + " < " + s.name(y)};
            }
            if (s.incomparable(x, y) && !t.incomparable(r(x), r(y))) {
                return {false, std::pair{x, y}, "C2 fails: " + s.name(x) + " and " + s.name(y) + " are incomparable"};
            }
        }
    }
    return {};
}

namespace {

using Edges = std::vector<std::pair<std::string, std::string>>;

LatticePtr make_builtin(std::string_view name) {
    if (name == "2") {
        return Lattice::make({"bot", "top"}, {{"bot", "top"}});
    }
    if (name == "3") {
        return Lattice::make({"bot", "u", "top"}, {{"bot", "u"}, {"u", "top"}});
    }
    if (name == "4") {
        return Lattice::make({"bot", "n", "s", "top"}, {{"bot", "n"}, {"n", "s"}, {"s", "top"}});
    }
    if (name == "2x2") {
        return Lattice::make({"bot", "a", "b", "top"},
                             {{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}});
    }
    if (name == "2+2x2") {
        return Lattice::make({"bot", "undec^incons", "undec", "incons", "undec+incons", "top"},
                             {{"bot", "undec^incons"},
                              {"undec^incons", "undec"},
                              {"undec^incons", "incons"},
                              {"undec", "undec+incons"},
                              {"incons", "undec+incons"},
                              {"undec+incons", "top"}});
    }
    if (name == "2+2x2+2x2") {
        return Lattice::make({"bot", "bot_d^bot_g", "bot_d", "bot_g", "undec", "top_d", "top_g",
                              "top_d+top_g", "top"},
                             {{"bot", "bot_d^bot_g"},
                              {"bot_d^bot_g", "bot_d"},
                              {"bot_d^bot_g", "bot_g"},
                              {"bot_d", "undec"},
                              {"bot_g", "undec"},
                              {"undec", "top_d"},
                              {"undec", "top_g"},
                              {"top_d", "top_d+top_g"},
                              {"top_g", "top_d+top_g"},
                              {"top_d+top_g", "top"}});
    }
    if (name == "M5") {
        return Lattice::make({"bot", "l1", "l2", "l3", "top"},
                             {{"bot", "l1"}, {"bot", "l2"}, {"bot", "l3"},
                              {"l1", "top"}, {"l2", "top"}, {"l3", "top"}});
    }
    if (name == "N5") {
        return Lattice::make({"bot", "a", "b", "c", "top"},
                             {{"bot", "a"}, {"a", "b"}, {"b", "top"}, {"bot", "c"}, {"c", "top"}});
    }
    throw Error(ErrorCode::unknown_element, "no built-in lattice named '" + std::string(name) + "'");
}

} // namespace

LatticePtr builtin_lattice(std::string_view name) {
    // Shared instances, so models built from the same built-in compare equal.
    static const std::vector<std::string> names = builtin_lattice_names();
    static const std::vector<LatticePtr> cache = [] {
        std::vector<LatticePtr> out;
        for (const auto& n : builtin_lattice_names()) {
            out.push_back(make_builtin(n));
        }
        return out;
    }();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return cache[i];
        }
    }
    return make_builtin(name);
}

std::vector<std::string> builtin_lattice_names() {
    return {"2", "3", "4", "2x2", "2+2x2", "2+2x2+2x2", "M5", "N5"};
}

LatticePtr chain_lattice(std::size_t n) {
    std::vector<std::string> names;
    Edges edges;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
        if (i > 0) {
            edges.emplace_back(names[i - 1], names[i]);
        }
    }
    return Lattice::make(names, edges);
}

} // namespace mvstrat
