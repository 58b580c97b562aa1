#include "mvstrat/projection.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mvstrat/error.hpp"

namespace mvstrat {

TwoValuedCGS::TwoValuedCGS(StructurePtr structure, std::vector<std::string> props, std::vector<StateSet> holds,
                           std::map<std::string, bool> constants)
    : structure_(std::move(structure)),
      props_(std::move(props)),
      holds_(std::move(holds)),
      constants_(std::move(constants)) {
    if (props_.size() != holds_.size()) {
        throw Error(ErrorCode::invalid_model, "one state set per proposition expected");
    }
    for (std::size_t i = 0; i < props_.size(); ++i) {
        if (holds_[i].universe() != structure_->num_states()) {
            throw Error(ErrorCode::invalid_model, "state set of '" + props_[i] + "' has the wrong universe");
        }
        index_.emplace(props_[i], i);
    }
    constants_.erase("true");
    constants_.erase("false");
}

std::optional<std::size_t> TwoValuedCGS::find_proposition(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const StateSet& TwoValuedCGS::holds(std::string_view prop) const {
    auto p = find_proposition(prop);
    if (!p) {
        throw Error(ErrorCode::unknown_proposition, std::string(prop));
    }
    return holds_[*p];
}

std::optional<bool> TwoValuedCGS::constant(std::string_view name) const {
    if (name == "true") {
        return true;
    }
    if (name == "false") {
        return false;
    }
    auto it = constants_.find(std::string(name));
    if (it == constants_.end()) {
        return std::nullopt;
    }
    return it->second;
}

TwoValuedCGS TwoValuedCGS::with_proposition(const std::string& name, StateSet holds) const {
    auto props = props_;
    auto sets = holds_;
    if (auto p = find_proposition(name)) {
        sets[*p] = std::move(holds);
    } else {
        props.push_back(name);
        sets.push_back(std::move(holds));
    }
    return TwoValuedCGS(structure_, std::move(props), std::move(sets), constants_);
}

bool same_labelling(const TwoValuedCGS& a, const TwoValuedCGS& b) {
    if (a.structure().fingerprint() != b.structure().fingerprint() ||
        a.propositions().size() != b.propositions().size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.propositions().size(); ++i) {
        auto j = b.find_proposition(a.propositions()[i]);
        if (!j || !(a.holds(i) == b.holds(*j))) {
            return false;
        }
    }
    return true;
}

TwoValuedCGS to_two_valued(const MvCGS& m) {
    const Lattice& l = m.lattice();
    if (l.size() != 2) {
        throw Error(ErrorCode::lattice_mismatch, "a two-element lattice is required");
    }
    std::vector<StateSet> holds;
    for (std::size_t p = 0; p < m.propositions().size(); ++p) {
        StateSet s(m.num_states());
        auto vals = m.values(p);
        for (StateId q = 0; q < vals.size(); ++q) {
            if (vals[q] == l.top()) {
                s.insert(q);
            }
        }
        holds.push_back(std::move(s));
    }
    std::map<std::string, bool> constants;
    for (const auto& [c, e] : m.interpretation().constants()) {
        constants.emplace(c, e == l.top());
    }
    return TwoValuedCGS(m.structure_ptr(), m.propositions(), std::move(holds), std::move(constants));
}

namespace {

// r applied to elements of `lattice`, which must be r.source up to renumbering.
std::vector<Element> source_mapping(const Lattice& lattice, const ReductionMap& r) {
    if (!lattice.equivalent(*r.source)) {
        throw Error(ErrorCode::lattice_mismatch, "the reduction map's source is not the model's lattice");
    }
    std::vector<Element> out;
    out.reserve(lattice.size());
    for (Element x : lattice.elements()) {
        out.push_back(r(r.source->element(lattice.name(x))));
    }
    return out;
}

} // namespace

MvCGS project(const MvCGS& m, const ReductionMap& r) {
    const auto f = source_mapping(m.lattice(), r);
    if (auto c = check_reduction_triple(r, TripleMode::homomorphism); !c) {
        throw Error(ErrorCode::not_homomorphism, c.reason);
    }
    std::vector<std::vector<Element>> values;
    for (std::size_t p = 0; p < m.propositions().size(); ++p) {
        std::vector<Element> v;
        for (Element x : m.values(p)) {
            v.push_back(f[x.id]);
        }
        values.push_back(std::move(v));
    }
    std::map<std::string, Element> constants;
    for (const auto& [c, e] : m.interpretation().constants()) {
        constants.emplace(c, f[e.id]);
    }
    LatticePtr wl = m.weight_lattice();
    std::vector<Element> weights(m.weights().begin(), m.weights().end());
    if (wl && wl->equivalent(*r.source)) {
        const auto fw = source_mapping(*wl, r);
        for (Element& w : weights) {
            if (w.id != no_position) {
                w = fw[w.id];
            }
        }
        wl = r.target;
    }
    return m.relabel(InterpretedLattice(r.target, std::move(constants)), std::move(values), std::move(wl),
                     std::move(weights));
}

TwoValuedCGS project_threshold(const MvCGS& m, Element level) {
    const Lattice& l = m.lattice();
    if (!l.is_distributive()) {
        throw Error(ErrorCode::not_distributive, "threshold projection needs a distributive lattice");
    }
    if (!l.contains(level)) {
        throw Error(ErrorCode::unknown_element, "level is not an element of the model's lattice");
    }
    if (!l.is_join_irreducible(level)) {
        throw Error(ErrorCode::not_join_irreducible, "'" + l.name(level) + "'");
    }
    std::vector<StateSet> holds;
    for (std::size_t p = 0; p < m.propositions().size(); ++p) {
        StateSet s(m.num_states());
        auto vals = m.values(p);
        for (StateId q = 0; q < vals.size(); ++q) {
            if (l.leq(level, vals[q])) {
                s.insert(q);
            }
        }
        holds.push_back(std::move(s));
    }
    std::map<std::string, bool> constants;
    for (const auto& [c, e] : m.interpretation().constants()) {
        constants.emplace(c, l.leq(level, e));
    }
    return TwoValuedCGS(m.structure_ptr(), m.propositions(), std::move(holds), std::move(constants));
}

ProjectionCache::ProjectionCache(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    std::filesystem::create_directories(*directory_, ec);
    if (ec) {
        throw Error(ErrorCode::io_error, "cannot create cache directory " + directory_->string());
    }
}

std::shared_ptr<const TwoValuedCGS> ProjectionCache::get(const MvCGS& m, Element level) {
    const auto key = std::make_pair(m.fingerprint(), level.id);
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            ++hits_;
            return it->second;
        }
    }
    std::shared_ptr<const TwoValuedCGS> p;
    if (auto loaded = load(m, level)) {
        p = std::make_shared<const TwoValuedCGS>(std::move(*loaded));
    } else {
        p = std::make_shared<const TwoValuedCGS>(project_threshold(m, level));
        store(m, level, *p);
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, p);
    if (inserted) {
        ++misses_;
    } else {
        ++hits_;
    }
    return it->second;
}

std::size_t ProjectionCache::hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
}

std::size_t ProjectionCache::misses() const {
    std::lock_guard lock(mutex_);
    return misses_;
}

namespace {

std::filesystem::path cache_file(const std::filesystem::path& dir, const MvCGS& m, Element level) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%016llx-%u.proj", static_cast<unsigned long long>(m.fingerprint()), level.id);
    return dir / buf;
}

constexpr const char* cache_magic = "mvstrat-projection 1";

} // namespace

// Format: magic line, "<states> <props>", then one line per proposition with
// its name and member states, then one line per constant.
std::optional<TwoValuedCGS> ProjectionCache::load(const MvCGS& m, Element level) const {
    if (!directory_) {
        return std::nullopt;
    }
    std::ifstream in(cache_file(*directory_, m, level));
    if (!in) {
        return std::nullopt;
    }
    std::string line;
    if (!std::getline(in, line) || line != cache_magic) {
        return std::nullopt;
    }
    std::size_t n = 0;
    std::size_t np = 0;
    if (!(in >> n >> np) || n != m.num_states() || np != m.propositions().size()) {
        return std::nullopt;
    }
    std::vector<std::string> props;
    std::vector<StateSet> holds;
    for (std::size_t i = 0; i < np; ++i) {
        std::string name;
        std::size_t count = 0;
        if (!(in >> name >> count) || name != m.propositions()[i]) {
            return std::nullopt;
        }
        StateSet s(n);
        for (std::size_t k = 0; k < count; ++k) {
            StateId q = 0;
            if (!(in >> q) || q >= n) {
                return std::nullopt;
            }
            s.insert(q);
        }
        props.push_back(std::move(name));
        holds.push_back(std::move(s));
    }
    std::size_t nc = 0;
    if (!(in >> nc)) {
        return std::nullopt;
    }
    std::map<std::string, bool> constants;
    for (std::size_t i = 0; i < nc; ++i) {
        std::string name;
        int v = 0;
        if (!(in >> name >> v)) {
            return std::nullopt;
        }
        constants.emplace(std::move(name), v != 0);
    }
    return TwoValuedCGS(m.structure_ptr(), std::move(props), std::move(holds), std::move(constants));
}

void ProjectionCache::store(const MvCGS& m, Element level, const TwoValuedCGS& p) const {
    if (!directory_) {
        return;
    }
    const auto path = cache_file(*directory_, m, level);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            return;
        }
        out << cache_magic << '\n' << p.num_states() << ' ' << p.propositions().size() << '\n';
        for (std::size_t i = 0; i < p.propositions().size(); ++i) {
            const auto members = p.holds(i).members();
            out << p.propositions()[i] << ' ' << members.size();
            for (StateId q : members) {
                out << ' ' << q;
            }
            out << '\n';
        }
        out << p.constants().size() << '\n';
        for (const auto& [c, v] : p.constants()) {
            out << c << ' ' << (v ? 1 : 0) << '\n';
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
}

namespace {

bool vacuous_operand(const MvCGS& m, const Formula& f) {
    if (f.op() != StateOp::constant) {
        return false;
    }
    auto e = m.interpretation().constant(f.name());
    return e && (*e == m.lattice().bottom() || *e == m.lattice().top());
}

// Distinct values with the first state realizing each, ordered by element id.
std::map<Element, StateId> realized(const std::vector<Element>& vals) {
    std::map<Element, StateId> out;
    for (StateId q = 0; q < vals.size(); ++q) {
        out.emplace(vals[q], q);
    }
    return out;
}

} // namespace

ConditionReport check_formula_conditions(const MvCGS& m, const Formula& f, const ReductionMap& r,
                                         const std::vector<OperandValues>& values, ConditionScope scope) {
    const Lattice& src = m.lattice();
    const Lattice& dst = *r.target;
    const auto fmap = source_mapping(src, r);

    auto c1 = [&](Element x1, Element x2) { return !src.less(x1, x2) || dst.less(fmap[x1.id], fmap[x2.id]); };
    auto c2 = [&](Element x1, Element x2) {
        return !src.incomparable(x1, x2) || dst.less(fmap[x2.id], fmap[x1.id]);
    };

    ConditionReport report;
    for (const Formula& sub : classify(expand_derived(f)).subformulas) {
        if (sub.op() != StateOp::implies) {
            continue;
        }
        if (vacuous_operand(m, sub.lhs()) || vacuous_operand(m, sub.rhs())) {
            continue;
        }
        auto it = std::find_if(values.begin(), values.end(),
                               [&](const OperandValues& v) { return v.implication == sub; });
        if (it == values.end()) {
            throw Error(ErrorCode::missing_values, "no operand values for " + to_string(sub));
        }
        if (it->lhs.size() != m.num_states() || it->rhs.size() != m.num_states()) {
            throw Error(ErrorCode::missing_values, "operand values of " + to_string(sub) + " do not cover every state");
        }

        auto check_pair = [&](Element x1, StateId q1, Element x2, StateId q2) -> bool {
            if (!c1(x1, x2)) {
                report.witness = ConditionWitness{sub, "C1'", q1, q2, x1, x2, !c1(x2, x1)};
            } else if (!c2(x1, x2)) {
                report.witness = ConditionWitness{sub, "C2'", q1, q2, x1, x2, !c2(x2, x1)};
            } else {
                return true;
            }
            report.ok = false;
            return false;
        };

        if (scope == ConditionScope::per_state) {
            for (StateId q = 0; q < m.num_states(); ++q) {
                if (!check_pair(it->lhs[q], q, it->rhs[q], q)) {
                    return report;
                }
            }
        } else {
            const auto left = realized(it->lhs);
            const auto right = realized(it->rhs);
            for (const auto& [x1, q1] : left) {
                for (const auto& [x2, q2] : right) {
                    if (!check_pair(x1, q1, x2, q2)) {
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

} // namespace mvstrat
