#include "mvstrat/mvmc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "mvstrat/error.hpp"

namespace mvstrat {

Valuation::Valuation(LatticePtr lattice, std::vector<Element> values)
    : lattice_(std::move(lattice)), values_(std::move(values)) {
    for (Element e : values_) {
        if (!lattice_->contains(e)) {
            throw Error(ErrorCode::unknown_element, "valuation value outside the lattice");
        }
    }
}

Valuation::Valuation(LatticePtr lattice, std::size_t states, Element value)
    : Valuation(std::move(lattice), std::vector<Element>(states, value)) {}

bool operator==(const Valuation& a, const Valuation& b) {
    if (a.size() != b.size()) {
        return false;
    }
    if (a.lattice_ == b.lattice_) {
        return a.values_ == b.values_;
    }
    if (!a.lattice_ || !b.lattice_) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.lattice_->name(a.values_[i]) != b.lattice_->name(b.values_[i])) {
            return false;
        }
    }
    return true;
}

bool CheckOutcome::conclusive(StateId q) const { return lower[q] == upper[q]; }

const Valuation& CheckOutcome::value() const {
    if (!conclusive()) {
        throw Error(ErrorCode::inconclusive, "lower and upper approximations differ");
    }
    return lower;
}

namespace {

struct LevelResult {
    StateSet lower;
    StateSet upper;
    double seconds = 0;
    std::optional<UniformStrategy> witness;
};

Formula checked_formula(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    if (!m.lattice().is_distributive()) {
        throw Error(ErrorCode::not_distributive, "the model's lattice is not distributive");
    }
    if (m.weighted()) {
        throw Error(ErrorCode::invalid_model, "weighted model: prune it with a designated set first");
    }
    if (cfg.semantics != Semantics::perfect && !m.structure().has_epistemic()) {
        throw Error(ErrorCode::invalid_model, "imperfect-information semantics needs epistemic relations");
    }
    Formula g = expand_derived(f);
    const auto c = classify(g);
    if (!c.implication_free) {
        throw Error(ErrorCode::implication_present, to_string(f));
    }
    if (!c.atl_fragment) {
        throw Error(ErrorCode::not_atl_fragment, to_string(f));
    }
    return g;
}

LevelResult run_level(const MvCGS& m, const Formula& g, const CheckerConfig& cfg, Element level) {
    const auto start = std::chrono::steady_clock::now();
    std::shared_ptr<const TwoValuedCGS> p;
    if (cfg.cache) {
        p = cfg.cache->get(m, level);
    } else {
        p = std::make_shared<const TwoValuedCGS>(project_threshold(m, level));
    }
    EngineOptions opts{cfg.strategy_cap, cfg.dead_ends, cfg.deadline};
    LevelResult r;
    switch (cfg.semantics) {
    case Semantics::perfect:
        r.lower = mc_atl_perfect(*p, g, opts);
        r.upper = r.lower;
        break;
    case Semantics::ir_exact: {
        auto ir = mc_atl_ir_exact(*p, g, opts);
        r.lower = std::move(ir.states);
        r.upper = r.lower;
        r.witness = std::move(ir.witness);
        break;
    }
    case Semantics::ir_approx: {
        auto b = mc_atl_ir_bounds(*p, g, opts);
        r.lower = std::move(b.lower);
        r.upper = std::move(b.upper);
        break;
    }
    case Semantics::ir_lower:
    case Semantics::ir_upper:
        r.lower = mc_atl_ir_approx(*p, g, cfg.semantics == Semantics::ir_lower ? Side::lower : Side::upper, opts);
        r.upper = r.lower;
        break;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<LevelResult> run_levels(const MvCGS& m, const Formula& g, const CheckerConfig& cfg,
                                    std::span<const Element> levels) {
    std::vector<LevelResult> results(levels.size());
    std::vector<std::exception_ptr> errors(levels.size());
    const std::size_t workers = std::min<std::size_t>(std::max(1U, cfg.parallelism), levels.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            results[i] = run_level(m, g, cfg, levels[i]);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < levels.size(); i = next++) {
            try {
                results[i] = run_level(m, g, cfg, levels[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

} // namespace

CheckOutcome gmcheck_tr_levels(const MvCGS& m, const Formula& f, const CheckerConfig& cfg,
                               std::span<const Element> levels) {
    const Formula g = checked_formula(m, f, cfg);
    const Lattice& l = m.lattice();
    const auto results = run_levels(m, g, cfg, levels);
    CheckOutcome out{Valuation(m.lattice_ptr(), m.num_states(), l.bottom()),
                     Valuation(m.lattice_ptr(), m.num_states(), l.bottom()),
                     {},
                     {},
                     {}};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (StateId q : results[i].lower.members()) {
            out.lower[q] = l.join(out.lower[q], levels[i]);
        }
        for (StateId q : results[i].upper.members()) {
            out.upper[q] = l.join(out.upper[q], levels[i]);
        }
        out.timings.push_back({levels[i], results[i].seconds});
        if (results[i].witness) {
            out.witnesses.push_back({levels[i], *results[i].witness});
        }
    }
    return out;
}

CheckOutcome gmcheck_tr(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    if (!m.lattice().is_distributive()) {
        throw Error(ErrorCode::not_distributive, "the model's lattice is not distributive");
    }
    const auto ji = m.lattice().join_irreducibles();
    return gmcheck_tr_levels(m, f, cfg, ji);
}

std::pair<Element, Element> mcheck_tr(const MvCGS& m, StateId q, const Formula& f, const CheckerConfig& cfg) {
    if (q >= m.num_states()) {
        throw Error(ErrorCode::unknown_state, "state index " + std::to_string(q));
    }
    const auto out = gmcheck_tr(m, f, cfg);
    return {out.lower[q], out.upper[q]};
}

namespace {

CheckOutcome recursive(const MvCGS& m, const Formula& f, const CheckerConfig& cfg, std::size_t& counter) {
    const Formula g = expand_derived(f);
    const auto c = classify(g);
    if (c.implication_free) {
        return gmcheck_tr(m, g, cfg);
    }
    const Formula imp = *c.first_implication;
    CheckOutcome left = recursive(m, imp.lhs(), cfg, counter);
    CheckOutcome right = recursive(m, imp.rhs(), cfg, counter);
    if (!left.conclusive() || !right.conclusive()) {
        throw Error(ErrorCode::inconclusive, "operand of " + to_string(imp) + " has an open approximate value");
    }
    const Lattice& l = m.lattice();
    std::vector<Element> values(m.num_states());
    for (StateId q = 0; q < m.num_states(); ++q) {
        values[q] = l.leq(left.lower[q], right.lower[q]) ? l.top() : l.bottom();
    }
    std::string name;
    do {
        name = std::string(reserved_atom_prefix) + "imp" + std::to_string(counter++);
    } while (m.find_proposition(name));
    const MvCGS extended = m.with_proposition(name, std::move(values));
    CheckOutcome out = recursive(extended, substitute(g, imp, Formula::atom(name)), cfg, counter);

    std::vector<FreshAtom> fresh = std::move(left.fresh_atoms);
    fresh.insert(fresh.end(), right.fresh_atoms.begin(), right.fresh_atoms.end());
    fresh.push_back({name, imp});
    fresh.insert(fresh.end(), out.fresh_atoms.begin(), out.fresh_atoms.end());
    out.fresh_atoms = std::move(fresh);

    std::vector<LevelTiming> timings = std::move(left.timings);
    timings.insert(timings.end(), right.timings.begin(), right.timings.end());
    timings.insert(timings.end(), out.timings.begin(), out.timings.end());
    out.timings = std::move(timings);
    return out;
}

} // namespace

CheckOutcome gmcheck_rec(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    std::size_t counter = 0;
    CheckOutcome out = recursive(m, f, cfg, counter);
    // Values live in the caller's lattice even though fresh atoms extended the model.
    out.lower = Valuation(m.lattice_ptr(), out.lower.values());
    out.upper = Valuation(m.lattice_ptr(), out.upper.values());
    return out;
}

CheckOutcome check(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    switch (cfg.algorithm) {
    case Algorithm::translate:
        return gmcheck_tr(m, f, cfg);
    case Algorithm::recursive:
        return gmcheck_rec(m, f, cfg);
    case Algorithm::oracle:
        return mv_oracle(m, f, cfg);
    }
    throw Error(ErrorCode::invalid_model, "unknown algorithm");
}

bool truth_level(const MvCGS& m, StateId q, const Formula& f, const CheckerConfig& cfg) {
    if (q >= m.num_states()) {
        throw Error(ErrorCode::unknown_state, "state index " + std::to_string(q));
    }
    const auto out = check(m, f, cfg);
    if (!out.conclusive(q)) {
        throw Error(ErrorCode::inconclusive, "state '" + m.structure().state_name(q) + "'");
    }
    return out.lower[q] == m.lattice().top();
}

bool valid_in_model(const MvCGS& m, const Formula& f, const CheckerConfig& cfg) {
    const auto out = check(m, f, cfg);
    const auto& v = out.value();
    return std::all_of(v.values().begin(), v.values().end(), [&](Element e) { return e == m.lattice().top(); });
}

} // namespace mvstrat
