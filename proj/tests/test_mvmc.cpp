#include <gtest/gtest.h>

#include <random>

#include "mvstrat/drones.hpp"
#include "mvstrat/error.hpp"
#include "mvstrat/mvmc.hpp"
#include "pools.hpp"
#include "random_models.hpp"

using namespace mvstrat;

namespace {

const std::vector<std::string> kLattices{"2", "3", "4", "2x2", "2+2x2", "2+2x2+2x2"};

std::string value_at(const MvCGS& m, const std::string& formula, const std::string& state,
                     const CheckerConfig& cfg = {}) {
    const auto out = check(m, parse_formula(formula), cfg);
    return m.lattice().name(out.value()[m.structure().state(state)]);
}

ErrorCode error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::io_error;
}

CheckerConfig with(Algorithm a, Semantics s = Semantics::perfect) {
    CheckerConfig c;
    c.algorithm = a;
    c.semantics = s;
    return c;
}

} // namespace

TEST(Mvmc, DroneExampleValues) {
    const MvCGS m = builtin_model("paper:mmulti");
    for (Algorithm a : {Algorithm::recursive, Algorithm::oracle, Algorithm::translate}) {
        const auto cfg = with(a);
        EXPECT_EQ(value_at(m, "<<1>> F pol1", "(0,0)", cfg), "top");
        EXPECT_EQ(value_at(m, "<<1>> G pol1", "(0,0)", cfg), "undec");
        EXPECT_EQ(value_at(m, "<<1,2>> F (target & allvisited & (pol1 | pol2))", "(0,0)", cfg), "top_d");
    }
    for (Algorithm a : {Algorithm::recursive, Algorithm::oracle}) {
        const auto cfg = with(a);
        EXPECT_EQ(value_at(m, "#undec -> <<1>> G pol1", "(0,0)", cfg), "top");
        EXPECT_EQ(value_at(m, "#top -> <<1>> G pol1", "(0,0)", cfg), "bot");
        EXPECT_EQ(value_at(m, "<<1>> F pol1 -> <<2>> F pol2", "(0,0)", cfg), "top");
        EXPECT_EQ(value_at(m, "<<1>> F (pol1 <-> #top_g)", "(0,0)", cfg), "bot");
    }
}

TEST(Mvmc, LocalCheck) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto q = m.structure().state("(0,0)");
    const auto [lo, hi] = mcheck_tr(m, q, parse_formula("<<1,2>> F (target & allvisited & (pol1 | pol2))"));
    EXPECT_EQ(m.lattice().name(lo), "top_d");
    EXPECT_EQ(lo, hi);
    EXPECT_EQ(error_of([&] { (void)mcheck_tr(m, q, parse_formula("pol1 -> pol2")); }), ErrorCode::implication_present);
}

TEST(Mvmc, TruthLevels) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto q = m.structure().state("(0,0)");
    EXPECT_TRUE(truth_level(m, q, parse_formula("#true")));
    EXPECT_TRUE(truth_level(m, q, parse_formula("#undec -> <<1>> G pol1")));
    EXPECT_FALSE(truth_level(m, q, parse_formula("<<1>> F (pol1 <-> #top_g)")));
    EXPECT_TRUE(valid_in_model(m, parse_formula("pol1 -> #top")));
    EXPECT_FALSE(valid_in_model(m, parse_formula("pol1")));
}

TEST(Mvmc, ConstantAndAtomValuations) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto top = gmcheck_tr(m, parse_formula("#true")).value();
    for (StateId q = 0; q < m.num_states(); ++q) {
        EXPECT_EQ(top[q], m.lattice().top());
    }
    const auto atom = gmcheck_tr(m, parse_formula("pol1")).value();
    for (StateId q = 0; q < m.num_states(); ++q) {
        EXPECT_EQ(atom[q], m.value("pol1", q));
    }
}

TEST(Mvmc, FinallyPolReachability) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto v = gmcheck_tr(m, parse_formula("<<1>> F pol1")).value();
    for (const char* s : {"(0,0)", "(1,1)", "(1,2)", "(3,3)_1", "(3,3)_2"}) {
        EXPECT_NE(m.lattice().name(v[m.structure().state(s)]), "bot") << s;
    }
    EXPECT_EQ(m.lattice().name(v[m.structure().state("(0,0)")]), "top");
}

TEST(Mvmc, ImperfectExample) {
    const MvCGS m = builtin_model("paper:mmulti_imperfect");
    for (Algorithm a : {Algorithm::recursive, Algorithm::oracle, Algorithm::translate}) {
        const auto cfg = with(a, Semantics::ir_exact);
        EXPECT_EQ(value_at(m, "<<1>> F pol1", "(0,0)", cfg), "top");
        EXPECT_EQ(value_at(m, "<<2>> F pol2", "(0,0)", cfg), "top");
        EXPECT_EQ(value_at(m, "<<1,2>> F (target & allvisited & (pol1 | pol2))", "(0,0)", cfg), "bot");
    }
    const auto out = gmcheck_tr(m, parse_formula("<<1>> F pol1"), with(Algorithm::translate, Semantics::ir_exact));
    EXPECT_FALSE(out.witnesses.empty());
}

TEST(Mvmc, Errors) {
    const MvCGS m = builtin_model("paper:mmulti");
    EXPECT_EQ(error_of([&] { (void)gmcheck_tr(m, parse_formula("pol1 -> pol2")); }), ErrorCode::implication_present);
    EXPECT_EQ(error_of([&] { (void)gmcheck_tr(m, parse_formula("<<1>> (F pol1 & F pol2)")); }),
              ErrorCode::not_atl_fragment);
    EXPECT_EQ(error_of([&] { (void)gmcheck_tr(m, parse_formula("<<1>> F pol1"), with(Algorithm::translate, Semantics::ir_exact)); }),
              ErrorCode::invalid_model);

    const auto m5 = builtin_lattice("M5");
    MvCGSBuilder b{InterpretedLattice(m5)};
    const auto a = b.agent("1");
    const auto q = b.state("q");
    b.transition(q, {b.action("x")}, q);
    (void)a;
    const MvCGS nd = b.build();
    EXPECT_EQ(error_of([&] { (void)gmcheck_tr(nd, parse_formula("#true")); }), ErrorCode::not_distributive);
    EXPECT_EQ(error_of([&] { (void)mv_oracle(nd, parse_formula("#true")); }), ErrorCode::not_distributive);
}

TEST(Mvmc, OracleScaleCap) {
    const MvCGS m = builtin_model("paper:mmulti_imperfect");
    CheckerConfig cfg = with(Algorithm::oracle, Semantics::ir_exact);
    cfg.oracle_cap = 1;
    EXPECT_EQ(error_of([&] { (void)check(m, parse_formula("<<1,2>> F pol1"), cfg); }),
              ErrorCode::oracle_scale_exceeded);
}

TEST(Mvmc, FreshAtomsAreRecorded) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto out = gmcheck_rec(m, parse_formula("(pol1 -> pol2) & <<1>> X (pol2 -> #top)"));
    ASSERT_EQ(out.fresh_atoms.size(), 2U);
    for (const auto& f : out.fresh_atoms) {
        EXPECT_EQ(f.name.rfind("__", 0), 0U);
        EXPECT_EQ(f.replaced.op(), StateOp::implies);
    }
    EXPECT_NE(out.fresh_atoms[0].name, out.fresh_atoms[1].name);
}

TEST(Mvmc, TimingsPerLevel) {
    const MvCGS m = builtin_model("paper:mmulti");
    const auto out = gmcheck_tr(m, parse_formula("<<1>> F pol1"));
    ASSERT_EQ(out.timings.size(), m.lattice().join_irreducibles().size());
    for (std::size_t i = 0; i < out.timings.size(); ++i) {
        EXPECT_EQ(out.timings[i].level, m.lattice().join_irreducibles()[i]);
        EXPECT_GE(out.timings[i].seconds, 0.0);
    }
}

TEST(Mvmc, ParallelLevelsAreDeterministic) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const MvCGS m = mvtest::random_model(rng, InterpretedLattice(builtin_lattice("2+2x2+2x2")));
        for (const auto& s : mvtest::implication_free_pool()) {
            CheckerConfig serial;
            CheckerConfig parallel;
            parallel.parallelism = 4;
            EXPECT_EQ(gmcheck_tr(m, parse_formula(s), serial).value(), gmcheck_tr(m, parse_formula(s), parallel).value());
        }
    }
}

TEST(Mvmc, TranslateRecursiveOracleAgreeOnRandomModels) {
    std::mt19937_64 rng(22);
    for (const auto& name : kLattices) {
        const InterpretedLattice l(builtin_lattice(name));
        for (int i = 0; i < 25; ++i) {
            const MvCGS m = mvtest::random_model(rng, l);
            for (const auto& s : mvtest::implication_free_pool()) {
                const Formula f = parse_formula(s);
                const auto tr = gmcheck_tr(m, f).value();
                EXPECT_EQ(tr, gmcheck_rec(m, f).value()) << name << " " << s;
                EXPECT_EQ(tr, mv_oracle(m, f).value()) << name << " " << s;
            }
            for (const auto& s : mvtest::implication_pool()) {
                const Formula f = parse_formula(s);
                EXPECT_EQ(gmcheck_rec(m, f).value(), mv_oracle(m, f).value()) << name << " " << s;
            }
        }
    }
}

TEST(Mvmc, IrExactAgreesWithOracle) {
    std::mt19937_64 rng(23);
    mvtest::RandomModelOptions opts;
    opts.epistemic = true;
    opts.max_states = 6;
    opts.max_actions = 2;
    for (const char* name : {"3", "2x2", "2+2x2"}) {
        const InterpretedLattice l(builtin_lattice(name));
        for (int i = 0; i < 25; ++i) {
            const MvCGS m = mvtest::random_model(rng, l, opts);
            for (const auto& s : mvtest::implication_free_pool()) {
                const Formula f = parse_formula(s);
                const auto tr = gmcheck_tr(m, f, with(Algorithm::translate, Semantics::ir_exact)).value();
                EXPECT_EQ(tr, mv_oracle(m, f, with(Algorithm::oracle, Semantics::ir_exact)).value()) << s;
                EXPECT_EQ(tr, gmcheck_rec(m, f, with(Algorithm::recursive, Semantics::ir_exact)).value()) << s;
            }
        }
    }
}

TEST(Mvmc, ApproximationBoundsBracketExact) {
    std::mt19937_64 rng(24);
    mvtest::RandomModelOptions opts;
    opts.epistemic = true;
    opts.max_actions = 2;
    const InterpretedLattice l(builtin_lattice("2+2x2"));
    for (int i = 0; i < 40; ++i) {
        const MvCGS m = mvtest::random_model(rng, l, opts);
        for (const auto& s : mvtest::implication_free_pool()) {
            const Formula f = parse_formula(s);
            const auto exact = gmcheck_tr(m, f, with(Algorithm::translate, Semantics::ir_exact)).value();
            const auto approx = gmcheck_tr(m, f, with(Algorithm::translate, Semantics::ir_approx));
            const auto lower = gmcheck_tr(m, f, with(Algorithm::translate, Semantics::ir_lower));
            const auto upper = gmcheck_tr(m, f, with(Algorithm::translate, Semantics::ir_upper));
            EXPECT_EQ(approx.lower, lower.lower);
            EXPECT_EQ(approx.upper, upper.upper);
            for (StateId q = 0; q < m.num_states(); ++q) {
                EXPECT_TRUE(m.lattice().leq(approx.lower[q], exact[q])) << s;
                EXPECT_TRUE(m.lattice().leq(exact[q], approx.upper[q])) << s;
            }
        }
    }
}

TEST(Mvmc, ThresholdSetsAreMonotone) {
    std::mt19937_64 rng(25);
    const auto l = builtin_lattice("2+2x2+2x2");
    for (int i = 0; i < 30; ++i) {
        const MvCGS m = mvtest::random_model(rng, InterpretedLattice(l));
        for (const auto& s : mvtest::implication_free_pool()) {
            const Formula f = parse_formula(s);
            const auto ji = l->join_irreducibles();
            for (Element a : ji) {
                for (Element b : ji) {
                    if (!l->leq(a, b)) {
                        continue;
                    }
                    const std::vector<Element> la{a};
                    const std::vector<Element> lb{b};
                    const auto va = gmcheck_tr_levels(m, f, {}, la).value();
                    const auto vb = gmcheck_tr_levels(m, f, {}, lb).value();
                    for (StateId q = 0; q < m.num_states(); ++q) {
                        // In the b-cut implies in the a-cut.
                        if (vb[q] == b) {
                            EXPECT_EQ(va[q], a) << s;
                        }
                    }
                }
            }
        }
    }
}

TEST(Mvmc, ValueIsJoinOfSatisfiedLevels) {
    std::mt19937_64 rng(26);
    const auto l = builtin_lattice("2+2x2");
    for (int i = 0; i < 30; ++i) {
        const MvCGS m = mvtest::random_model(rng, InterpretedLattice(l));
        for (const auto& s : mvtest::implication_free_pool()) {
            const Formula f = parse_formula(s);
            const auto v = gmcheck_tr(m, f).value();
            for (StateId q = 0; q < m.num_states(); ++q) {
                for (Element level : l->join_irreducibles()) {
                    const auto sat = mc_atl_perfect(project_threshold(m, level), f).contains(q);
                    EXPECT_EQ(sat, l->leq(level, v[q])) << s;
                }
            }
        }
    }
}

TEST(Mvmc, ReductionCommutesWithHomomorphisms) {
    std::mt19937_64 rng(27);
    for (const char* name : {"3", "4", "2x2", "2+2x2"}) {
        const auto l = builtin_lattice(name);
        const auto homs = mvtest::all_homomorphisms(l);
        for (int i = 0; i < 30; ++i) {
            const MvCGS m = mvtest::random_model(rng, InterpretedLattice(l));
            const auto& f = homs[rng() % homs.size()];
            const MvCGS fm = project(m, f);
            for (const auto& s : mvtest::implication_free_pool()) {
                const Formula phi = parse_formula(s);
                const auto v = gmcheck_tr(m, phi).value();
                const auto fv = gmcheck_tr(fm, phi).value();
                for (StateId q = 0; q < m.num_states(); ++q) {
                    EXPECT_EQ(f.target->name(f(v[q])), fm.lattice().name(fv[q])) << name << " " << s;
                }
            }
        }
    }
}

TEST(Mvmc, DeadlineAborts) {
    const MvCGS m = builtin_model("paper:mmulti");
    CheckerConfig cfg;
    cfg.deadline = Deadline::after(std::chrono::duration<double>(-1.0));
    EXPECT_EQ(error_of([&] { (void)gmcheck_tr(m, parse_formula("<<1>> F pol1"), cfg); }), ErrorCode::timeout);
}

TEST(Mvmc, CacheGivesSameResults) {
    const MvCGS m = builtin_model("paper:mmulti");
    ProjectionCache cache;
    CheckerConfig cfg;
    cfg.cache = &cache;
    const auto a = gmcheck_rec(m, parse_formula("<<1>> F pol1 -> <<2>> F pol2"), cfg).value();
    const auto b = gmcheck_rec(m, parse_formula("<<1>> F pol1 -> <<2>> F pol2")).value();
    EXPECT_EQ(a, b);
    EXPECT_GT(cache.misses(), 0U);
}
