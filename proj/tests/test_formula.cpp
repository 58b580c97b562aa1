#include <gtest/gtest.h>

#include <random>

#include "mvstrat/error.hpp"
#include "mvstrat/formula.hpp"
#include "pools.hpp"

using namespace mvstrat;

namespace {

Formula parse(const std::string& s) { return parse_formula(s); }

PathFormula sp(const Formula& f) { return PathFormula::state(f); }

bool has_derived(const Formula& f);

bool has_derived_path(const PathFormula& g) {
    switch (g.op()) {
    case PathOp::state:
        return has_derived(g.state_formula());
    case PathOp::sometime:
    case PathOp::always:
        return true;
    case PathOp::next:
        return has_derived_path(g.lhs());
    default:
        return has_derived_path(g.lhs()) || has_derived_path(g.rhs());
    }
}

bool has_derived(const Formula& f) {
    switch (f.op()) {
    case StateOp::constant:
    case StateOp::atom:
        return false;
    case StateOp::iff:
        return true;
    case StateOp::coalition:
    case StateOp::no_avoid:
        return has_derived_path(f.path());
    default:
        return has_derived(f.lhs()) || has_derived(f.rhs());
    }
}

// Random formulas over a small vocabulary, including full path nesting.
struct Gen {
    std::mt19937_64 rng;

    std::size_t pick(std::size_t n) { return rng() % n; }

    AgentSet agents() {
        AgentSet a;
        for (const char* x : {"1", "2", "3"}) {
            if (pick(2) == 0) {
                a.push_back(x);
            }
        }
        return a;
    }

    Formula state(int depth) {
        const std::size_t k = depth <= 0 ? pick(2) : pick(8);
        switch (k) {
        case 0: return Formula::atom(pick(2) ? "p" : "q_1");
        case 1: return Formula::constant(pick(2) ? "top" : "true");
        case 2: return Formula::conj(state(depth - 1), state(depth - 1));
        case 3: return Formula::disj(state(depth - 1), state(depth - 1));
        case 4: return Formula::implies(state(depth - 1), state(depth - 1));
        case 5: return Formula::iff(state(depth - 1), state(depth - 1));
        case 6: return Formula::coalition(agents(), path(depth - 1));
        default: return Formula::no_avoid(agents(), path(depth - 1));
        }
    }

    PathFormula path(int depth) {
        const std::size_t k = depth <= 0 ? 0 : pick(8);
        switch (k) {
        case 0: return PathFormula::state(state(depth - 1));
        case 1: return PathFormula::conj(path(depth - 1), path(depth - 1));
        case 2: return PathFormula::disj(path(depth - 1), path(depth - 1));
        case 3: return PathFormula::next(path(depth - 1));
        case 4: return PathFormula::until(path(depth - 1), path(depth - 1));
        case 5: return PathFormula::weak_until(path(depth - 1), path(depth - 1));
        case 6: return PathFormula::sometime(path(depth - 1));
        default: return PathFormula::always(path(depth - 1));
        }
    }
};

} // namespace

TEST(Formula, ParseExamples) {
    EXPECT_EQ(parse("<<1>> F pol1"), Formula::coalition({"1"}, PathFormula::sometime(sp(Formula::atom("pol1")))));
    EXPECT_EQ(parse("#undec -> <<1>> G pol1"),
              Formula::implies(Formula::constant("undec"),
                               Formula::coalition({"1"}, PathFormula::always(sp(Formula::atom("pol1"))))));
    EXPECT_EQ(parse("[[ ]] F target"), Formula::no_avoid({}, PathFormula::sometime(sp(Formula::atom("target")))));
}

TEST(Formula, Precedence) {
    const Formula p = Formula::atom("p");
    const Formula q = Formula::atom("q");
    const Formula r = Formula::atom("r");
    EXPECT_EQ(parse("p & q | r"), Formula::disj(Formula::conj(p, q), r));
    EXPECT_EQ(parse("p | q & r"), Formula::disj(p, Formula::conj(q, r)));
    EXPECT_EQ(parse("p -> q -> r"), Formula::implies(p, Formula::implies(q, r)));
    EXPECT_EQ(parse("p <-> q -> r"), Formula::iff(p, Formula::implies(q, r)));
    EXPECT_EQ(parse("p | q -> r"), Formula::implies(Formula::disj(p, q), r));
    EXPECT_EQ(parse("<<1>> (p U q)"), Formula::coalition({"1"}, PathFormula::until(sp(p), sp(q))));
    EXPECT_EQ(parse("<<2,1>> X p"), Formula::coalition({"1", "2"}, PathFormula::next(sp(p))));
}

TEST(Formula, SyntaxErrors) {
    for (const char* bad : {"", "p &", "!p", "<<1> F p", "(p", "p q", "<<1>>", "#", "__imp1", "<<1>> F"}) {
        EXPECT_THROW((void)parse(bad), SyntaxError) << bad;
    }
    try {
        (void)parse("p & !q");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 4U);
        EXPECT_EQ(e.code(), ErrorCode::syntax_error);
    }
}

TEST(Formula, UnknownAgent) {
    const std::vector<std::string> agents{"1", "2"};
    EXPECT_NO_THROW((void)parse_formula("<<1,2>> X p", &agents));
    try {
        (void)parse_formula("<<3>> X p", &agents);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_agent);
    }
}

TEST(Formula, ExpandDerived) {
    const Formula p = Formula::atom("p");
    const Formula q = Formula::atom("q");
    EXPECT_EQ(expand_derived(parse("<<1>> F p")),
              Formula::coalition({"1"}, PathFormula::until(sp(Formula::top()), sp(p))));
    EXPECT_EQ(expand_derived(parse("<<1>> G p")),
              Formula::coalition({"1"}, PathFormula::weak_until(sp(p), sp(Formula::bottom()))));
    EXPECT_EQ(expand_derived(parse("p <-> q")), Formula::conj(Formula::implies(p, q), Formula::implies(q, p)));
}

TEST(Formula, ClassifyExamples) {
    const auto a = classify(parse("<<1>> X p"));
    EXPECT_TRUE(a.atl_fragment);
    EXPECT_TRUE(a.implication_free);
    EXPECT_FALSE(classify(parse("<<1>> (F p & F q)")).atl_fragment);
    const Formula f = parse("#undec -> <<1>> G p");
    const auto c = classify(expand_derived(f));
    ASSERT_TRUE(c.first_implication);
    EXPECT_EQ(*c.first_implication, expand_derived(f));
    EXPECT_FALSE(c.implication_free);
}

TEST(Formula, FirstImplicationIsInnermostLeftmost) {
    const auto c = classify(parse("(p -> q) -> ((r -> p) & q)"));
    ASSERT_TRUE(c.first_implication);
    EXPECT_EQ(*c.first_implication, parse("p -> q"));
    const auto d = classify(parse("<<1>> X ((q -> p) -> r)"));
    EXPECT_EQ(*d.first_implication, parse("q -> p"));
}

TEST(Formula, PrintParseRoundTripOnPools) {
    for (const auto* pool : {&mvtest::implication_free_pool(), &mvtest::implication_pool()}) {
        for (const auto& s : *pool) {
            const Formula f = parse(s);
            EXPECT_EQ(parse(to_string(f)), f) << s;
        }
    }
}

TEST(Formula, PrintParseRoundTripRandom) {
    Gen g{std::mt19937_64(7)};
    for (int i = 0; i < 2000; ++i) {
        const Formula f = g.state(4);
        const std::string text = to_string(f);
        EXPECT_EQ(parse(text), f) << text;
    }
}

TEST(Formula, ExpansionPropertiesRandom) {
    Gen g{std::mt19937_64(11)};
    for (int i = 0; i < 1000; ++i) {
        const Formula f = g.state(4);
        const Formula e = expand_derived(f);
        EXPECT_FALSE(has_derived(e)) << to_string(f);
        EXPECT_EQ(expand_derived(e), e);
        EXPECT_EQ(atoms_of(e), atoms_of(f));
    }
}

TEST(Formula, SubformulasAreDistinctAndChildrenFirst) {
    Gen g{std::mt19937_64(13)};
    for (int i = 0; i < 500; ++i) {
        const auto c = classify(expand_derived(g.state(4)));
        for (std::size_t a = 0; a < c.subformulas.size(); ++a) {
            for (std::size_t b = a + 1; b < c.subformulas.size(); ++b) {
                EXPECT_FALSE(c.subformulas[a] == c.subformulas[b]);
            }
            const Formula& f = c.subformulas[a];
            if (f.op() == StateOp::conj || f.op() == StateOp::disj || f.op() == StateOp::implies) {
                for (const Formula* child : {&f.lhs(), &f.rhs()}) {
                    const auto pos = std::find(c.subformulas.begin(), c.subformulas.end(), *child);
                    ASSERT_NE(pos, c.subformulas.end());
                    EXPECT_LT(static_cast<std::size_t>(pos - c.subformulas.begin()), a);
                }
            }
        }
        ASSERT_FALSE(c.subformulas.empty());
    }
}

TEST(Formula, Substitute) {
    const Formula f = parse("<<1>> F (p -> q) & (p -> q)");
    const Formula g = substitute(f, parse("p -> q"), Formula::atom("x"));
    EXPECT_EQ(g, parse("<<1>> F x & x"));
}

TEST(Formula, AtomsAndConstants) {
    const Formula f = parse("#top -> <<1>> (p U (q & #u)) | p");
    EXPECT_EQ(atoms_of(f), (std::vector<std::string>{"p", "q"}));
    EXPECT_EQ(constants_of(f), (std::vector<std::string>{"top", "u"}));
}
