#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvstrat {

// Sorted, duplicate-free agent names.
using AgentSet = std::vector<std::string>;

enum class StateOp { constant, atom, conj, disj, implies, iff, coalition, no_avoid };
enum class PathOp { state, conj, disj, next, until, weak_until, sometime, always };

namespace detail {
struct StateNode;
struct PathNode;
} // namespace detail

class PathFormula;

class Formula {
public:
    static Formula constant(std::string name);
    static Formula atom(std::string name);
    static Formula conj(Formula lhs, Formula rhs);
    static Formula disj(Formula lhs, Formula rhs);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);
    static Formula coalition(AgentSet agents, PathFormula path);
    static Formula no_avoid(AgentSet agents, PathFormula path);
    static Formula top() { return constant("true"); }
    static Formula bottom() { return constant("false"); }

    [[nodiscard]] StateOp op() const noexcept;
    // Constant or atom name.
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const Formula& lhs() const;
    [[nodiscard]] const Formula& rhs() const;
    [[nodiscard]] const AgentSet& agents() const;
    [[nodiscard]] const PathFormula& path() const;

    [[nodiscard]] bool is_strategic() const noexcept {
        return op() == StateOp::coalition || op() == StateOp::no_avoid;
    }
    [[nodiscard]] std::size_t hash() const noexcept;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    explicit Formula(std::shared_ptr<const detail::StateNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::StateNode> node_;
};

class PathFormula {
public:
    static PathFormula state(Formula f);
    // Two state operands collapse into State(And(...)) so that parse and print
    // agree on one canonical tree.
    static PathFormula conj(PathFormula lhs, PathFormula rhs);
    static PathFormula disj(PathFormula lhs, PathFormula rhs);
    static PathFormula next(PathFormula g);
    static PathFormula until(PathFormula lhs, PathFormula rhs);
    static PathFormula weak_until(PathFormula lhs, PathFormula rhs);
    static PathFormula sometime(PathFormula g);
    static PathFormula always(PathFormula g);

    [[nodiscard]] PathOp op() const noexcept;
    [[nodiscard]] const Formula& state_formula() const;
    [[nodiscard]] const PathFormula& lhs() const;
    [[nodiscard]] const PathFormula& rhs() const;
    [[nodiscard]] std::size_t hash() const noexcept;

    friend bool operator==(const PathFormula& a, const PathFormula& b);

private:
    friend class PathFactory;
    explicit PathFormula(std::shared_ptr<const detail::PathNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::PathNode> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// If agents is non-null every coalition member must belong to it.
[[nodiscard]] Formula parse_formula(std::string_view text, const std::vector<std::string>* agents = nullptr);
[[nodiscard]] std::string to_string(const Formula& f);
[[nodiscard]] std::string to_string(const PathFormula& g);

// F g -> true U g, G g -> g W false, a <-> b -> (a -> b) & (b -> a).
[[nodiscard]] Formula expand_derived(const Formula& f);

struct Classification {
    bool atl_fragment = true;
    bool implication_free = true;
    std::vector<Formula> subformulas; // distinct, children first
    std::optional<Formula> first_implication;
};

[[nodiscard]] Classification classify(const Formula& f);

// Replaces every occurrence of target (including inside path formulas).
[[nodiscard]] Formula substitute(const Formula& f, const Formula& target, const Formula& replacement);

[[nodiscard]] std::vector<std::string> atoms_of(const Formula& f);
[[nodiscard]] std::vector<std::string> constants_of(const Formula& f);

// Prefix reserved for atoms introduced by the checker; the parser rejects it.
inline constexpr std::string_view reserved_atom_prefix = "__";

} // namespace mvstrat
