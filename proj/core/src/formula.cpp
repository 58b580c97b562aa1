#include "mvstrat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_set>

#include "mvstrat/error.hpp"

namespace mvstrat {

namespace detail {

struct StateNode {
    StateOp op;
    std::string name;
    std::optional<Formula> lhs;
    std::optional<Formula> rhs;
    AgentSet agents;
    std::optional<PathFormula> path;
    std::size_t hash = 0;
};

struct PathNode {
    PathOp op;
    std::optional<Formula> state;
    std::optional<PathFormula> lhs;
    std::optional<PathFormula> rhs;
    std::size_t hash = 0;
};

} // namespace detail

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

AgentSet normalize(AgentSet agents) {
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    return agents;
}

} // namespace

Formula Formula::constant(std::string name) {
    auto n = std::make_shared<detail::StateNode>();
    n->op = StateOp::constant;
    n->hash = mix(1, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Formula(std::move(n));
}

Formula Formula::atom(std::string name) {
    auto n = std::make_shared<detail::StateNode>();
    n->op = StateOp::atom;
    n->hash = mix(2, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Formula(std::move(n));
}

namespace {

std::shared_ptr<detail::StateNode> binary_state(StateOp op, Formula lhs, Formula rhs) {
    auto n = std::make_shared<detail::StateNode>();
    n->op = op;
    n->hash = mix(mix(static_cast<std::size_t>(op) + 10, lhs.hash()), rhs.hash());
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

std::shared_ptr<detail::StateNode> strategic(StateOp op, AgentSet agents, PathFormula path) {
    auto n = std::make_shared<detail::StateNode>();
    n->op = op;
    n->agents = normalize(std::move(agents));
    std::size_t h = static_cast<std::size_t>(op) + 10;
    for (const auto& a : n->agents) {
        h = mix(h, std::hash<std::string>{}(a));
    }
    n->hash = mix(h, path.hash());
    n->path = std::move(path);
    return n;
}

} // namespace

Formula Formula::conj(Formula lhs, Formula rhs) {
    return Formula(binary_state(StateOp::conj, std::move(lhs), std::move(rhs)));
}
Formula Formula::disj(Formula lhs, Formula rhs) {
    return Formula(binary_state(StateOp::disj, std::move(lhs), std::move(rhs)));
}
Formula Formula::implies(Formula lhs, Formula rhs) {
    return Formula(binary_state(StateOp::implies, std::move(lhs), std::move(rhs)));
}
Formula Formula::iff(Formula lhs, Formula rhs) {
    return Formula(binary_state(StateOp::iff, std::move(lhs), std::move(rhs)));
}
Formula Formula::coalition(AgentSet agents, PathFormula path) {
    return Formula(strategic(StateOp::coalition, std::move(agents), std::move(path)));
}
Formula Formula::no_avoid(AgentSet agents, PathFormula path) {
    return Formula(strategic(StateOp::no_avoid, std::move(agents), std::move(path)));
}

StateOp Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->lhs.value(); }
const Formula& Formula::rhs() const { return node_->rhs.value(); }
const AgentSet& Formula::agents() const { return node_->agents; }
const PathFormula& Formula::path() const { return node_->path.value(); }
std::size_t Formula::hash() const noexcept { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.hash != y.hash || x.op != y.op) {
        return false;
    }
    switch (x.op) {
    case StateOp::constant:
    case StateOp::atom:
        return x.name == y.name;
    case StateOp::coalition:
    case StateOp::no_avoid:
        return x.agents == y.agents && *x.path == *y.path;
    default:
        return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    }
}

namespace {

std::shared_ptr<detail::PathNode> path_node(PathOp op, std::size_t h) {
    auto n = std::make_shared<detail::PathNode>();
    n->op = op;
    n->hash = h;
    return n;
}

} // namespace

PathFormula PathFormula::state(Formula f) {
    auto n = path_node(PathOp::state, mix(100, f.hash()));
    n->state = std::move(f);
    return PathFormula(std::move(n));
}

PathFormula PathFormula::conj(PathFormula lhs, PathFormula rhs) {
    if (lhs.op() == PathOp::state && rhs.op() == PathOp::state) {
        return state(Formula::conj(lhs.state_formula(), rhs.state_formula()));
    }
    auto n = path_node(PathOp::conj, mix(mix(101, lhs.hash()), rhs.hash()));
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PathFormula(std::move(n));
}

PathFormula PathFormula::disj(PathFormula lhs, PathFormula rhs) {
    if (lhs.op() == PathOp::state && rhs.op() == PathOp::state) {
        return state(Formula::disj(lhs.state_formula(), rhs.state_formula()));
    }
    auto n = path_node(PathOp::disj, mix(mix(102, lhs.hash()), rhs.hash()));
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PathFormula(std::move(n));
}

namespace {

PathFormula unary_path(PathOp op, PathFormula g);
PathFormula binary_path(PathOp op, PathFormula lhs, PathFormula rhs);

} // namespace

PathFormula PathFormula::next(PathFormula g) { return unary_path(PathOp::next, std::move(g)); }
PathFormula PathFormula::sometime(PathFormula g) { return unary_path(PathOp::sometime, std::move(g)); }
PathFormula PathFormula::always(PathFormula g) { return unary_path(PathOp::always, std::move(g)); }
PathFormula PathFormula::until(PathFormula lhs, PathFormula rhs) {
    return binary_path(PathOp::until, std::move(lhs), std::move(rhs));
}
PathFormula PathFormula::weak_until(PathFormula lhs, PathFormula rhs) {
    return binary_path(PathOp::weak_until, std::move(lhs), std::move(rhs));
}

PathOp PathFormula::op() const noexcept { return node_->op; }
const Formula& PathFormula::state_formula() const { return node_->state.value(); }
const PathFormula& PathFormula::lhs() const { return node_->lhs.value(); }
const PathFormula& PathFormula::rhs() const { return node_->rhs.value(); }
std::size_t PathFormula::hash() const noexcept { return node_->hash; }

bool operator==(const PathFormula& a, const PathFormula& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.hash != y.hash || x.op != y.op) {
        return false;
    }
    switch (x.op) {
    case PathOp::state:
        return *x.state == *y.state;
    case PathOp::next:
    case PathOp::sometime:
    case PathOp::always:
        return *x.lhs == *y.lhs;
    default:
        return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    }
}

// The factories for unary/binary path nodes need private access.
class PathFactory {
public:
    static PathFormula make(std::shared_ptr<detail::PathNode> n) { return PathFormula(std::move(n)); }
};

namespace {

PathFormula unary_path(PathOp op, PathFormula g) {
    auto n = path_node(op, mix(110 + static_cast<std::size_t>(op), g.hash()));
    n->lhs = std::move(g);
    return PathFactory::make(std::move(n));
}

PathFormula binary_path(PathOp op, PathFormula lhs, PathFormula rhs) {
    auto n = path_node(op, mix(mix(110 + static_cast<std::size_t>(op), lhs.hash()), rhs.hash()));
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PathFactory::make(std::move(n));
}

// ---------------------------------------------------------------- parser

enum class Tok { lparen, rparen, amp, bar, arrow, iff, coalition, no_avoid, constant, ident, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
    AgentSet agents;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool constant_char(char c) { return ident_char(c) || c == '^' || c == '+'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (i_ >= text_.size()) {
                out.push_back({Tok::end, "", i_, {}});
                return out;
            }
            const std::size_t start = i_;
            const char c = text_[i_];
            if (c == '(') {
                ++i_;
                out.push_back({Tok::lparen, "(", start, {}});
            } else if (c == ')') {
                ++i_;
                out.push_back({Tok::rparen, ")", start, {}});
            } else if (c == '&') {
                ++i_;
                out.push_back({Tok::amp, "&", start, {}});
            } else if (c == '|') {
                ++i_;
                out.push_back({Tok::bar, "|", start, {}});
            } else if (starts_with("->")) {
                i_ += 2;
                out.push_back({Tok::arrow, "->", start, {}});
            } else if (starts_with("<->")) {
                i_ += 3;
                out.push_back({Tok::iff, "<->", start, {}});
            } else if (starts_with("<<")) {
                out.push_back({Tok::coalition, "<<", start, agent_list(">>")});
            } else if (starts_with("[[")) {
                out.push_back({Tok::no_avoid, "[[", start, agent_list("]]")});
            } else if (c == '#') {
                ++i_;
                const std::size_t b = i_;
                while (i_ < text_.size() && constant_char(text_[i_])) {
                    ++i_;
                }
                if (b == i_) {
                    throw SyntaxError(start, "expected a constant name after '#'");
                }
                out.push_back({Tok::constant, std::string(text_.substr(b, i_ - b)), start, {}});
            } else if (ident_start(c)) {
                while (i_ < text_.size() && ident_char(text_[i_])) {
                    ++i_;
                }
                out.push_back({Tok::ident, std::string(text_.substr(start, i_ - start)), start, {}});
            } else if (c == '!' || c == '~') {
                throw SyntaxError(start, "negation is not part of the language");
            } else {
                throw SyntaxError(start, std::string("unexpected character '") + c + "'");
            }
        }
    }

private:
    bool starts_with(std::string_view s) const { return text_.substr(i_, s.size()) == s; }

    void skip_space() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) {
            ++i_;
        }
    }

    AgentSet agent_list(std::string_view close) {
        const std::size_t open = i_;
        i_ += 2;
        const auto end = text_.find(close, i_);
        if (end == std::string_view::npos) {
            throw SyntaxError(open, "unterminated agent list");
        }
        AgentSet agents;
        std::size_t p = i_;
        while (p <= end) {
            std::size_t q = text_.find(',', p);
            if (q == std::string_view::npos || q > end) {
                q = end;
            }
            auto item = text_.substr(p, q - p);
            while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) {
                item.remove_prefix(1);
            }
            while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) {
                item.remove_suffix(1);
            }
            if (item.empty()) {
                if (q != end || !agents.empty()) {
                    throw SyntaxError(p, "empty agent name");
                }
            } else {
                for (char ch : item) {
                    if (!ident_char(ch)) {
                        throw SyntaxError(p, "bad agent name '" + std::string(item) + "'");
                    }
                }
                agents.emplace_back(item);
            }
            p = q + 1;
        }
        i_ = end + close.size();
        return agents;
    }

    std::string_view text_;
    std::size_t i_ = 0;
};

enum class Kind {
    constant, atom, conj, disj, implies, iff, coalition, no_avoid, next, until, weak_until, sometime, always
};

struct Expr {
    Kind kind;
    std::size_t pos;
    std::string name;
    AgentSet agents;
    std::unique_ptr<Expr> a;
    std::unique_ptr<Expr> b;
};

using ExprPtr = std::unique_ptr<Expr>;

ExprPtr make_expr(Kind k, std::size_t pos, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->pos = pos;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const std::vector<std::string>* universe)
        : toks_(std::move(toks)), universe_(universe) {}

    ExprPtr run() {
        auto e = parse_iff();
        if (peek().kind != Tok::end) {
            throw SyntaxError(peek().pos, "unexpected '" + peek().text + "'");
        }
        return e;
    }

private:
    const Token& peek() const { return toks_[k_]; }
    const Token& take() { return toks_[k_++]; }
    bool is_keyword(std::string_view kw) const { return peek().kind == Tok::ident && peek().text == kw; }

    ExprPtr parse_iff() {
        auto lhs = parse_implies();
        while (peek().kind == Tok::iff) {
            const auto pos = take().pos;
            lhs = make_expr(Kind::iff, pos, std::move(lhs), parse_implies());
        }
        return lhs;
    }

    ExprPtr parse_implies() {
        auto lhs = parse_or();
        if (peek().kind == Tok::arrow) {
            const auto pos = take().pos;
            return make_expr(Kind::implies, pos, std::move(lhs), parse_implies());
        }
        return lhs;
    }

    ExprPtr parse_or() {
        auto lhs = parse_and();
        while (peek().kind == Tok::bar) {
            const auto pos = take().pos;
            lhs = make_expr(Kind::disj, pos, std::move(lhs), parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        auto lhs = parse_until();
        while (peek().kind == Tok::amp) {
            const auto pos = take().pos;
            lhs = make_expr(Kind::conj, pos, std::move(lhs), parse_until());
        }
        return lhs;
    }

    ExprPtr parse_until() {
        auto lhs = parse_unary();
        if (is_keyword("U") || is_keyword("W")) {
            const auto& t = take();
            const Kind k = t.text == "U" ? Kind::until : Kind::weak_until;
            return make_expr(k, t.pos, std::move(lhs), parse_until());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        const Token& t = peek();
        if (t.kind == Tok::ident && (t.text == "X" || t.text == "F" || t.text == "G")) {
            take();
            const Kind k = t.text == "X" ? Kind::next : (t.text == "F" ? Kind::sometime : Kind::always);
            return make_expr(k, t.pos, parse_unary());
        }
        if (t.kind == Tok::coalition || t.kind == Tok::no_avoid) {
            const Token& op = take();
            if (universe_ != nullptr) {
                for (const auto& a : op.agents) {
                    if (std::find(universe_->begin(), universe_->end(), a) == universe_->end()) {
                        throw Error(ErrorCode::unknown_agent,
                                    "'" + a + "' at position " + std::to_string(op.pos));
                    }
                }
            }
            auto e = make_expr(op.kind == Tok::coalition ? Kind::coalition : Kind::no_avoid, op.pos, parse_until());
            e->agents = op.agents;
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = take();
        switch (t.kind) {
        case Tok::lparen: {
            auto e = parse_iff();
            if (peek().kind != Tok::rparen) {
                throw SyntaxError(peek().pos, "expected ')'");
            }
            take();
            return e;
        }
        case Tok::constant: {
            auto e = make_expr(Kind::constant, t.pos);
            e->name = t.text;
            return e;
        }
        case Tok::ident: {
            if (t.text == "U" || t.text == "W") {
                throw SyntaxError(t.pos, "'" + t.text + "' needs a left operand");
            }
            if (t.text.starts_with(reserved_atom_prefix)) {
                throw SyntaxError(t.pos, "atom names starting with '__' are reserved");
            }
            auto e = make_expr(Kind::atom, t.pos);
            e->name = t.text;
            return e;
        }
        case Tok::end:
            throw SyntaxError(t.pos, "unexpected end of input");
        default:
            throw SyntaxError(t.pos, "unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t k_ = 0;
    const std::vector<std::string>* universe_;
};

bool temporal(Kind k) {
    return k == Kind::next || k == Kind::until || k == Kind::weak_until || k == Kind::sometime ||
           k == Kind::always;
}

// True if a temporal operator occurs outside every strategic operator.
bool has_temporal(const Expr& e) {
    if (temporal(e.kind)) {
        return true;
    }
    if (e.kind == Kind::coalition || e.kind == Kind::no_avoid) {
        return false;
    }
    return (e.a && has_temporal(*e.a)) || (e.b && has_temporal(*e.b));
}

PathFormula to_path(const Expr& e);

Formula to_state(const Expr& e) {
    switch (e.kind) {
    case Kind::constant:
        return Formula::constant(e.name);
    case Kind::atom:
        return Formula::atom(e.name);
    case Kind::conj:
        return Formula::conj(to_state(*e.a), to_state(*e.b));
    case Kind::disj:
        return Formula::disj(to_state(*e.a), to_state(*e.b));
    case Kind::implies:
        return Formula::implies(to_state(*e.a), to_state(*e.b));
    case Kind::iff:
        return Formula::iff(to_state(*e.a), to_state(*e.b));
    case Kind::coalition:
        return Formula::coalition(e.agents, to_path(*e.a));
    case Kind::no_avoid:
        return Formula::no_avoid(e.agents, to_path(*e.a));
    default:
        throw SyntaxError(e.pos, "temporal operator outside a strategic modality");
    }
}

PathFormula to_path(const Expr& e) {
    if (!has_temporal(e)) {
        return PathFormula::state(to_state(e));
    }
    switch (e.kind) {
    case Kind::conj:
        return PathFormula::conj(to_path(*e.a), to_path(*e.b));
    case Kind::disj:
        return PathFormula::disj(to_path(*e.a), to_path(*e.b));
    case Kind::next:
        return PathFormula::next(to_path(*e.a));
    case Kind::sometime:
        return PathFormula::sometime(to_path(*e.a));
    case Kind::always:
        return PathFormula::always(to_path(*e.a));
    case Kind::until:
        return PathFormula::until(to_path(*e.a), to_path(*e.b));
    case Kind::weak_until:
        return PathFormula::weak_until(to_path(*e.a), to_path(*e.b));
    default:
        throw SyntaxError(e.pos, "implication between path formulas is not supported");
    }
}

std::string agent_text(const AgentSet& agents) {
    std::string out;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += agents[i];
    }
    return out;
}

} // namespace

Formula parse_formula(std::string_view text, const std::vector<std::string>* agents) {
    Parser p(Lexer(text).run(), agents);
    return to_state(*p.run());
}

std::string to_string(const Formula& f) {
    switch (f.op()) {
    case StateOp::constant:
        return "#" + f.name();
    case StateOp::atom:
        return f.name();
    case StateOp::conj:
        return "(" + to_string(f.lhs()) + " & " + to_string(f.rhs()) + ")";
    case StateOp::disj:
        return "(" + to_string(f.lhs()) + " | " + to_string(f.rhs()) + ")";
    case StateOp::implies:
        return "(" + to_string(f.lhs()) + " -> " + to_string(f.rhs()) + ")";
    case StateOp::iff:
        return "(" + to_string(f.lhs()) + " <-> " + to_string(f.rhs()) + ")";
    case StateOp::coalition:
        return "<<" + agent_text(f.agents()) + ">> " + to_string(f.path());
    case StateOp::no_avoid:
        return "[[" + agent_text(f.agents()) + "]] " + to_string(f.path());
    }
    return {};
}

std::string to_string(const PathFormula& g) {
    switch (g.op()) {
    case PathOp::state: {
        // A strategic operator parses its operand greedily, so wrap it when it
        // sits under another operator.
        const auto& f = g.state_formula();
        return f.is_strategic() ? "(" + to_string(f) + ")" : to_string(f);
    }
    case PathOp::conj:
        return "(" + to_string(g.lhs()) + " & " + to_string(g.rhs()) + ")";
    case PathOp::disj:
        return "(" + to_string(g.lhs()) + " | " + to_string(g.rhs()) + ")";
    case PathOp::next:
        return "X " + to_string(g.lhs());
    case PathOp::sometime:
        return "F " + to_string(g.lhs());
    case PathOp::always:
        return "G " + to_string(g.lhs());
    case PathOp::until:
        return "(" + to_string(g.lhs()) + " U " + to_string(g.rhs()) + ")";
    case PathOp::weak_until:
        return "(" + to_string(g.lhs()) + " W " + to_string(g.rhs()) + ")";
    }
    return {};
}

namespace {

PathFormula expand_path(const PathFormula& g);

} // namespace

Formula expand_derived(const Formula& f) {
    switch (f.op()) {
    case StateOp::constant:
    case StateOp::atom:
        return f;
    case StateOp::conj:
        return Formula::conj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case StateOp::disj:
        return Formula::disj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case StateOp::implies:
        return Formula::implies(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case StateOp::iff: {
        auto a = expand_derived(f.lhs());
        auto b = expand_derived(f.rhs());
        return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
    }
    case StateOp::coalition:
        return Formula::coalition(f.agents(), expand_path(f.path()));
    case StateOp::no_avoid:
        return Formula::no_avoid(f.agents(), expand_path(f.path()));
    }
    return f;
}

namespace {

PathFormula expand_path(const PathFormula& g) {
    switch (g.op()) {
    case PathOp::state:
        return PathFormula::state(expand_derived(g.state_formula()));
    case PathOp::conj:
        return PathFormula::conj(expand_path(g.lhs()), expand_path(g.rhs()));
    case PathOp::disj:
        return PathFormula::disj(expand_path(g.lhs()), expand_path(g.rhs()));
    case PathOp::next:
        return PathFormula::next(expand_path(g.lhs()));
    case PathOp::until:
        return PathFormula::until(expand_path(g.lhs()), expand_path(g.rhs()));
    case PathOp::weak_until:
        return PathFormula::weak_until(expand_path(g.lhs()), expand_path(g.rhs()));
    case PathOp::sometime:
        return PathFormula::until(PathFormula::state(Formula::top()), expand_path(g.lhs()));
    case PathOp::always:
        return PathFormula::weak_until(expand_path(g.lhs()), PathFormula::state(Formula::bottom()));
    }
    return g;
}

bool atl_shape(const PathFormula& g) {
    switch (g.op()) {
    case PathOp::next:
    case PathOp::sometime:
    case PathOp::always:
        return g.lhs().op() == PathOp::state;
    case PathOp::until:
    case PathOp::weak_until:
        return g.lhs().op() == PathOp::state && g.rhs().op() == PathOp::state;
    default:
        return false;
    }
}

struct Classifier {
    Classification out;
    std::unordered_set<Formula, FormulaHash> seen;

    void visit(const Formula& f) {
        switch (f.op()) {
        case StateOp::constant:
        case StateOp::atom:
            break;
        case StateOp::coalition:
        case StateOp::no_avoid:
            if (!atl_shape(f.path())) {
                out.atl_fragment = false;
            }
            visit_path(f.path());
            break;
        default:
            visit(f.lhs());
            visit(f.rhs());
            if (f.op() == StateOp::implies || f.op() == StateOp::iff) {
                out.implication_free = false;
            }
            if (f.op() == StateOp::implies && !out.first_implication) {
                out.first_implication = f;
            }
            break;
        }
        if (seen.insert(f).second) {
            out.subformulas.push_back(f);
        }
    }

    void visit_path(const PathFormula& g) {
        if (g.op() == PathOp::state) {
            visit(g.state_formula());
            return;
        }
        visit_path(g.lhs());
        if (g.op() == PathOp::conj || g.op() == PathOp::disj || g.op() == PathOp::until ||
            g.op() == PathOp::weak_until) {
            visit_path(g.rhs());
        }
    }
};

PathFormula substitute_path(const PathFormula& g, const Formula& target, const Formula& replacement);

} // namespace

Classification classify(const Formula& f) {
    Classifier c;
    c.visit(f);
    return std::move(c.out);
}

Formula substitute(const Formula& f, const Formula& target, const Formula& replacement) {
    if (f == target) {
        return replacement;
    }
    switch (f.op()) {
    case StateOp::constant:
    case StateOp::atom:
        return f;
    case StateOp::conj:
        return Formula::conj(substitute(f.lhs(), target, replacement), substitute(f.rhs(), target, replacement));
    case StateOp::disj:
        return Formula::disj(substitute(f.lhs(), target, replacement), substitute(f.rhs(), target, replacement));
    case StateOp::implies:
        return Formula::implies(substitute(f.lhs(), target, replacement),
                                substitute(f.rhs(), target, replacement));
    case StateOp::iff:
        return Formula::iff(substitute(f.lhs(), target, replacement), substitute(f.rhs(), target, replacement));
    case StateOp::coalition:
        return Formula::coalition(f.agents(), substitute_path(f.path(), target, replacement));
    case StateOp::no_avoid:
        return Formula::no_avoid(f.agents(), substitute_path(f.path(), target, replacement));
    }
    return f;
}

namespace {

PathFormula substitute_path(const PathFormula& g, const Formula& target, const Formula& replacement) {
    switch (g.op()) {
    case PathOp::state:
        return PathFormula::state(substitute(g.state_formula(), target, replacement));
    case PathOp::conj:
        return PathFormula::conj(substitute_path(g.lhs(), target, replacement),
                                 substitute_path(g.rhs(), target, replacement));
    case PathOp::disj:
        return PathFormula::disj(substitute_path(g.lhs(), target, replacement),
                                 substitute_path(g.rhs(), target, replacement));
    case PathOp::next:
        return PathFormula::next(substitute_path(g.lhs(), target, replacement));
    case PathOp::sometime:
        return PathFormula::sometime(substitute_path(g.lhs(), target, replacement));
    case PathOp::always:
        return PathFormula::always(substitute_path(g.lhs(), target, replacement));
    case PathOp::until:
        return PathFormula::until(substitute_path(g.lhs(), target, replacement),
                                  substitute_path(g.rhs(), target, replacement));
    case PathOp::weak_until:
        return PathFormula::weak_until(substitute_path(g.lhs(), target, replacement),
                                       substitute_path(g.rhs(), target, replacement));
    }
    return g;
}

void collect(const Formula& f, StateOp kind, std::vector<std::string>& out) {
    for (const auto& sub : classify(f).subformulas) {
        if (sub.op() == kind && std::find(out.begin(), out.end(), sub.name()) == out.end()) {
            out.push_back(sub.name());
        }
    }
}

} // namespace

std::vector<std::string> atoms_of(const Formula& f) {
    std::vector<std::string> out;
    collect(f, StateOp::atom, out);
    return out;
}

std::vector<std::string> constants_of(const Formula& f) {
    std::vector<std::string> out;
    collect(f, StateOp::constant, out);
    return out;
}

} // namespace mvstrat
