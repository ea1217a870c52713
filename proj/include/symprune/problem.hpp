#pragma once

// Problem model and text format. A problem is a variable box, a list of
// interval constraints, and an optional declared cycle symmetry with its
// constraint permutation. The line-oriented text format uses `#` comments:
//
//   var <name> in [<lo>, <hi>]
//   cycle (<name> <name> ...)
//   sigma (<i> -> <j>, ...)          # 1-based constraint indices
//   constraint <expr> in [<lo>, <hi>]
//
// Also provides the built-in generators for the benchmark systems and a
// sampling-based check that a declared symmetry really maps the constraint
// system onto itself.

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symprune/expression.hpp"
#include "symprune/interval.hpp"
#include "symprune/symmetry.hpp"

namespace symprune {

struct Constraint {
    Expression expr;
    Interval range;

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.expr == b.expr && a.range == b.range;
    }
};

struct Problem {
    std::vector<std::string> var_names;
    Box initial_box;
    std::vector<Constraint> constraints;
    std::optional<CycleSymmetry> symmetry;
    std::optional<ConstraintPermutation> sigma;

    int n_vars() const { return static_cast<int>(var_names.size()); }

    friend bool operator==(const Problem& a, const Problem& b) {
        return a.var_names == b.var_names && a.initial_box == b.initial_box &&
               a.constraints == b.constraints && a.symmetry == b.symmetry && a.sigma == b.sigma;
    }
};

// Parse failures carry the 1-based source position.
struct ParseError : Error {
    int line;
    int column;

    ParseError(const std::string& what, int line_, int column_)
        : Error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what),
          line(line_),
          column(column_) {}
};

struct SyntaxError : ParseError {
    using ParseError::ParseError;
};
struct UnknownVariable : ParseError {
    using ParseError::ParseError;
};
struct BadInterval : ParseError {
    using ParseError::ParseError;
};
struct DuplicateVariable : ParseError {
    using ParseError::ParseError;
};

namespace detail {

enum class TokKind { identifier, number, symbol, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    double number = 0.0;
    int line = 0;
    int column = 0;
};

inline bool is_reserved(std::string_view word) {
    return word == "var" || word == "in" || word == "cycle" || word == "sigma" ||
           word == "constraint" || word == "inf";
}

// Tokenizes one logical line (comments already stripped).
inline std::vector<Token> tokenize_line(std::string_view text, int line_no) {
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.line = line_no;
        t.column = static_cast<int>(i) + 1;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            t.kind = TokKind::identifier;
            t.text = std::string(text.substr(i, j - i));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < text.size() &&
                    std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            double value = 0.0;
            const char* begin = text.data() + i;
            const char* end = text.data() + text.size();
            const auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc()) {
                throw SyntaxError("malformed number", line_no, t.column);
            }
            t.kind = TokKind::number;
            t.number = value;
            t.text = std::string(begin, res.ptr);
            i += static_cast<std::size_t>(res.ptr - begin);
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            t.kind = TokKind::symbol;
            t.text = "->";
            i += 2;
        } else if (std::string_view("()[],+-*/^").find(c) != std::string_view::npos) {
            t.kind = TokKind::symbol;
            t.text = std::string(1, c);
            ++i;
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", line_no, t.column);
        }
        toks.push_back(std::move(t));
    }
    Token eol;
    eol.kind = TokKind::end;
    eol.line = line_no;
    eol.column = static_cast<int>(text.size()) + 1;
    toks.push_back(std::move(eol));
    return toks;
}

// Cursor over one line's tokens with the primitive expect/accept helpers.
class LineParser {
  public:
    LineParser(std::vector<Token> toks, const std::vector<std::string>* var_names)
        : toks_(std::move(toks)), vars_(var_names) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at_end() const { return peek().kind == TokKind::end; }

    bool accept_symbol(std::string_view s) {
        if (peek().kind == TokKind::symbol && peek().text == s) {
            next();
            return true;
        }
        return false;
    }

    void expect_symbol(std::string_view s) {
        if (!accept_symbol(s)) {
            throw SyntaxError("expected '" + std::string(s) + "'", peek().line, peek().column);
        }
    }

    void expect_keyword(std::string_view word) {
        if (peek().kind != TokKind::identifier || peek().text != word) {
            throw SyntaxError("expected '" + std::string(word) + "'", peek().line, peek().column);
        }
        next();
    }

    std::string expect_name() {
        if (peek().kind != TokKind::identifier || is_reserved(peek().text)) {
            throw SyntaxError("expected a variable name", peek().line, peek().column);
        }
        return next().text;
    }

    void expect_end() {
        if (!at_end()) {
            throw SyntaxError("unexpected trailing input", peek().line, peek().column);
        }
    }

    // endpoint := ['-'] (number | 'inf')
    double expect_endpoint() {
        const bool negate = accept_symbol("-");
        const Token& t = peek();
        double v;
        if (t.kind == TokKind::number) {
            v = t.number;
        } else if (t.kind == TokKind::identifier && t.text == "inf") {
            v = std::numeric_limits<double>::infinity();
        } else {
            throw SyntaxError("expected an interval endpoint", t.line, t.column);
        }
        next();
        return negate ? -v : v;
    }

    int expect_positive_int(const char* what) {
        const Token& t = peek();
        if (t.kind != TokKind::number || t.number < 1 || t.number != std::floor(t.number) ||
            t.number > 1e9) {
            throw SyntaxError(std::string("expected a positive integer ") + what, t.line, t.column);
        }
        next();
        return static_cast<int>(t.number);
    }

    // expr := term (('+'|'-') term)*
    Expression parse_expression() {
        Expression e = parse_term();
        for (;;) {
            if (accept_symbol("+")) {
                e = std::move(e) + parse_term();
            } else if (accept_symbol("-")) {
                e = std::move(e) - parse_term();
            } else {
                return e;
            }
        }
    }

  private:
    Expression parse_term() {
        Expression e = parse_factor();
        for (;;) {
            if (accept_symbol("*")) {
                e = std::move(e) * parse_factor();
            } else if (accept_symbol("/")) {
                e = std::move(e) / parse_factor();
            } else {
                return e;
            }
        }
    }

    // factor := '-' factor | primary ('^' int)?  — a negated literal folds
    // into a constant so numeric text round-trips structurally.
    Expression parse_factor() {
        if (accept_symbol("-")) {
            Expression inner = parse_factor();
            if (inner.nodes().size() == 1 && inner.nodes().front().op == Op::constant) {
                return Expression::constant(-inner.nodes().front().value);
            }
            return -std::move(inner);
        }
        Expression e = parse_primary();
        if (accept_symbol("^")) {
            return Expression::pow(std::move(e), expect_positive_int("exponent"));
        }
        return e;
    }

    Expression parse_primary() {
        const Token& t = peek();
        if (t.kind == TokKind::number) {
            next();
            return Expression::constant(t.number);
        }
        if (t.kind == TokKind::identifier) {
            if (is_reserved(t.text)) {
                throw SyntaxError("unexpected keyword '" + t.text + "' in expression", t.line,
                                  t.column);
            }
            const int idx = find_variable(t.text);
            if (idx < 0) throw UnknownVariable("unknown variable '" + t.text + "'", t.line, t.column);
            next();
            return Expression::variable(idx);
        }
        if (accept_symbol("(")) {
            Expression e = parse_expression();
            expect_symbol(")");
            return e;
        }
        throw SyntaxError("expected a number, variable, or '('", t.line, t.column);
    }

    int find_variable(const std::string& name) const {
        if (vars_ == nullptr) return -1;
        for (std::size_t i = 0; i < vars_->size(); ++i) {
            if ((*vars_)[i] == name) return static_cast<int>(i);
        }
        return -1;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::vector<std::string>* vars_;
};

}  // namespace detail

inline Problem parse_problem(std::string_view text) {
    std::vector<std::string> var_names;
    std::vector<Interval> var_domains;
    std::vector<Constraint> constraints;
    std::optional<CycleSymmetry> symmetry;
    std::optional<std::vector<std::pair<int, int>>> sigma_pairs;  // 1-based (from, to)
    int sigma_line = 0;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        detail::LineParser lp(detail::tokenize_line(line, line_no), &var_names);
        if (lp.at_end()) continue;

        const detail::Token head = lp.peek();
        if (head.kind != detail::TokKind::identifier) {
            throw SyntaxError("expected var, cycle, sigma, or constraint", head.line, head.column);
        }
        if (head.text == "var") {
            lp.next();
            const detail::Token name_tok = lp.peek();
            const std::string name = lp.expect_name();
            for (const std::string& existing : var_names) {
                if (existing == name) {
                    throw DuplicateVariable("variable '" + name + "' already declared",
                                            name_tok.line, name_tok.column);
                }
            }
            lp.expect_keyword("in");
            lp.expect_symbol("[");
            const double lo = lp.expect_endpoint();
            lp.expect_symbol(",");
            const double hi = lp.expect_endpoint();
            lp.expect_symbol("]");
            lp.expect_end();
            if (!(std::isfinite(lo) && std::isfinite(hi))) {
                throw BadInterval("variable bounds must be finite", head.line, head.column);
            }
            if (lo > hi) {
                throw BadInterval("interval lower bound exceeds upper bound", head.line, head.column);
            }
            var_names.push_back(name);
            var_domains.emplace_back(lo, hi);
        } else if (head.text == "cycle") {
            if (symmetry.has_value()) {
                throw SyntaxError("cycle already declared", head.line, head.column);
            }
            lp.next();
            lp.expect_symbol("(");
            std::vector<int> cycle;
            while (!lp.accept_symbol(")")) {
                const detail::Token name_tok = lp.peek();
                const std::string name = lp.expect_name();
                int idx = -1;
                for (std::size_t i = 0; i < var_names.size(); ++i) {
                    if (var_names[i] == name) idx = static_cast<int>(i);
                }
                if (idx < 0) {
                    throw UnknownVariable("unknown variable '" + name + "'", name_tok.line,
                                          name_tok.column);
                }
                for (int seen : cycle) {
                    if (seen == idx) {
                        throw SyntaxError("variable repeated in cycle", name_tok.line,
                                          name_tok.column);
                    }
                }
                cycle.push_back(idx);
            }
            lp.expect_end();
            if (cycle.size() < 2) {
                throw SyntaxError("cycle needs at least two variables", head.line, head.column);
            }
            CycleSymmetry sym;
            sym.n_vars = static_cast<int>(var_names.size());  // fixed up after all vars
            sym.cycle = std::move(cycle);
            symmetry = std::move(sym);
        } else if (head.text == "sigma") {
            if (sigma_pairs.has_value()) {
                throw SyntaxError("sigma already declared", head.line, head.column);
            }
            lp.next();
            lp.expect_symbol("(");
            std::vector<std::pair<int, int>> pairs;
            for (;;) {
                const int from = lp.expect_positive_int("constraint index");
                lp.expect_symbol("->");
                const int to = lp.expect_positive_int("constraint index");
                pairs.emplace_back(from, to);
                if (lp.accept_symbol(")")) break;
                lp.expect_symbol(",");
            }
            lp.expect_end();
            sigma_pairs = std::move(pairs);
            sigma_line = head.line;
        } else if (head.text == "constraint") {
            lp.next();
            Expression expr = lp.parse_expression();
            lp.expect_keyword("in");
            lp.expect_symbol("[");
            const double lo = lp.expect_endpoint();
            lp.expect_symbol(",");
            const double hi = lp.expect_endpoint();
            lp.expect_symbol("]");
            lp.expect_end();
            if (lo > hi) {
                throw BadInterval("interval lower bound exceeds upper bound", head.line, head.column);
            }
            constraints.push_back(Constraint{std::move(expr), Interval(lo, hi)});
        } else {
            throw SyntaxError("expected var, cycle, sigma, or constraint", head.line, head.column);
        }
    }

    if (var_names.empty()) {
        throw SyntaxError("no variables declared", line_no, 1);
    }

    Problem p;
    p.var_names = std::move(var_names);
    p.initial_box = Box(std::move(var_domains));
    p.constraints = std::move(constraints);
    if (symmetry.has_value()) {
        symmetry->n_vars = p.n_vars();
        p.symmetry = std::move(symmetry);
    }
    if (sigma_pairs.has_value()) {
        const int m = static_cast<int>(p.constraints.size());
        std::vector<int> sigma(static_cast<std::size_t>(m), -1);
        for (const auto& [from, to] : *sigma_pairs) {
            if (from > m || to > m) {
                throw SyntaxError("sigma index exceeds constraint count", sigma_line, 1);
            }
            if (sigma[static_cast<std::size_t>(from - 1)] != -1) {
                throw SyntaxError("sigma maps a constraint twice", sigma_line, 1);
            }
            sigma[static_cast<std::size_t>(from - 1)] = to - 1;
        }
        ConstraintPermutation perm;
        perm.sigma = std::move(sigma);
        for (int v : perm.sigma) {
            if (v < 0) throw SyntaxError("sigma must map every constraint", sigma_line, 1);
        }
        try {
            validate(perm, m);
        } catch (const DimensionMismatch& e) {
            throw SyntaxError(e.what(), sigma_line, 1);
        }
        p.sigma = std::move(perm);
    }
    return p;
}

inline std::string emit_interval(const Interval& iv) {
    return "[" + detail::format_double(iv.lo()) + ", " + detail::format_double(iv.hi()) + "]";
}

inline std::string emit_problem(const Problem& p) {
    std::string out;
    for (int i = 0; i < p.n_vars(); ++i) {
        out += "var " + p.var_names[static_cast<std::size_t>(i)] + " in " +
               emit_interval(p.initial_box[static_cast<std::size_t>(i)]) + "\n";
    }
    if (p.symmetry.has_value()) {
        out += "cycle (";
        for (std::size_t j = 0; j < p.symmetry->cycle.size(); ++j) {
            if (j > 0) out += " ";
            out += p.var_names[static_cast<std::size_t>(p.symmetry->cycle[j])];
        }
        out += ")\n";
    }
    if (p.sigma.has_value()) {
        out += "sigma (";
        for (std::size_t i = 0; i < p.sigma->sigma.size(); ++i) {
            if (i > 0) out += ", ";
            out += std::to_string(i + 1) + " -> " + std::to_string(p.sigma->sigma[i] + 1);
        }
        out += ")\n";
    }
    for (const Constraint& c : p.constraints) {
        out += "constraint " + c.expr.to_string(p.var_names) + " in " + emit_interval(c.range) +
               "\n";
    }
    return out;
}

// Outcome of sampling a declared symmetry against the constraints. When the
// check fails, `failing_constraint` is the first offending 0-based index and
// `counterexample` the sample point (empty when the ranges already differ).
struct SymmetryCheck {
    bool ok = true;
    int failing_constraint = -1;
    std::vector<double> counterexample;
};

inline SymmetryCheck check_symmetry(const Problem& p, const CycleSymmetry& sym,
                                    const ConstraintPermutation& sigma, int n_samples = 100,
                                    std::uint64_t seed = 0x5f3759df) {
    if (sym.n_vars != p.n_vars()) {
        throw DimensionMismatch("symmetry variable count does not match problem");
    }
    validate(sym);
    validate(sigma, static_cast<int>(p.constraints.size()));

    constexpr double tau = 1e-9;
    const std::size_t m = p.constraints.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = static_cast<std::size_t>(sigma.sigma[i]);
        if (!(p.constraints[i].range == p.constraints[j].range)) {
            SymmetryCheck out;
            out.ok = false;
            out.failing_constraint = static_cast<int>(i);
            return out;
        }
    }

    std::mt19937_64 rng(seed);
    const std::size_t n = static_cast<std::size_t>(p.n_vars());
    std::vector<double> x(n);
    for (int s = 0; s < n_samples; ++s) {
        for (std::size_t d = 0; d < n; ++d) {
            const Interval& iv = p.initial_box[d];
            std::uniform_real_distribution<double> dist(iv.lo(), iv.hi());
            x[d] = iv.is_degenerate() ? iv.lo() : dist(rng);
        }
        const std::vector<double> sx = apply_point(sym, x, 1);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = static_cast<std::size_t>(sigma.sigma[i]);
            const double lhs = p.constraints[i].expr.eval(sx);
            const double rhs = p.constraints[j].expr.eval(x);
            if (std::abs(lhs - rhs) > tau * std::max(1.0, std::abs(rhs))) {
                SymmetryCheck out;
                out.ok = false;
                out.failing_constraint = static_cast<int>(i);
                out.counterexample = x;
                return out;
            }
        }
    }
    return SymmetryCheck{};
}

inline bool verify_symmetry(const Problem& p, const CycleSymmetry& sym,
                            const ConstraintPermutation& sigma, int n_samples = 100,
                            std::uint64_t seed = 0x5f3759df) {
    return check_symmetry(p, sym, sigma, n_samples, seed).ok;
}

// The n-variable cyclic roots system: for each degree d = 1..n-1 the sum of
// all n cyclically shifted degree-d products equals 0, and the product of
// all variables equals 1. The full cycle is a symmetry and every constraint
// maps to itself.
inline Problem cyclic_n_roots(int n, double lo = -10.0, double hi = 10.0) {
    assert(n >= 2);
    Problem p;
    for (int i = 1; i <= n; ++i) p.var_names.push_back("x" + std::to_string(i));
    p.initial_box = Box(static_cast<std::size_t>(n), Interval(lo, hi));

    for (int d = 1; d <= n - 1; ++d) {
        Expression sum;
        for (int i = 0; i < n; ++i) {
            Expression prod = Expression::variable(i);
            for (int j = 1; j < d; ++j) {
                prod = std::move(prod) * Expression::variable((i + j) % n);
            }
            sum = sum.empty() ? std::move(prod) : std::move(sum) + std::move(prod);
        }
        p.constraints.push_back(Constraint{std::move(sum), Interval(0, 0)});
    }
    Expression prod = Expression::variable(0);
    for (int i = 1; i < n; ++i) prod = std::move(prod) * Expression::variable(i);
    p.constraints.push_back(
        Constraint{std::move(prod) - Expression::constant(1), Interval(0, 0)});

    CycleSymmetry sym;
    sym.n_vars = n;
    for (int i = 0; i < n; ++i) sym.cycle.push_back(i);
    p.symmetry = std::move(sym);

    ConstraintPermutation perm;
    for (int i = 0; i < n; ++i) perm.sigma.push_back(i);
    p.sigma = std::move(perm);
    return p;
}

// Three variables on a sphere of radius sqrt(5) with cyclic dominance side
// conditions; the domain makes the system infeasible, which exercises
// pruning. The cycle maps constraint 2 -> 3 -> 4 -> 2 and fixes 1.
inline Problem example_sphere() {
    Problem p;
    p.var_names = {"x1", "x2", "x3"};
    p.initial_box = Box(3, Interval(-1, 1));

    auto x = [](int i) { return Expression::variable(i); };
    p.constraints.push_back(Constraint{
        Expression::pow(x(0), 2) + Expression::pow(x(1), 2) + Expression::pow(x(2), 2),
        Interval(5, 5)});
    const Interval nonneg(0, std::numeric_limits<double>::infinity());
    p.constraints.push_back(Constraint{Expression::constant(2) * x(0) - x(1), nonneg});
    p.constraints.push_back(Constraint{Expression::constant(2) * x(1) - x(2), nonneg});
    p.constraints.push_back(Constraint{Expression::constant(2) * x(2) - x(0), nonneg});

    CycleSymmetry sym;
    sym.n_vars = 3;
    sym.cycle = {0, 1, 2};
    p.symmetry = std::move(sym);

    ConstraintPermutation perm;
    perm.sigma = {0, 2, 3, 1};
    p.sigma = std::move(perm);
    return p;
}

}  // namespace symprune
