#pragma once

// Arithmetic expressions over problem variables, stored as a flat tape in
// topological order with the root last. The tape form serves four consumers:
// interval evaluation (natural extension), point evaluation, reverse-mode
// gradients for local refinement, and the solver's forward-backward
// contraction which walks the node array directly.

#include <cassert>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "symprune/interval.hpp"

namespace symprune {

enum class Op { constant, variable, add, sub, mul, div, neg, pow };

struct ExprNode {
    Op op = Op::constant;
    double value = 0.0;  // constant payload
    int index = -1;      // variable payload
    int lhs = -1;        // first child (tape index)
    int rhs = -1;        // second child, binary ops only
    int exponent = 0;    // pow payload

    friend bool operator==(const ExprNode& a, const ExprNode& b) {
        return a.op == b.op && a.value == b.value && a.index == b.index && a.lhs == b.lhs &&
               a.rhs == b.rhs && a.exponent == b.exponent;
    }
};

namespace detail {

// Shortest decimal rendering that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    assert(res.ec == std::errc());
    return std::string(buf, res.ptr);
}

// Division for enclosure chains: when the divisor spans zero no finite
// enclosure exists, so fall back to the whole line instead of failing.
inline Interval div_or_whole(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    if (b.contains_zero()) return Interval::whole();
    return a / b;
}

}  // namespace detail

class Expression {
  public:
    Expression() = default;

    static Expression constant(double v) {
        Expression e;
        ExprNode n;
        n.op = Op::constant;
        n.value = v;
        e.nodes_.push_back(n);
        return e;
    }

    static Expression variable(int index) {
        assert(index >= 0);
        Expression e;
        ExprNode n;
        n.op = Op::variable;
        n.index = index;
        e.nodes_.push_back(n);
        return e;
    }

    static Expression pow(Expression base, int exponent) {
        assert(exponent >= 1);
        ExprNode n;
        n.op = Op::pow;
        n.lhs = base.root();
        n.exponent = exponent;
        base.nodes_.push_back(n);
        return base;
    }

    friend Expression operator+(Expression a, Expression b) { return combine(Op::add, std::move(a), std::move(b)); }
    friend Expression operator-(Expression a, Expression b) { return combine(Op::sub, std::move(a), std::move(b)); }
    friend Expression operator*(Expression a, Expression b) { return combine(Op::mul, std::move(a), std::move(b)); }
    friend Expression operator/(Expression a, Expression b) { return combine(Op::div, std::move(a), std::move(b)); }

    friend Expression operator-(Expression a) {
        ExprNode n;
        n.op = Op::neg;
        n.lhs = a.root();
        a.nodes_.push_back(n);
        return a;
    }

    bool empty() const { return nodes_.empty(); }
    const std::vector<ExprNode>& nodes() const { return nodes_; }
    int root() const { return static_cast<int>(nodes_.size()) - 1; }

    int max_variable() const {
        int m = -1;
        for (const ExprNode& n : nodes_) {
            if (n.op == Op::variable && n.index > m) m = n.index;
        }
        return m;
    }

    // Natural interval extension; division by a zero-spanning interval throws.
    Interval eval(const Box& b) const {
        std::vector<Interval> values;
        forward(b, values, /*hull_division=*/false);
        return values.back();
    }

    // Forward sweep storing one enclosure per node. With hull_division the
    // sweep never throws and a zero-spanning divisor yields the whole line;
    // this is the entry point for the contraction pass.
    void forward(const Box& b, std::vector<Interval>& values, bool hull_division) const {
        assert(!nodes_.empty());
        values.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ExprNode& n = nodes_[i];
            switch (n.op) {
                case Op::constant:
                    values[i] = Interval(n.value, n.value);
                    break;
                case Op::variable:
                    assert(n.index < static_cast<int>(b.size()));
                    values[i] = b[static_cast<std::size_t>(n.index)];
                    break;
                case Op::add:
                    values[i] = values[static_cast<std::size_t>(n.lhs)] + values[static_cast<std::size_t>(n.rhs)];
                    break;
                case Op::sub:
                    values[i] = values[static_cast<std::size_t>(n.lhs)] - values[static_cast<std::size_t>(n.rhs)];
                    break;
                case Op::mul:
                    values[i] = values[static_cast<std::size_t>(n.lhs)] * values[static_cast<std::size_t>(n.rhs)];
                    break;
                case Op::div:
                    values[i] = hull_division
                                    ? detail::div_or_whole(values[static_cast<std::size_t>(n.lhs)],
                                                           values[static_cast<std::size_t>(n.rhs)])
                                    : values[static_cast<std::size_t>(n.lhs)] / values[static_cast<std::size_t>(n.rhs)];
                    break;
                case Op::neg:
                    values[i] = -values[static_cast<std::size_t>(n.lhs)];
                    break;
                case Op::pow:
                    values[i] = symprune::pow(values[static_cast<std::size_t>(n.lhs)], n.exponent);
                    break;
            }
        }
    }

    double eval(const std::vector<double>& x) const {
        assert(!nodes_.empty());
        std::vector<double> v(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ExprNode& n = nodes_[i];
            switch (n.op) {
                case Op::constant: v[i] = n.value; break;
                case Op::variable: v[i] = x[static_cast<std::size_t>(n.index)]; break;
                case Op::add: v[i] = v[static_cast<std::size_t>(n.lhs)] + v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::sub: v[i] = v[static_cast<std::size_t>(n.lhs)] - v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::mul: v[i] = v[static_cast<std::size_t>(n.lhs)] * v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::div: v[i] = v[static_cast<std::size_t>(n.lhs)] / v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::neg: v[i] = -v[static_cast<std::size_t>(n.lhs)]; break;
                case Op::pow: v[i] = std::pow(v[static_cast<std::size_t>(n.lhs)], n.exponent); break;
            }
        }
        return v.back();
    }

    // Reverse-mode derivative of the expression with respect to every
    // variable of x; entries for variables the expression never reads are 0.
    std::vector<double> gradient(const std::vector<double>& x) const {
        assert(!nodes_.empty());
        std::vector<double> v(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ExprNode& n = nodes_[i];
            switch (n.op) {
                case Op::constant: v[i] = n.value; break;
                case Op::variable: v[i] = x[static_cast<std::size_t>(n.index)]; break;
                case Op::add: v[i] = v[static_cast<std::size_t>(n.lhs)] + v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::sub: v[i] = v[static_cast<std::size_t>(n.lhs)] - v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::mul: v[i] = v[static_cast<std::size_t>(n.lhs)] * v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::div: v[i] = v[static_cast<std::size_t>(n.lhs)] / v[static_cast<std::size_t>(n.rhs)]; break;
                case Op::neg: v[i] = -v[static_cast<std::size_t>(n.lhs)]; break;
                case Op::pow: v[i] = std::pow(v[static_cast<std::size_t>(n.lhs)], n.exponent); break;
            }
        }
        std::vector<double> adjoint(nodes_.size(), 0.0);
        adjoint.back() = 1.0;
        std::vector<double> grad(x.size(), 0.0);
        for (std::size_t ri = nodes_.size(); ri-- > 0;) {
            const ExprNode& n = nodes_[ri];
            const double a = adjoint[ri];
            if (a == 0.0) continue;
            switch (n.op) {
                case Op::constant:
                    break;
                case Op::variable:
                    grad[static_cast<std::size_t>(n.index)] += a;
                    break;
                case Op::add:
                    adjoint[static_cast<std::size_t>(n.lhs)] += a;
                    adjoint[static_cast<std::size_t>(n.rhs)] += a;
                    break;
                case Op::sub:
                    adjoint[static_cast<std::size_t>(n.lhs)] += a;
                    adjoint[static_cast<std::size_t>(n.rhs)] -= a;
                    break;
                case Op::mul:
                    adjoint[static_cast<std::size_t>(n.lhs)] += a * v[static_cast<std::size_t>(n.rhs)];
                    adjoint[static_cast<std::size_t>(n.rhs)] += a * v[static_cast<std::size_t>(n.lhs)];
                    break;
                case Op::div: {
                    const double denom = v[static_cast<std::size_t>(n.rhs)];
                    adjoint[static_cast<std::size_t>(n.lhs)] += a / denom;
                    adjoint[static_cast<std::size_t>(n.rhs)] -=
                        a * v[static_cast<std::size_t>(n.lhs)] / (denom * denom);
                    break;
                }
                case Op::neg:
                    adjoint[static_cast<std::size_t>(n.lhs)] -= a;
                    break;
                case Op::pow:
                    adjoint[static_cast<std::size_t>(n.lhs)] +=
                        a * static_cast<double>(n.exponent) *
                        std::pow(v[static_cast<std::size_t>(n.lhs)], n.exponent - 1);
                    break;
            }
        }
        return grad;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        assert(!nodes_.empty());
        return render(root(), names).text;
    }

    friend bool operator==(const Expression& a, const Expression& b) { return a.nodes_ == b.nodes_; }

  private:
    // Precedence ladder used for minimal re-parseable parenthesization:
    // additive 1, multiplicative 2, unary minus 3, power 4, atom 5.
    struct Rendered {
        std::string text;
        int prec = 5;
    };

    int precedence(int id) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(id)];
        switch (n.op) {
            case Op::add:
            case Op::sub: return 1;
            case Op::mul:
            case Op::div: return 2;
            case Op::neg: return 3;
            case Op::pow: return 4;
            case Op::constant: return n.value < 0 ? 3 : 5;
            case Op::variable: return 5;
        }
        return 5;
    }

    Rendered render(int id, const std::vector<std::string>& names) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(id)];
        const int prec = precedence(id);
        auto child = [&](int cid, bool needs_parens) {
            Rendered r = render(cid, names);
            if (needs_parens) r.text = "(" + r.text + ")";
            return r.text;
        };
        switch (n.op) {
            case Op::constant:
                return {detail::format_double(n.value), prec};
            case Op::variable:
                assert(n.index < static_cast<int>(names.size()));
                return {names[static_cast<std::size_t>(n.index)], prec};
            case Op::add:
                return {child(n.lhs, precedence(n.lhs) < 1) + " + " + child(n.rhs, precedence(n.rhs) <= 1), prec};
            case Op::sub:
                return {child(n.lhs, precedence(n.lhs) < 1) + " - " + child(n.rhs, precedence(n.rhs) <= 1), prec};
            case Op::mul:
                return {child(n.lhs, precedence(n.lhs) < 2) + "*" + child(n.rhs, precedence(n.rhs) <= 2), prec};
            case Op::div:
                return {child(n.lhs, precedence(n.lhs) < 2) + "/" + child(n.rhs, precedence(n.rhs) <= 2), prec};
            case Op::neg:
                return {"-" + child(n.lhs, precedence(n.lhs) < 3), prec};
            case Op::pow:
                return {child(n.lhs, precedence(n.lhs) <= 4) + "^" + std::to_string(n.exponent), prec};
        }
        return {"", prec};
    }

    static Expression combine(Op op, Expression a, Expression b) {
        assert(!a.nodes_.empty() && !b.nodes_.empty());
        const int offset = static_cast<int>(a.nodes_.size());
        a.nodes_.reserve(a.nodes_.size() + b.nodes_.size() + 1);
        for (ExprNode n : b.nodes_) {
            if (n.lhs >= 0) n.lhs += offset;
            if (n.rhs >= 0) n.rhs += offset;
            a.nodes_.push_back(n);
        }
        ExprNode n;
        n.op = op;
        n.lhs = offset - 1;
        n.rhs = static_cast<int>(a.nodes_.size()) - 1;
        a.nodes_.push_back(n);
        return a;
    }

    std::vector<ExprNode> nodes_;
};

}  // namespace symprune
