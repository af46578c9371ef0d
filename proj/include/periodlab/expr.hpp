#pragma once

// Expression trees over simplex coordinates a1..ad (or ambient x1..xN).
//
// Variables are 1-based: Var(1) is `a1`. `t` is an alias for `a1`.
// Nodes are immutable and shared; the smart constructors below apply
// constant folding and the trivial identities (x+0, x*1, x*0, x^1, ...),
// so every Expr built through them is already in folded form.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace periodlab {

using Rational = boost::multiprecision::cpp_rational;

enum class Op : std::uint8_t {
    Const,
    Pi,
    Var,
    Neg,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
    Atan,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

bool is_unary(Op op);
bool is_binary(Op op);
std::string_view op_name(Op op);

class Expr;

namespace detail {
struct ExprNode;
}

class Expr {
public:
    /// The constant 0.
    Expr();

    Op op() const;
    /// Constant value (Op::Const only).
    const Rational& value() const;
    /// 1-based variable index (Op::Var only).
    int var() const;
    /// Exponent (Op::Pow only); always in lowest terms.
    const Rational& exponent() const;
    /// Children: one for unary ops and Pow, two for binary ops.
    std::size_t arity_of_node() const;
    const Expr& child(std::size_t i) const;

    bool is_const() const { return op() == Op::Const; }
    bool is_zero() const;
    bool is_one() const;

    /// Largest variable index occurring in the expression (0 when none).
    int max_var() const;
    std::size_t size() const;

    /// Structural equality of the trees.
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
    /// Total order on structure (used for canonical term ordering).
    friend int compare(const Expr& a, const Expr& b);

    const detail::ExprNode* node() const { return node_.get(); }

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::ExprNode> node_;
    friend Expr make_node(Op, Rational, int, Rational, std::vector<Expr>);
};

// Smart constructors.
Expr constant(const Rational& value);
Expr constant(long long value);
Expr pi();
Expr var(int index);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
Expr sqrt(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr atan(const Expr& a);
/// Generic constructor for a unary function op (Neg, Sqrt, ..., Atan).
Expr apply(Op op, const Expr& a);
/// Generic constructor for a binary op (Add, Sub, Mul, Div).
Expr apply(Op op, const Expr& a, const Expr& b);

/// Parse `text` under the grammar
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | base ("^" rational)?
///   base   := number | "pi" | ident | "(" expr ")" | func "(" expr ")"
///   ident  := ("a" | "x") digits | "t"      (x_k is a synonym of a_k)
/// Numbers are decimals or rational literals "p/q" (no whitespace inside).
/// The exponent after "^" is a rational, optionally signed and parenthesized.
/// Throws ParseError on syntax errors, unknown identifiers, or a variable
/// index outside 1..arity.
Expr parse(std::string_view text, int arity);

/// Printer; `parse(to_string(e), n)` reproduces `e` structurally.
std::string to_string(const Expr& e);

/// IEEE evaluation. `point[i-1]` is the value of variable i. Throws
/// DomainError for log of nonpositive, division by zero, sqrt of negative,
/// fractional power of a negative base, or nonpositive power of zero.
double eval(const Expr& e, std::span<const double> point);

/// Symbolic partial derivative with respect to variable `index` (1-based).
Expr diff(const Expr& e, int index);

/// Replace every variable i by `replacement[i-1]`.
Expr substitute(const Expr& e, std::span<const Expr> replacement);

/// Canonical normal form: expanded sum of monomials over atoms (variables,
/// pi, function applications, powers of sums), with like terms merged and a
/// common denominator taken per power-of-sum base. Two expressions with the
/// same canonical form are equal as functions where both are defined; the
/// converse holds for the polynomial/rational fragment.
Expr canonical(const Expr& e);

/// Flattened postfix program for fast repeated evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double operator()(std::span<const double> point) const;
    const Expr& source() const { return source_; }

private:
    struct Instr {
        Op op;
        int var = 0;
        double value = 0.0;
        bool integer_exponent = false;
        const detail::ExprNode* node = nullptr;
    };
    Expr source_;
    std::vector<Instr> code_;
    std::size_t max_stack_ = 0;
};

}  // namespace periodlab
