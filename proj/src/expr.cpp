#include "periodlab/expr.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace periodlab {

namespace detail {

struct ExprNode {
    Op op = Op::Const;
    Rational value;     // Const
    int var = 0;        // Var
    Rational exponent;  // Pow
    std::vector<Expr> kids;
    double value_d = 0.0;
    double exponent_d = 0.0;
    bool integer_exponent = false;
    int max_var = 0;
    std::size_t size = 1;
};

}  // namespace detail

using detail::ExprNode;

bool is_unary(Op op) {
    switch (op) {
    case Op::Neg:
    case Op::Sqrt:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Atan:
        return true;
    default:
        return false;
    }
}

bool is_binary(Op op) {
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

std::string_view op_name(Op op) {
    switch (op) {
    case Op::Const: return "const";
    case Op::Pi: return "pi";
    case Op::Var: return "var";
    case Op::Neg: return "neg";
    case Op::Sqrt: return "sqrt";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Atan: return "atan";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
    }
    return "?";
}

Expr make_node(Op op, Rational value, int var_index, Rational exponent, std::vector<Expr> kids) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->value = std::move(value);
    n->var = var_index;
    n->exponent = std::move(exponent);
    n->kids = std::move(kids);
    n->value_d = n->value.convert_to<double>();
    n->exponent_d = n->exponent.convert_to<double>();
    n->integer_exponent = denominator(n->exponent) == 1;
    n->max_var = (op == Op::Var) ? var_index : 0;
    for (const Expr& k : n->kids) {
        n->max_var = std::max(n->max_var, k.max_var());
        n->size += k.size();
    }
    return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

namespace {

const Expr& zero_expr() {
    static const Expr z = make_node(Op::Const, Rational(0), 0, Rational(0), {});
    return z;
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}

Op Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
int Expr::var() const { return node_->var; }
const Rational& Expr::exponent() const { return node_->exponent; }
std::size_t Expr::arity_of_node() const { return node_->kids.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->kids.at(i); }
bool Expr::is_zero() const { return op() == Op::Const && value() == 0; }
bool Expr::is_one() const { return op() == Op::Const && value() == 1; }
int Expr::max_var() const { return node_->max_var; }
std::size_t Expr::size() const { return node_->size; }

int compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    switch (a.op()) {
    case Op::Const:
        if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
        return 0;
    case Op::Var:
        if (a.var() != b.var()) return a.var() < b.var() ? -1 : 1;
        return 0;
    case Op::Pow:
        if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.arity_of_node(); ++i) {
        int c = compare(a.child(i), b.child(i));
        if (c != 0) return c;
    }
    return 0;
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Smart constructors

Expr constant(const Rational& value) { return make_node(Op::Const, value, 0, Rational(0), {}); }
Expr constant(long long value) { return constant(Rational(value)); }
Expr pi() { return make_node(Op::Pi, Rational(0), 0, Rational(0), {}); }

Expr var(int index) {
    if (index < 1) throw InputError("variable index must be >= 1, got " + std::to_string(index));
    return make_node(Op::Var, Rational(0), index, Rational(0), {});
}

Expr operator-(const Expr& a) {
    if (a.is_const()) return constant(-a.value());
    if (a.op() == Op::Neg) return a.child(0);
    return make_node(Op::Neg, Rational(0), 0, Rational(0), {a});
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.value() + b.value());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return make_node(Op::Add, Rational(0), 0, Rational(0), {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.value() - b.value());
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return make_node(Op::Sub, Rational(0), 0, Rational(0), {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.value() * b.value());
    if (a.is_zero() || b.is_zero()) return constant(0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return make_node(Op::Mul, Rational(0), 0, Rational(0), {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const() && !b.is_zero()) return constant(a.value() / b.value());
    if (b.is_one()) return a;
    if (a.is_zero() && !b.is_zero()) return constant(0);
    return make_node(Op::Div, Rational(0), 0, Rational(0), {a, b});
}

namespace {

// Exact integer power of a rational; nullopt-like via bool when undefined.
bool rational_ipow(const Rational& base, const boost::multiprecision::cpp_int& n, Rational& out) {
    using boost::multiprecision::cpp_int;
    if (base == 0 && n <= 0) return false;
    if (abs(n) > 64) return false;
    long long k = n.convert_to<long long>();
    Rational r(1);
    Rational b = k < 0 ? Rational(1) / base : base;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) r *= b;
    out = r;
    return true;
}

}  // namespace

Expr pow(const Expr& base, const Rational& exponent) {
    if (exponent == 0) return constant(1);
    if (exponent == 1) return base;
    if (base.is_const() && denominator(exponent) == 1) {
        Rational out;
        if (rational_ipow(base.value(), numerator(exponent), out)) return constant(out);
    }
    return make_node(Op::Pow, Rational(0), 0, exponent, {base});
}

Expr apply(Op op, const Expr& a) {
    switch (op) {
    case Op::Neg:
        return -a;
    case Op::Sqrt:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Atan:
        return make_node(op, Rational(0), 0, Rational(0), {a});
    default:
        throw InputError("apply: not a unary op: " + std::string(op_name(op)));
    }
}

Expr apply(Op op, const Expr& a, const Expr& b) {
    switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    default:
        throw InputError("apply: not a binary op: " + std::string(op_name(op)));
    }
}

Expr sqrt(const Expr& a) { return apply(Op::Sqrt, a); }
Expr sin(const Expr& a) { return apply(Op::Sin, a); }
Expr cos(const Expr& a) { return apply(Op::Cos, a); }
Expr exp(const Expr& a) { return apply(Op::Exp, a); }
Expr log(const Expr& a) { return apply(Op::Log, a); }
Expr atan(const Expr& a) { return apply(Op::Atan, a); }

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string rational_text(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

int precedence(const ExprNode& n) {
    switch (n.op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::Neg:
        return 3;
    case Op::Const:
        return n.value < 0 ? 3 : 5;
    case Op::Pow:
        return 4;
    default:
        return 5;
    }
}

void print(const ExprNode& n, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    bool parens = precedence(*child.node()) < min_prec;
    if (parens) out += '(';
    print(*child.node(), out);
    if (parens) out += ')';
}

void print(const ExprNode& n, std::string& out) {
    switch (n.op) {
    case Op::Const:
        out += rational_text(n.value);
        return;
    case Op::Pi:
        out += "pi";
        return;
    case Op::Var:
        out += 'a';
        out += std::to_string(n.var);
        return;
    case Op::Neg:
        out += '-';
        print_child(n.kids[0], 4, out);
        return;
    case Op::Sqrt:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Atan:
        out += op_name(n.op);
        out += '(';
        print(*n.kids[0].node(), out);
        out += ')';
        return;
    case Op::Add:
    case Op::Sub:
        print_child(n.kids[0], 1, out);
        out += n.op == Op::Add ? " + " : " - ";
        print_child(n.kids[1], 2, out);
        return;
    case Op::Mul:
    case Op::Div:
        print_child(n.kids[0], 2, out);
        out += n.op == Op::Mul ? " * " : " / ";
        print_child(n.kids[1], 3, out);
        return;
    case Op::Pow: {
        // Non-integer constants print as p/q; keep them visually atomic.
        const Expr& b = n.kids[0];
        bool parens = precedence(*b.node()) < 5 ||
                      (b.op() == Op::Const && denominator(b.value()) != 1);
        if (parens) out += '(';
        print(*b.node(), out);
        if (parens) out += ')';
        out += '^';
        if (n.exponent >= 0 && denominator(n.exponent) == 1) {
            out += rational_text(n.exponent);
        } else {
            out += '(';
            out += rational_text(n.exponent);
            out += ')';
        }
        return;
    }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(*e.node(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, int arity) : s_(text), arity_(arity) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_digit() const {
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    // digits [ "." digits ] | digits "/" digits
    Rational parse_number() {
        skip_ws();
        std::size_t start = pos_;
        if (!at_digit() && !(pos_ < s_.size() && s_[pos_] == '.')) fail("expected a number");
        boost::multiprecision::cpp_int num = 0;
        while (at_digit()) num = num * 10 + (s_[pos_++] - '0');
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            boost::multiprecision::cpp_int den = 1;
            if (!at_digit()) fail_at("malformed decimal", start);
            while (at_digit()) {
                num = num * 10 + (s_[pos_++] - '0');
                den *= 10;
            }
            return Rational(num, den);
        }
        if (pos_ + 1 < s_.size() && s_[pos_] == '/' &&
            std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            boost::multiprecision::cpp_int den = 0;
            while (at_digit()) den = den * 10 + (s_[pos_++] - '0');
            if (den == 0) fail_at("zero denominator in rational literal", start);
            return Rational(num, den);
        }
        return Rational(num);
    }

    Rational parse_exponent() {
        bool paren = accept('(');
        bool negative = accept('-');
        Rational r = parse_number();
        if (paren) expect(')');
        return negative ? Rational(-r) : r;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + parse_term();
            } else if (accept('-')) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * parse_factor();
            } else if (accept('/')) {
                lhs = lhs / parse_factor();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_factor() {
        if (accept('-')) return -parse_factor();
        Expr base = parse_base();
        if (accept('^')) return pow(base, parse_exponent());
        return base;
    }

    Expr parse_base() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(parse_number());
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string_view word = s_.substr(start, pos_ - start);
            if (word == "pi") return pi();
            if (word == "t") return checked_var(1, start);
            if (word.size() > 1 && (word[0] == 'a' || word[0] == 'x') &&
                std::all_of(word.begin() + 1, word.end(),
                            [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                int idx = 0;
                for (char ch : word.substr(1)) {
                    idx = idx * 10 + (ch - '0');
                    if (idx > 1000000) fail_at("variable index too large", start);
                }
                return checked_var(idx, start);
            }
            static constexpr std::pair<std::string_view, Op> funcs[] = {
                {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos},
                {"exp", Op::Exp},   {"log", Op::Log}, {"atan", Op::Atan},
            };
            for (const auto& [name, op] : funcs) {
                if (word == name) {
                    expect('(');
                    Expr arg = parse_expr();
                    expect(')');
                    return apply(op, arg);
                }
            }
            fail_at("unknown identifier '" + std::string(word) + "'", start);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr checked_var(int idx, std::size_t at) const {
        if (idx < 1 || idx > arity_) {
            fail_at("variable index out of range: a" + std::to_string(idx) + " with arity " +
                        std::to_string(arity_),
                    at);
        }
        return var(idx);
    }

    std::string_view s_;
    int arity_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, int arity) { return Parser(text, arity).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const char* what, const ExprNode& n) {
    std::string text;
    print(n, text);
    throw DomainError(what, text);
}

inline double apply_unary(const ExprNode& n, double x) {
    switch (n.op) {
    case Op::Neg: return -x;
    case Op::Sqrt:
        if (x < 0.0) domain_fail("sqrt of negative value", n);
        return std::sqrt(x);
    case Op::Sin: return std::sin(x);
    case Op::Cos: return std::cos(x);
    case Op::Exp: return std::exp(x);
    case Op::Log:
        if (!(x > 0.0)) domain_fail("log of nonpositive value", n);
        return std::log(x);
    case Op::Atan: return std::atan(x);
    case Op::Pow:
        if (n.integer_exponent) {
            if (x == 0.0 && n.exponent_d < 0.0) domain_fail("negative power of zero", n);
            return std::pow(x, n.exponent_d);
        }
        if (x < 0.0) domain_fail("fractional power of negative value", n);
        if (x == 0.0) {
            if (n.exponent_d > 0.0) return 0.0;
            domain_fail("nonpositive power of zero", n);
        }
        return std::pow(x, n.exponent_d);
    default:
        return x;
    }
}

inline double apply_binary(const ExprNode& n, double x, double y) {
    switch (n.op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div:
        if (y == 0.0) domain_fail("division by zero", n);
        return x / y;
    default:
        return 0.0;
    }
}

double eval_node(const ExprNode& n, std::span<const double> point) {
    switch (n.op) {
    case Op::Const: return n.value_d;
    case Op::Pi: return std::numbers::pi;
    case Op::Var: return point[n.var - 1];
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
        double x = eval_node(*n.kids[0].node(), point);
        double y = eval_node(*n.kids[1].node(), point);
        return apply_binary(n, x, y);
    }
    default:
        return apply_unary(n, eval_node(*n.kids[0].node(), point));
    }
}

}  // namespace

double eval(const Expr& e, std::span<const double> point) {
    if (static_cast<std::size_t>(e.max_var()) > point.size()) {
        throw InputError("eval: expression uses a" + std::to_string(e.max_var()) + " but point has " +
                         std::to_string(point.size()) + " coordinates");
    }
    return eval_node(*e.node(), point);
}

CompiledExpr::CompiledExpr(const Expr& e) : source_(e) {
    std::size_t depth = 0;
    auto emit = [&](auto&& self, const Expr& x) -> void {
        const ExprNode& n = *x.node();
        for (const Expr& k : n.kids) self(self, k);
        Instr ins;
        ins.op = n.op;
        ins.node = &n;
        ins.var = n.var;
        ins.integer_exponent = n.integer_exponent;
        if (n.op == Op::Const) ins.value = n.value_d;
        if (n.op == Op::Pi) ins.value = std::numbers::pi;
        if (n.op == Op::Pow) ins.value = n.exponent_d;
        if (n.kids.empty()) {
            ++depth;
        } else if (n.kids.size() == 2) {
            --depth;
        }
        max_stack_ = std::max(max_stack_, depth);
        code_.push_back(ins);
    };
    emit(emit, e);
}

double CompiledExpr::operator()(std::span<const double> point) const {
    if (code_.empty()) return 0.0;
    if (static_cast<std::size_t>(source_.max_var()) > point.size()) {
        throw InputError("eval: point has too few coordinates");
    }
    constexpr std::size_t kInline = 32;
    double inline_stack[kInline];
    std::vector<double> heap_stack;
    double* stack = inline_stack;
    if (max_stack_ > kInline) {
        heap_stack.resize(max_stack_);
        stack = heap_stack.data();
    }
    std::size_t sp = 0;
    for (const Instr& ins : code_) {
        switch (ins.op) {
        case Op::Const:
        case Op::Pi:
            stack[sp++] = ins.value;
            break;
        case Op::Var:
            stack[sp++] = point[ins.var - 1];
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            --sp;
            stack[sp - 1] = apply_binary(*ins.node, stack[sp - 1], stack[sp]);
            break;
        default:
            stack[sp - 1] = apply_unary(*ins.node, stack[sp - 1]);
            break;
        }
    }
    return stack[0];
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

Expr diff(const Expr& e, int index) {
    if (index < 1) throw InputError("diff: variable index must be >= 1");
    if (e.max_var() < index) return constant(0);
    switch (e.op()) {
    case Op::Const:
    case Op::Pi:
        return constant(0);
    case Op::Var:
        return constant(e.var() == index ? 1 : 0);
    case Op::Neg:
        return -diff(e.child(0), index);
    case Op::Add:
        return diff(e.child(0), index) + diff(e.child(1), index);
    case Op::Sub:
        return diff(e.child(0), index) - diff(e.child(1), index);
    case Op::Mul: {
        const Expr& u = e.child(0);
        const Expr& v = e.child(1);
        return diff(u, index) * v + u * diff(v, index);
    }
    case Op::Div: {
        const Expr& u = e.child(0);
        const Expr& v = e.child(1);
        Expr du = diff(u, index);
        Expr dv = diff(v, index);
        if (dv.is_zero()) return du / v;
        return (du * v - u * dv) / pow(v, Rational(2));
    }
    case Op::Pow: {
        const Expr& u = e.child(0);
        const Rational& r = e.exponent();
        return constant(r) * pow(u, r - 1) * diff(u, index);
    }
    case Op::Sqrt: {
        const Expr& u = e.child(0);
        return diff(u, index) / (constant(2) * e);
    }
    case Op::Sin:
        return cos(e.child(0)) * diff(e.child(0), index);
    case Op::Cos:
        return -sin(e.child(0)) * diff(e.child(0), index);
    case Op::Exp:
        return e * diff(e.child(0), index);
    case Op::Log:
        return diff(e.child(0), index) / e.child(0);
    case Op::Atan: {
        const Expr& u = e.child(0);
        return diff(u, index) / (constant(1) + pow(u, Rational(2)));
    }
    }
    return constant(0);
}

Expr substitute(const Expr& e, std::span<const Expr> replacement) {
    switch (e.op()) {
    case Op::Const:
    case Op::Pi:
        return e;
    case Op::Var:
        if (static_cast<std::size_t>(e.var()) > replacement.size()) {
            throw InputError("substitute: no replacement for a" + std::to_string(e.var()));
        }
        return replacement[e.var() - 1];
    case Op::Pow:
        return pow(substitute(e.child(0), replacement), e.exponent());
    default:
        break;
    }
    if (is_binary(e.op())) {
        return apply(e.op(), substitute(e.child(0), replacement), substitute(e.child(1), replacement));
    }
    return apply(e.op(), substitute(e.child(0), replacement));
}

}  // namespace periodlab
