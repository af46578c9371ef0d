// Canonical normal form for expressions: expanded sums of monomials.
//
// Atoms are variables, pi, function applications with canonical arguments,
// and powers of non-monomial sums ("bases"). Exponents of the same atom add
// up; a base raised to a small positive integer power is expanded back into
// a polynomial. Per base, terms are brought onto a common denominator so that
// rational identities such as d(d(theta)) = 0 collapse to the zero polynomial.

#include "periodlab/expr.hpp"

#include <map>
#include <memory>
#include <sstream>

namespace periodlab {

namespace {

constexpr long long kMaxExpand = 8;

struct Poly;

struct Atom {
    enum class Kind { Var, Pi, Func, Base } kind = Kind::Var;
    int var = 0;
    Op func = Op::Sin;
    std::shared_ptr<const Poly> poly;  // Func argument or Base
    std::string key;
};

struct Factor {
    std::shared_ptr<const Atom> atom;
    Rational exp;
};

using Monomial = std::map<std::string, Factor>;

struct Term {
    Monomial mono;
    Rational coeff;
};

struct Poly {
    std::map<std::string, Term> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }
    Rational constant_value() const { return terms.empty() ? Rational(0) : terms.begin()->second.coeff; }
};

std::string rational_key(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string mono_key(const Monomial& m) {
    std::string k;
    for (const auto& [key, f] : m) {
        k += key;
        k += '^';
        k += rational_key(f.exp);
        k += ';';
    }
    return k;
}

std::string poly_key(const Poly& p) {
    std::string k;
    for (const auto& [mk, t] : p.terms) {
        k += rational_key(t.coeff);
        k += '*';
        k += mk;
        k += '|';
    }
    return k;
}

void add_term(Poly& p, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    std::string k = mono_key(m);
    auto it = p.terms.find(k);
    if (it == p.terms.end()) {
        p.terms.emplace(std::move(k), Term{m, c});
        return;
    }
    it->second.coeff += c;
    if (it->second.coeff == 0) p.terms.erase(it);
}

Poly constant_poly(const Rational& c) {
    Poly p;
    add_term(p, {}, c);
    return p;
}

Poly atom_poly(std::shared_ptr<const Atom> a, const Rational& exp = Rational(1)) {
    Poly p;
    Monomial m;
    std::string k = a->key;
    m.emplace(std::move(k), Factor{std::move(a), exp});
    add_term(p, m, Rational(1));
    return p;
}

Poly add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [k, t] : b.terms) add_term(r, t.mono, t.coeff);
    return r;
}

Poly scale(const Poly& a, const Rational& c) {
    Poly r;
    if (c == 0) return r;
    for (const auto& [k, t] : a.terms) add_term(r, t.mono, t.coeff * c);
    return r;
}

Poly mul(const Poly& a, const Poly& b);
Poly pow_int(const Poly& p, long long n);

// Multiply two monomials. A base whose merged exponent becomes a small
// positive integer is expanded, so the result is a polynomial.
Poly mono_mul(const Monomial& a, const Monomial& b, const Rational& coeff) {
    Monomial m = a;
    std::vector<std::pair<std::shared_ptr<const Atom>, long long>> expand;
    for (const auto& [k, f] : b) {
        auto it = m.find(k);
        if (it == m.end()) {
            m.emplace(k, f);
        } else {
            it->second.exp += f.exp;
            if (it->second.exp == 0) m.erase(it);
        }
    }
    for (auto it = m.begin(); it != m.end();) {
        const Factor& f = it->second;
        if (f.atom->kind == Atom::Kind::Base && denominator(f.exp) == 1 && f.exp > 0 &&
            f.exp <= kMaxExpand) {
            expand.emplace_back(f.atom, numerator(f.exp).convert_to<long long>());
            it = m.erase(it);
        } else {
            ++it;
        }
    }
    Poly r;
    add_term(r, m, coeff);
    for (const auto& [atom, n] : expand) r = mul(r, pow_int(*atom->poly, n));
    return r;
}

Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ka, ta] : a.terms) {
        for (const auto& [kb, tb] : b.terms) {
            Poly prod = mono_mul(ta.mono, tb.mono, ta.coeff * tb.coeff);
            for (const auto& [kp, tp] : prod.terms) add_term(r, tp.mono, tp.coeff);
        }
    }
    return r;
}

Poly finalize(Poly p);

std::shared_ptr<const Atom> make_base_atom(const Poly& base) {
    auto a = std::make_shared<Atom>();
    a->kind = Atom::Kind::Base;
    a->poly = std::make_shared<const Poly>(base);
    a->key = "{" + poly_key(base) + "}";
    return a;
}

Poly pow_int(const Poly& p, long long n) {
    if (n == 0) return constant_poly(Rational(1));
    if (p.terms.size() == 1) {
        // Monomial: distribute the integer exponent.
        const Term& t = p.terms.begin()->second;
        Rational c(1);
        for (long long i = 0; i < (n < 0 ? -n : n); ++i) c *= t.coeff;
        if (n < 0) c = Rational(1) / c;
        Monomial m;
        for (const auto& [k, f] : t.mono) m.emplace(k, Factor{f.atom, f.exp * n});
        return mono_mul(m, {}, c);
    }
    if (p.is_zero()) {
        if (n > 0) return Poly{};
        return atom_poly(make_base_atom(p), Rational(n));
    }
    if (n > 0 && n <= kMaxExpand) {
        Poly r = p;
        for (long long i = 1; i < n; ++i) r = mul(r, p);
        return r;
    }
    return atom_poly(make_base_atom(p), Rational(n));
}

Poly pow_rational(const Poly& p, const Rational& r) {
    if (denominator(r) == 1) return pow_int(p, numerator(r).convert_to<long long>());
    if (p.is_zero() && r > 0) return Poly{};
    if (p.terms.size() == 1) {
        const Term& t = p.terms.begin()->second;
        if (t.coeff == 1 && t.mono.size() == 1) {
            const Factor& f = t.mono.begin()->second;
            if (f.exp == 1 || denominator(f.exp) != 1) {
                Monomial m;
                m.emplace(t.mono.begin()->first, Factor{f.atom, f.exp * r});
                return mono_mul(m, {}, Rational(1));
            }
        }
    }
    return atom_poly(make_base_atom(p), r);
}

Poly func_poly(Op op, const Poly& arg) {
    if (arg.is_constant()) {
        Rational c = arg.constant_value();
        if (c == 0 && (op == Op::Sin || op == Op::Atan)) return Poly{};
        if (c == 0 && (op == Op::Cos || op == Op::Exp)) return constant_poly(Rational(1));
        if (c == 1 && op == Op::Log) return Poly{};
    }
    auto a = std::make_shared<Atom>();
    a->kind = Atom::Kind::Func;
    a->func = op;
    a->poly = std::make_shared<const Poly>(arg);
    a->key = std::string(op_name(op)) + "[" + poly_key(arg) + "]";
    return atom_poly(a);
}

// Within one base, exponents that differ by an integer are brought down to
// the lowest one: u^(e + k) = u^e * u^k with u^k expanded. Returns whether
// anything changed.
bool align_fractional(Poly& p) {
    // (base key, fractional part) -> lowest exponent in that class
    std::map<std::pair<std::string, std::string>, Rational> lowest;
    auto frac = [](const Rational& e) {
        Rational f = e - Rational(numerator(e) / denominator(e));
        if (f < 0) f += 1;
        return f;
    };
    for (const auto& [k, t] : p.terms) {
        for (const auto& [ak, f] : t.mono) {
            if (f.atom->kind != Atom::Kind::Base || denominator(f.exp) == 1) continue;
            auto key = std::make_pair(ak, rational_key(frac(f.exp)));
            auto it = lowest.find(key);
            if (it == lowest.end()) lowest.emplace(key, f.exp);
            else if (f.exp < it->second) it->second = f.exp;
        }
    }
    bool changed = false;
    Poly out;
    for (const auto& [k, t] : p.terms) {
        Monomial m = t.mono;
        Poly extra = constant_poly(Rational(1));
        for (auto& [ak, f] : m) {
            if (f.atom->kind != Atom::Kind::Base || denominator(f.exp) == 1) continue;
            const Rational& low = lowest.at(std::make_pair(ak, rational_key(frac(f.exp))));
            Rational shift = f.exp - low;
            if (shift == 0 || shift > kMaxExpand) continue;
            extra = mul(extra, pow_int(*f.atom->poly, numerator(shift).convert_to<long long>()));
            f.exp = low;
            changed = true;
        }
        Poly term;
        add_term(term, m, t.coeff);
        out = add(out, mul(term, extra));
    }
    if (changed) p = std::move(out);
    return changed;
}

// Common denominator per base: every term ends up carrying the same (most
// negative) integer power of each base, numerators expanded.
Poly finalize(Poly p) {
    for (;;) {
        std::map<std::string, std::pair<std::shared_ptr<const Atom>, Rational>> lowest;
        std::map<std::string, bool> integral;
        for (const auto& [k, t] : p.terms) {
            for (const auto& [ak, f] : t.mono) {
                if (f.atom->kind != Atom::Kind::Base) continue;
                auto it = lowest.find(ak);
                if (it == lowest.end()) {
                    lowest.emplace(ak, std::make_pair(f.atom, f.exp));
                    integral[ak] = denominator(f.exp) == 1;
                } else {
                    if (f.exp < it->second.second) it->second.second = f.exp;
                    integral[ak] = integral[ak] && denominator(f.exp) == 1;
                }
            }
        }
        bool changed = false;
        for (const auto& [ak, info] : lowest) {
            if (!integral[ak] || info.second >= 0) continue;
            bool uniform = true;
            for (const auto& [k, t] : p.terms) {
                auto it = t.mono.find(ak);
                if (it == t.mono.end() || it->second.exp != info.second) {
                    uniform = false;
                    break;
                }
            }
            if (uniform) continue;
            // Multiply through by base^(-k), expand, then restore base^k.
            long long k = numerator(info.second).convert_to<long long>();
            if (-k > kMaxExpand) continue;
            Poly numer;
            for (const auto& [tk, t] : p.terms) {
                Monomial m = t.mono;
                Rational e(0);
                auto it = m.find(ak);
                if (it != m.end()) {
                    e = it->second.exp;
                    m.erase(it);
                }
                Poly term;
                add_term(term, m, t.coeff);
                long long shift = numerator(e).convert_to<long long>() - k;
                if (shift > kMaxExpand) {
                    numer = Poly{};
                    k = 0;
                    break;
                }
                numer = add(numer, mul(term, pow_int(*info.first->poly, shift)));
            }
            if (k == 0) continue;
            Poly denom = atom_poly(info.first, Rational(k));
            p = mul(numer, denom);
            changed = true;
            break;
        }
        if (!changed) changed = align_fractional(p);
        if (!changed) return p;
    }
}

Poly to_poly(const Expr& e) {
    switch (e.op()) {
    case Op::Const:
        return constant_poly(e.value());
    case Op::Pi: {
        auto a = std::make_shared<Atom>();
        a->kind = Atom::Kind::Pi;
        a->key = "pi";
        return atom_poly(a);
    }
    case Op::Var: {
        auto a = std::make_shared<Atom>();
        a->kind = Atom::Kind::Var;
        a->var = e.var();
        a->key = "a" + std::to_string(e.var());
        return atom_poly(a);
    }
    case Op::Neg:
        return scale(to_poly(e.child(0)), Rational(-1));
    case Op::Add:
        return add(to_poly(e.child(0)), to_poly(e.child(1)));
    case Op::Sub:
        return add(to_poly(e.child(0)), scale(to_poly(e.child(1)), Rational(-1)));
    case Op::Mul:
        return finalize(mul(to_poly(e.child(0)), to_poly(e.child(1))));
    case Op::Div:
        return finalize(mul(to_poly(e.child(0)), pow_int(finalize(to_poly(e.child(1))), -1)));
    case Op::Pow:
        return pow_rational(finalize(to_poly(e.child(0))), e.exponent());
    case Op::Sqrt:
        return pow_rational(finalize(to_poly(e.child(0))), Rational(1, 2));
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Atan:
        return func_poly(e.op(), finalize(to_poly(e.child(0))));
    }
    return Poly{};
}

Expr to_expr(const Poly& p);

Expr atom_expr(const Atom& a) {
    switch (a.kind) {
    case Atom::Kind::Var: return var(a.var);
    case Atom::Kind::Pi: return pi();
    case Atom::Kind::Func: return apply(a.func, to_expr(*a.poly));
    case Atom::Kind::Base: return to_expr(*a.poly);
    }
    return constant(0);
}

Expr to_expr(const Poly& p) {
    Expr sum = constant(0);
    bool first = true;
    for (const auto& [k, t] : p.terms) {
        Expr prod = constant(1);
        for (const auto& [ak, f] : t.mono) prod = prod * pow(atom_expr(*f.atom), f.exp);
        bool negative = t.coeff < 0;
        Rational mag = negative ? Rational(-t.coeff) : t.coeff;
        Expr term = constant(mag) * prod;
        if (first) {
            sum = negative ? -term : term;
            first = false;
        } else {
            sum = negative ? sum - term : sum + term;
        }
    }
    return sum;
}

}  // namespace

Expr canonical(const Expr& e) { return to_expr(finalize(to_poly(e))); }

}  // namespace periodlab
