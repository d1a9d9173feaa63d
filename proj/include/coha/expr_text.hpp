#pragma once

#include "coha/shuffle_engine.hpp"

#include <cctype>
#include <sstream>
#include <string>

namespace coha {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    size_t position;
};

// ---------------------------------------------------------------------------
// Printing. The printed form is canonical: monomials in deglex order,
// denominator factors in their canonical order, theta factors sorted by form.
// The parser below reads everything the printers emit.
// ---------------------------------------------------------------------------

namespace detail {

inline void print_monomial(std::ostream& os, const Monomial& m, const Rational& c,
                           const VarSpace& s, bool leading) {
    Rational a = c;
    if (a < 0) {
        os << (leading ? "-" : " - ");
        a = -a;
    } else if (!leading) {
        os << " + ";
    }
    bool any_var = false;
    for (int e : m)
        if (e != 0) any_var = true;
    bool coeff_shown = false;
    if (!any_var || a != 1) {
        os << to_string(a);
        coeff_shown = true;
    }
    bool first = !coeff_shown;
    for (size_t k = 0; k < m.size(); ++k) {
        if (m[k] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << s.name(static_cast<int>(k));
        if (m[k] != 1) os << "^" << m[k];
    }
}

} // namespace detail

inline std::string to_text(const Polynomial& p, const VarSpace& s) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool leading = true;
    for (const auto& [m, c] : p.terms()) {
        detail::print_monomial(os, m, c, s, leading);
        leading = false;
    }
    return os.str();
}

inline std::string to_text(const RationalExpr& e) {
    std::string num = to_text(e.num(), e.space());
    if (e.is_polynomial()) return num;
    std::ostringstream os;
    os << "(" << num << ")/(";
    bool first = true;
    for (const auto& [f, exp] : e.den_factors()) {
        if (!first) os << "*";
        first = false;
        os << "(" << to_text(f, e.space()) << ")";
        if (exp != 1) os << "^" << exp;
    }
    os << ")";
    return os.str();
}

inline std::string to_text(const AffineForm& form, const VarSpace& s) {
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < form.coeffs.size(); ++k) {
        int c = form.coeffs[k];
        if (c == 0) continue;
        if (c > 0 && !first) os << "+";
        if (c == -1) os << "-";
        else if (c != 1) os << c << "*";
        os << s.name(static_cast<int>(k));
        first = false;
    }
    if (form.constant != 0 || first) {
        if (form.constant >= 0 && !first) os << "+";
        os << to_string(form.constant);
    }
    return os.str();
}

inline std::string to_text(const ThetaExpr& e) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool leading = true;
    for (const auto& t : e.terms()) {
        Rational c = t.scalar;
        if (c < 0) {
            os << (leading ? "-" : " - ");
            c = -c;
        } else if (!leading) {
            os << " + ";
        }
        leading = false;
        bool cof_trivial = t.cofactor.is_polynomial() && t.cofactor.num().is_constant() &&
                           t.cofactor.num().constant_value() == 1;
        bool printed = false;
        if (c != 1 || (cof_trivial && t.factors.empty())) {
            os << to_string(c);
            printed = true;
        }
        if (!cof_trivial) {
            if (printed) os << "*";
            os << "(" << to_text(t.cofactor) << ")";
            printed = true;
        }
        for (const auto& f : t.factors) {
            if (printed) os << "*";
            printed = true;
            os << "th(" << to_text(f.form, e.space()) << ")";
            if (f.exponent != 1) os << "^" << f.exponent;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

namespace detail {

struct Lexer {
    const std::string& text;
    size_t pos = 0;

    explicit Lexer(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_space();
        return pos >= text.size();
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw parse_error(std::string("expected '") + c + "'", pos);
    }

    bool accept_word(const std::string& w) {
        skip_space();
        if (text.compare(pos, w.size(), w) == 0) {
            // a word must not continue with an identifier character
            size_t end = pos + w.size();
            if (end < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                return false;
            pos = end;
            return true;
        }
        return false;
    }

    bool peek_number() {
        skip_space();
        return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
    }

    BigInt integer() {
        skip_space();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw parse_error("expected a number", pos);
        return BigInt(text.substr(start, pos - start));
    }

    int small_int() {
        bool neg = accept('-');
        BigInt v = integer();
        if (v > 1000000) throw parse_error("index too large", pos);
        return (neg ? -1 : 1) * v.convert_to<int>();
    }

    /// Parses l[i,s] / zf[j,t] / t1 / t2 and resolves against the space.
    int variable(const VarSpace& space) {
        skip_space();
        size_t at = pos;
        if (accept_word("t1")) return space.t1();
        if (accept_word("t2")) return space.t2();
        bool is_z = false;
        if (accept_word("zf")) {
            is_z = true;
        } else if (!accept_word("l")) {
            throw parse_error("expected a variable token", at);
        }
        expect('[');
        int vertex = small_int();
        expect(',');
        int index = small_int();
        expect(']');
        try {
            return is_z ? space.z(vertex - 1, index) : space.lambda(vertex - 1, index);
        } catch (const varspace_error& e) {
            throw parse_error(e.what(), at);
        }
    }

    bool peek_variable() {
        skip_space();
        if (pos >= text.size()) return false;
        if (text.compare(pos, 2, "zf") == 0) return true;
        if (text.compare(pos, 2, "t1") == 0 || text.compare(pos, 2, "t2") == 0) {
            size_t end = pos + 2;
            return end >= text.size() ||
                   !(std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_');
        }
        if (text[pos] == 'l') {
            size_t end = pos + 1;
            return end < text.size() && text[end] == '[';
        }
        return false;
    }
};

inline AffineForm parse_affine(Lexer& lex, const VarSpace& space) {
    AffineForm form(space.size());
    bool first = true;
    while (true) {
        int sign = 1;
        if (lex.accept('-')) sign = -1;
        else if (lex.accept('+')) sign = 1;
        else if (!first) break;

        if (lex.peek_variable()) {
            form.add_var(lex.variable(space), sign);
        } else if (lex.peek_number()) {
            BigInt a = lex.integer();
            if (lex.peek() == '*') {
                lex.expect('*');
                if (a > 1000000) throw parse_error("coefficient too large", lex.pos);
                form.add_var(lex.variable(space), sign * a.convert_to<int>());
            } else if (lex.peek() == '/') {
                lex.expect('/');
                BigInt b = lex.integer();
                form.add_constant(Rational(sign) * Rational(a, b));
            } else {
                form.add_constant(Rational(sign) * Rational(a));
            }
        } else {
            throw parse_error("expected an affine term", lex.pos);
        }
        first = false;
        char c = lex.peek();
        if (c != '+' && c != '-') break;
    }
    return form;
}

/// Recursive-descent expression parser, generic over the carrier. The Ops
/// adapter supplies constants, variables, theta factors and arithmetic.
template <typename Ops>
typename Ops::Value parse_expr(Lexer& lex, const VarSpace& space, const Ops& ops);

template <typename Ops>
typename Ops::Value parse_atom(Lexer& lex, const VarSpace& space, const Ops& ops) {
    if (lex.accept('(')) {
        auto v = parse_expr(lex, space, ops);
        lex.expect(')');
        return v;
    }
    if (lex.accept_word("th")) {
        lex.expect('(');
        AffineForm form = parse_affine(lex, space);
        lex.expect(')');
        int e = 1;
        if (lex.accept('^')) e = lex.small_int();
        return ops.theta(form, e);
    }
    if (lex.peek_variable()) return ops.variable(lex.variable(space));
    if (lex.peek_number()) return ops.constant(Rational(lex.integer()));
    throw parse_error("expected a value", lex.pos);
}

template <typename Ops>
typename Ops::Value parse_power(Lexer& lex, const VarSpace& space, const Ops& ops) {
    auto base = parse_atom(lex, space, ops);
    if (lex.accept('^')) {
        int e = lex.small_int();
        return ops.power(base, e);
    }
    return base;
}

template <typename Ops>
typename Ops::Value parse_unary(Lexer& lex, const VarSpace& space, const Ops& ops) {
    if (lex.accept('-')) return ops.negate(parse_unary(lex, space, ops));
    if (lex.accept('+')) return parse_unary(lex, space, ops);
    return parse_power(lex, space, ops);
}

template <typename Ops>
typename Ops::Value parse_term(Lexer& lex, const VarSpace& space, const Ops& ops) {
    auto v = parse_unary(lex, space, ops);
    while (true) {
        if (lex.accept('*')) v = ops.mul(v, parse_unary(lex, space, ops));
        else if (lex.accept('/')) v = ops.div(v, parse_unary(lex, space, ops));
        else return v;
    }
}

template <typename Ops>
typename Ops::Value parse_expr(Lexer& lex, const VarSpace& space, const Ops& ops) {
    auto v = parse_term(lex, space, ops);
    while (true) {
        if (lex.accept('+')) v = ops.add(v, parse_term(lex, space, ops));
        else if (lex.accept('-')) v = ops.sub(v, parse_term(lex, space, ops));
        else return v;
    }
}

struct RationalOps {
    using Value = RationalExpr;
    const VarSpace& s;
    Value constant(const Rational& c) const { return RationalExpr::constant(s, c); }
    Value variable(int idx) const { return RationalExpr::variable(s, idx); }
    Value theta(const AffineForm&, int) const {
        throw algebra_error("theta factors are not valid in a rational expression");
    }
    Value power(const Value& v, int e) const { return v.pow(e); }
    Value negate(const Value& v) const { return -v; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b) const { return a / b; }
};

struct ThetaOps {
    using Value = ThetaExpr;
    const VarSpace& s;
    Value constant(const Rational& c) const { return ThetaExpr::constant(s, c); }
    Value variable(int idx) const {
        return ThetaExpr::from_rational(s, RationalExpr::variable(s, idx));
    }
    Value theta(const AffineForm& f, int e) const { return ThetaExpr::theta(s, f, e); }
    Value power(const Value& v, int e) const {
        if (e < 0) return v.inverse_single_term().pow_positive(-e);
        return v.pow_positive(e);
    }
    Value negate(const Value& v) const { return -v; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b) const { return a / b; }
};

} // namespace detail

inline RationalExpr parse_rational_expr(const std::string& text, const VarSpace& space) {
    detail::Lexer lex(text);
    detail::RationalOps ops{space};
    RationalExpr v = detail::parse_expr(lex, space, ops);
    if (!lex.eof()) throw parse_error("unexpected trailing input", lex.pos);
    return v;
}

inline ThetaExpr parse_theta_expr(const std::string& text, const VarSpace& space) {
    detail::Lexer lex(text);
    detail::ThetaOps ops{space};
    ThetaExpr v = detail::parse_expr(lex, space, ops);
    if (!lex.eof()) throw parse_error("unexpected trailing input", lex.pos);
    return v;
}

/// Parses "[v=a,b;w=c,d] payload" into a graded element over the quiver.
inline ShuffleElement parse_shuffle_element(const std::string& text, const Quiver& q,
                                            const Kernel& kernel) {
    detail::Lexer lex(text);
    lex.expect('[');
    if (!lex.accept_word("v")) throw parse_error("expected grading block [v=..;w=..]", lex.pos);
    lex.expect('=');
    std::vector<int> v;
    v.push_back(lex.small_int());
    while (lex.accept(',')) v.push_back(lex.small_int());
    std::vector<int> w(v.size(), 0);
    if (lex.accept(';')) {
        if (!lex.accept_word("w")) throw parse_error("expected w= in grading block", lex.pos);
        lex.expect('=');
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) lex.expect(',');
            w[i] = lex.small_int();
        }
    }
    lex.expect(']');
    if (static_cast<int>(v.size()) != q.vertex_count())
        throw parse_error("grading has wrong vertex count for the quiver", 0);

    DimPair grading(v, w);
    VarSpace space = VarSpace::for_grading(grading);
    std::string rest = text.substr(lex.pos);
    Payload payload;
    if (kernel.tag == KernelTag::elliptic) {
        ThetaExpr e = parse_theta_expr(rest, space);
        payload = std::move(e);
    } else {
        RationalExpr e = parse_rational_expr(rest, space);
        payload = std::move(e);
    }
    return ShuffleElement{q, grading, kernel, std::move(payload)};
}

/// Infers the smallest variable space mentioned by the expression text:
/// vertex count and per-vertex counts come from the largest l[i,s] / zf[j,t]
/// indices seen.
inline VarSpace infer_space(const std::string& text) {
    detail::Lexer lex(text);
    std::vector<int> lam, z;
    auto bump = [](std::vector<int>& v, int vertex, int index) {
        if (static_cast<int>(v.size()) < vertex) v.resize(vertex, 0);
        v[vertex - 1] = std::max(v[vertex - 1], index);
    };
    while (!lex.eof()) {
        size_t before = lex.pos;
        if (lex.accept_word("zf")) {
            if (lex.accept('[')) {
                int vertex = lex.small_int();
                lex.expect(',');
                int index = lex.small_int();
                lex.expect(']');
                bump(z, vertex, index);
                continue;
            }
        } else if (lex.accept_word("l")) {
            if (lex.accept('[')) {
                int vertex = lex.small_int();
                lex.expect(',');
                int index = lex.small_int();
                lex.expect(']');
                bump(lam, vertex, index);
                continue;
            }
        }
        if (lex.pos == before) ++lex.pos;
    }
    size_t vertices = std::max(lam.size(), std::max<size_t>(z.size(), 1));
    lam.resize(vertices, 0);
    z.resize(vertices, 0);
    return VarSpace(lam, z);
}

} // namespace coha
