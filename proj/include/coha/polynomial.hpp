#pragma once

#include "coha/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace coha {

class algebra_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exponent vector over a fixed variable count.
using Monomial = std::vector<int>;

/// Degree-lexicographic order, greatest first: higher total degree wins, ties
/// broken lexicographically on the exponent vector in the canonical variable
/// order. Map iteration therefore starts at the leading term.
struct DegLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da > db;
        return a > b;
    }
};

/// Sparse multivariate polynomial with exact rational coefficients over a
/// fixed number of variables. Zero coefficients are never stored.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, DegLexGreater>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_[Monomial(nvars, 0)] = c;
        return p;
    }

    static Polynomial variable(int nvars, int index, int power = 1) {
        if (index < 0 || index >= nvars) throw algebra_error("variable index out of range");
        Polynomial p(nvars);
        Monomial m(nvars, 0);
        m[index] = power;
        p.terms_[std::move(m)] = 1;
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        for (int e : terms_.begin()->first)
            if (e != 0) return false;
        return true;
    }

    Rational constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw algebra_error("polynomial is not constant");
        return terms_.begin()->second;
    }

    int total_degree() const {
        if (terms_.empty()) return 0;
        int d = 0;
        for (int e : terms_.begin()->first) d += e; // deglex leading term has max degree
        return d;
    }

    int degree_in(int var) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }

    bool uses(int var) const {
        for (const auto& [m, c] : terms_)
            if (m[var] != 0) return true;
        return false;
    }

    const Rational& leading_coefficient() const {
        static const Rational zero = 0;
        return terms_.empty() ? zero : terms_.begin()->second;
    }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial r(*this);
        r += o;
        return r;
    }

    Polynomial operator-(const Polynomial& o) const {
        Polynomial r(*this);
        r -= o;
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        check_same(o);
        Polynomial r(nvars_);
        Monomial m(nvars_);
        for (const auto& [ma, ca] : terms_) {
            for (const auto& [mb, cb] : o.terms_) {
                for (int k = 0; k < nvars_; ++k) m[k] = ma[k] + mb[k];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [m, coef] : terms_) coef *= c;
        }
        return *this;
    }

    Polynomial operator*(const Rational& c) const {
        Polynomial r(*this);
        r *= c;
        return r;
    }

    Polynomial pow(int e) const {
        if (e < 0) throw algebra_error("negative polynomial power");
        Polynomial r = constant(nvars_, 1);
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    /// Deterministic total order on polynomials of the same variable count,
    /// used to sort denominator factors canonically.
    bool less_canonical(const Polynomial& o) const {
        auto ia = terms_.begin(), ib = o.terms_.begin();
        DegLexGreater cmp;
        for (; ia != terms_.end() && ib != o.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return cmp(ib->first, ia->first); // smaller monomial first
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return terms_.size() < o.terms_.size();
    }

    /// Exact multivariate division: returns the quotient iff `*this` equals
    /// quotient * d with zero remainder. Works by repeated leading-term
    /// cancellation in the deglex order.
    std::optional<Polynomial> divide_exact(const Polynomial& d) const {
        check_same(d);
        if (d.is_zero()) throw algebra_error("division by the zero polynomial");
        if (d.is_constant()) {
            Polynomial q(*this);
            Rational inv = Rational(1) / d.constant_value();
            q *= inv;
            return q;
        }
        Polynomial rem(*this);
        Polynomial quot(nvars_);
        const Monomial& dlead = d.terms_.begin()->first;
        const Rational& dcoef = d.terms_.begin()->second;
        Monomial qm(nvars_);
        while (!rem.is_zero()) {
            const Monomial& rlead = rem.terms_.begin()->first;
            for (int k = 0; k < nvars_; ++k) {
                qm[k] = rlead[k] - dlead[k];
                if (qm[k] < 0) return std::nullopt;
            }
            Rational qc = rem.terms_.begin()->second / dcoef;
            quot.add_term(qm, qc);
            // rem -= (qc * qm) * d
            Monomial m(nvars_);
            for (const auto& [md, cd] : d.terms_) {
                for (int k = 0; k < nvars_; ++k) m[k] = md[k] + qm[k];
                rem.add_term(m, -qc * cd);
            }
        }
        return quot;
    }

    /// Renames variables: the exponent of variable k moves to perm[k]. The
    /// image space may be larger than the source (injective embedding).
    Polynomial remap(const std::vector<int>& perm, int new_nvars) const {
        if (static_cast<int>(perm.size()) != nvars_)
            throw algebra_error("variable remap has wrong arity");
        Polynomial r(new_nvars);
        Monomial m(new_nvars);
        for (const auto& [mo, c] : terms_) {
            std::fill(m.begin(), m.end(), 0);
            for (int k = 0; k < nvars_; ++k) {
                if (mo[k] != 0) {
                    if (perm[k] < 0 || perm[k] >= new_nvars)
                        throw algebra_error("variable remap image out of range");
                    m[perm[k]] += mo[k];
                }
            }
            r.add_term(m, c);
        }
        return r;
    }

    Polynomial permute(const std::vector<int>& perm) const { return remap(perm, nvars_); }

    /// Substitutes polynomials for a subset of variables (nullopt = keep).
    Polynomial substitute(const std::vector<std::optional<Polynomial>>& bindings) const {
        if (static_cast<int>(bindings.size()) != nvars_)
            throw algebra_error("substitution binding list has wrong arity");
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            Polynomial term = constant(nvars_, c);
            for (int k = 0; k < nvars_; ++k) {
                if (m[k] == 0) continue;
                if (bindings[k]) {
                    term *= bindings[k]->pow(m[k]);
                } else {
                    term *= variable(nvars_, k, m[k]);
                }
            }
            r += term;
        }
        return r;
    }

    Complex eval(const std::vector<Complex>& x) const {
        if (static_cast<int>(x.size()) != nvars_)
            throw algebra_error("evaluation point has wrong arity");
        Complex acc = 0.0;
        for (const auto& [m, c] : terms_) {
            Complex t = to_complex(c);
            for (int k = 0; k < nvars_; ++k)
                for (int e = 0; e < m[k]; ++e) t *= x[k];
            acc += t;
        }
        return acc;
    }

    /// Divides by the leading coefficient, returning the scale that was
    /// removed. Afterwards the deglex-leading coefficient is 1.
    Rational make_monic() {
        if (terms_.empty()) return 1;
        Rational lead = terms_.begin()->second;
        Rational inv = Rational(1) / lead;
        for (auto& [m, c] : terms_) c *= inv;
        return lead;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

private:
    void check_same(const Polynomial& o) const {
        if (nvars_ != o.nvars_) throw algebra_error("polynomials over different variable counts");
    }

    int nvars_;
    TermMap terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

} // namespace coha
