#pragma once

#include "coha/polynomial.hpp"
#include "coha/varspace.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace coha {

/// Exact rational function num/den over a VarSpace. The denominator is kept
/// as a product of monic factors with positive exponents; reduction divides
/// factors out of the numerator whenever the division is exact. Shuffle
/// denominators are products of linear forms, so this trial division is a
/// complete gcd for everything the engine produces; equality testing is
/// cross-multiplied and never relies on reduction being complete.
class RationalExpr {
public:
    using Factor = std::pair<Polynomial, int>;

    RationalExpr() = default;

    explicit RationalExpr(VarSpace space)
        : space_(std::move(space)), num_(Polynomial::constant(space_.size(), 0)) {}

    RationalExpr(VarSpace space, Polynomial num)
        : space_(std::move(space)), num_(std::move(num)) {
        if (num_.nvars() != space_.size()) throw algebra_error("polynomial arity does not match space");
    }

    static RationalExpr constant(const VarSpace& s, const Rational& c) {
        return RationalExpr(s, Polynomial::constant(s.size(), c));
    }

    static RationalExpr zero(const VarSpace& s) { return constant(s, 0); }
    static RationalExpr one(const VarSpace& s) { return constant(s, 1); }

    static RationalExpr variable(const VarSpace& s, int index, int power = 1) {
        return RationalExpr(s, Polynomial::variable(s.size(), index, power));
    }

    const VarSpace& space() const { return space_; }
    const Polynomial& num() const { return num_; }
    const std::vector<Factor>& den_factors() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    Rational constant_value() const {
        if (!is_constant()) throw algebra_error("expression is not constant");
        return num_.constant_value();
    }

    Polynomial den_expanded() const {
        Polynomial d = Polynomial::constant(space_.size(), 1);
        for (const auto& [f, e] : den_) d *= f.pow(e);
        return d;
    }

    RationalExpr operator-() const {
        RationalExpr r(*this);
        r.num_ = -r.num_;
        return r;
    }

    RationalExpr operator+(const RationalExpr& o) const {
        check_same(o);
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        // lcm of the factored denominators: per-factor max exponent
        std::vector<Factor> lcm = merge_max(den_, o.den_);
        Polynomial na = num_ * cofactor(lcm, den_);
        Polynomial nb = o.num_ * cofactor(lcm, o.den_);
        RationalExpr r(space_);
        r.num_ = na + nb;
        r.den_ = std::move(lcm);
        r.reduce();
        return r;
    }

    RationalExpr operator-(const RationalExpr& o) const { return *this + (-o); }

    RationalExpr operator*(const RationalExpr& o) const {
        check_same(o);
        RationalExpr r(space_);
        r.num_ = num_ * o.num_;
        r.den_ = merge_sum(den_, o.den_);
        r.reduce();
        return r;
    }

    RationalExpr operator*(const Rational& c) const {
        RationalExpr r(*this);
        r.num_ *= c;
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }

    RationalExpr operator/(const RationalExpr& o) const {
        check_same(o);
        if (o.is_zero()) throw algebra_error("division by zero expression");
        RationalExpr r(space_);
        r.num_ = num_;
        for (const auto& [f, e] : o.den_) r.num_ *= f.pow(e);
        r.den_ = den_;
        Polynomial d = o.num_;
        Rational scale = d.make_monic();
        r.num_ *= Rational(1) / scale;
        if (!d.is_constant()) push_factor(r.den_, d, 1);
        r.reduce();
        return r;
    }

    RationalExpr& operator+=(const RationalExpr& o) { return *this = *this + o; }
    RationalExpr& operator-=(const RationalExpr& o) { return *this = *this - o; }
    RationalExpr& operator*=(const RationalExpr& o) { return *this = *this * o; }
    RationalExpr& operator/=(const RationalExpr& o) { return *this = *this / o; }

    RationalExpr pow(int e) const {
        if (e < 0) return one(space_) / pow(-e);
        RationalExpr r = one(space_);
        RationalExpr base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Exact equality via cross multiplication.
    bool equals_exact(const RationalExpr& o) const {
        check_same(o);
        return (num_ * o.den_expanded()) == (o.num_ * den_expanded());
    }

    /// Renames variables by a permutation of the space.
    RationalExpr permute(const std::vector<int>& perm) const {
        if (static_cast<int>(perm.size()) != space_.size())
            throw algebra_error("permutation arity does not match space");
        RationalExpr r(space_);
        r.num_ = num_.permute(perm);
        for (const auto& [f, e] : den_) {
            Polynomial g = f.permute(perm);
            Rational s = g.make_monic();
            r.num_ *= Rational(1) / pow_rational(s, e);
            push_factor(r.den_, g, e);
        }
        r.reduce();
        return r;
    }

    /// Embeds into a (possibly larger) space along an injective index map.
    RationalExpr remap_space(const VarSpace& target, const std::vector<int>& index_map) const {
        RationalExpr r(target);
        r.num_ = num_.remap(index_map, target.size());
        for (const auto& [f, e] : den_) {
            Polynomial g = f.remap(index_map, target.size());
            Rational s = g.make_monic();
            r.num_ *= Rational(1) / pow_rational(s, e);
            push_factor(r.den_, g, e);
        }
        r.reduce();
        return r;
    }

    /// Exact substitution of expressions for variables; unbound variables are
    /// kept. Throws if a denominator factor vanishes identically.
    RationalExpr substitute(const std::vector<std::optional<RationalExpr>>& bindings) const {
        if (static_cast<int>(bindings.size()) != space_.size())
            throw algebra_error("substitution binding list has wrong arity");
        RationalExpr r = eval_poly_over(num_, bindings);
        for (const auto& [f, e] : den_) {
            RationalExpr fs = eval_poly_over(f, bindings);
            if (fs.is_zero())
                throw algebra_error("denominator vanishes identically under substitution");
            r = r / fs.pow(e);
        }
        return r;
    }

    Complex eval(const std::vector<Complex>& x) const {
        Complex n = num_.eval(x);
        Complex d = 1.0;
        for (const auto& [f, e] : den_) {
            Complex fv = f.eval(x);
            for (int k = 0; k < e; ++k) d *= fv;
        }
        if (std::abs(d) < 1e-300) throw algebra_error("evaluation hits a denominator zero");
        return n / d;
    }

    bool operator==(const RationalExpr& o) const {
        return space_ == o.space_ && num_ == o.num_ && den_ == o.den_;
    }

private:
    static Rational pow_rational(const Rational& b, int e) {
        Rational r = 1;
        for (int k = 0; k < e; ++k) r *= b;
        return r;
    }

    RationalExpr eval_poly_over(const Polynomial& p,
                                const std::vector<std::optional<RationalExpr>>& bindings) const {
        RationalExpr acc = zero(space_);
        for (const auto& [m, c] : p.terms()) {
            RationalExpr term = constant(space_, c);
            for (int k = 0; k < space_.size(); ++k) {
                if (m[k] == 0) continue;
                if (bindings[k]) {
                    term *= bindings[k]->pow(m[k]);
                } else {
                    term *= variable(space_, k, m[k]);
                }
            }
            acc += term;
        }
        return acc;
    }

    void check_same(const RationalExpr& o) const {
        if (!(space_ == o.space_)) throw algebra_error("expressions over different variable spaces");
    }

    static void push_factor(std::vector<Factor>& fs, const Polynomial& f, int e) {
        for (auto& [g, ge] : fs) {
            if (g == f) {
                ge += e;
                return;
            }
        }
        fs.emplace_back(f, e);
    }

    static std::vector<Factor> merge_max(const std::vector<Factor>& a, const std::vector<Factor>& b) {
        std::vector<Factor> r = a;
        for (const auto& [f, e] : b) {
            bool found = false;
            for (auto& [g, ge] : r) {
                if (g == f) {
                    ge = std::max(ge, e);
                    found = true;
                    break;
                }
            }
            if (!found) r.emplace_back(f, e);
        }
        return r;
    }

    static std::vector<Factor> merge_sum(const std::vector<Factor>& a, const std::vector<Factor>& b) {
        std::vector<Factor> r = a;
        for (const auto& [f, e] : b) push_factor(r, f, e);
        return r;
    }

    /// Product of lcm/den over the factored forms.
    Polynomial cofactor(const std::vector<Factor>& lcm, const std::vector<Factor>& den) const {
        Polynomial c = Polynomial::constant(space_.size(), 1);
        for (const auto& [f, e] : lcm) {
            int have = 0;
            for (const auto& [g, ge] : den)
                if (g == f) have = ge;
            if (e > have) c *= f.pow(e - have);
        }
        return c;
    }

    void reduce() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto& [f, e] : den_) {
            while (e > 0) {
                auto q = num_.divide_exact(f);
                if (!q) break;
                num_ = std::move(*q);
                --e;
            }
        }
        den_.erase(std::remove_if(den_.begin(), den_.end(),
                                  [](const Factor& f) { return f.second == 0; }),
                   den_.end());
        std::sort(den_.begin(), den_.end(), [](const Factor& a, const Factor& b) {
            return a.first.less_canonical(b.first);
        });
    }

    VarSpace space_;
    Polynomial num_;
    std::vector<Factor> den_;
};

inline RationalExpr operator*(const Rational& c, const RationalExpr& e) { return e * c; }

/// Enumerates all permutations of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Enumerates the full product group S_v x S_w of a space as global variable
/// permutations. Intended for small gradings (test oracles, symmetrization).
inline std::vector<std::vector<int>> symmetric_group_permutations(const VarSpace& s) {
    std::vector<std::vector<std::vector<int>>> block_perms;
    for (int i = 0; i < s.vertex_count(); ++i)
        block_perms.push_back(all_permutations(s.lambda_counts()[i]));
    for (size_t j = 0; j < s.z_counts().size(); ++j)
        block_perms.push_back(all_permutations(s.z_counts()[j]));

    std::vector<std::vector<int>> out;
    std::vector<size_t> idx(block_perms.size(), 0);
    const int nv = s.vertex_count();
    while (true) {
        std::vector<int> g = s.identity_permutation();
        for (int i = 0; i < nv; ++i)
            g = compose_permutations(s.lambda_block_permutation(i, block_perms[i][idx[i]]), g);
        for (size_t j = 0; j < s.z_counts().size(); ++j)
            g = compose_permutations(s.z_block_permutation(static_cast<int>(j), block_perms[nv + j][idx[nv + j]]), g);
        out.push_back(std::move(g));

        int k = static_cast<int>(block_perms.size()) - 1;
        while (k >= 0) {
            if (++idx[k] < block_perms[k].size()) break;
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

/// Orbit sum of e under the product of symmetric groups of its space.
inline RationalExpr symmetrize(const RationalExpr& e) {
    RationalExpr acc = RationalExpr::zero(e.space());
    for (const auto& g : symmetric_group_permutations(e.space())) acc += e.permute(g);
    return acc;
}

} // namespace coha
