#pragma once

#include "coha/rational_expr.hpp"
#include "coha/theta.hpp"
#include "coha/varspace.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <vector>

namespace coha {

/// Affine-linear form: integer coefficients over a VarSpace plus an exact
/// rational constant. Arguments of theta factors.
struct AffineForm {
    std::vector<int> coeffs;
    Rational constant = 0;

    explicit AffineForm(int nvars = 0) : coeffs(nvars, 0) {}

    static AffineForm var(const VarSpace& s, int index, int coeff = 1) {
        AffineForm f(s.size());
        f.coeffs.at(index) = coeff;
        return f;
    }

    bool is_identically_zero() const {
        if (constant != 0) return false;
        for (int c : coeffs)
            if (c != 0) return false;
        return true;
    }

    AffineForm operator+(const AffineForm& o) const {
        AffineForm r = *this;
        for (size_t k = 0; k < coeffs.size(); ++k) r.coeffs[k] += o.coeffs[k];
        r.constant += o.constant;
        return r;
    }

    AffineForm operator-(const AffineForm& o) const {
        AffineForm r = *this;
        for (size_t k = 0; k < coeffs.size(); ++k) r.coeffs[k] -= o.coeffs[k];
        r.constant -= o.constant;
        return r;
    }

    AffineForm negated() const {
        AffineForm r = *this;
        for (int& c : r.coeffs) c = -c;
        r.constant = -r.constant;
        return r;
    }

    AffineForm& add_var(int index, int coeff) {
        coeffs.at(index) += coeff;
        return *this;
    }

    AffineForm& add_constant(const Rational& c) {
        constant += c;
        return *this;
    }

    /// Canonical orientation: the first nonzero coefficient (or, for constant
    /// forms, the constant) is positive. Returns -1 if the form was flipped.
    int canonicalize() {
        for (int c : coeffs) {
            if (c > 0) return 1;
            if (c < 0) {
                *this = negated();
                return -1;
            }
        }
        if (constant < 0) {
            *this = negated();
            return -1;
        }
        return 1;
    }

    AffineForm permute(const std::vector<int>& perm) const {
        AffineForm r(static_cast<int>(coeffs.size()));
        for (size_t k = 0; k < coeffs.size(); ++k) r.coeffs[perm[k]] += coeffs[k];
        r.constant = constant;
        return r;
    }

    AffineForm remap(const std::vector<int>& index_map, int new_nvars) const {
        AffineForm r(new_nvars);
        for (size_t k = 0; k < coeffs.size(); ++k)
            if (coeffs[k] != 0) r.coeffs.at(index_map[k]) += coeffs[k];
        r.constant = constant;
        return r;
    }

    /// Composition with affine bindings (unbound variables stay themselves).
    AffineForm substitute(const std::vector<std::optional<AffineForm>>& bindings) const {
        AffineForm r(static_cast<int>(coeffs.size()));
        r.constant = constant;
        for (size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            if (bindings[k]) {
                for (size_t j = 0; j < coeffs.size(); ++j)
                    r.coeffs[j] += coeffs[k] * bindings[k]->coeffs[j];
                r.constant += Rational(coeffs[k]) * bindings[k]->constant;
            } else {
                r.coeffs[k] += coeffs[k];
            }
        }
        return r;
    }

    /// The form as an exact polynomial (used for cofactor substitutions).
    Polynomial to_polynomial() const {
        Polynomial p = Polynomial::constant(static_cast<int>(coeffs.size()), constant);
        for (size_t k = 0; k < coeffs.size(); ++k)
            if (coeffs[k] != 0)
                p += Polynomial::variable(static_cast<int>(coeffs.size()), static_cast<int>(k)) *
                     Rational(coeffs[k]);
        return p;
    }

    Complex eval(const std::vector<Complex>& x) const {
        Complex acc = to_complex(constant);
        for (size_t k = 0; k < coeffs.size(); ++k)
            if (coeffs[k] != 0) acc += static_cast<double>(coeffs[k]) * x[k];
        return acc;
    }

    bool operator==(const AffineForm&) const = default;

    bool operator<(const AffineForm& o) const {
        if (coeffs != o.coeffs) return coeffs < o.coeffs;
        return constant < o.constant;
    }
};

/// One factor theta(form)^exponent.
struct ThetaFactor {
    AffineForm form;
    int exponent = 1;

    bool operator==(const ThetaFactor&) const = default;
};

/// One term: exact rational scalar x cofactor x product of theta factors.
struct ThetaTerm {
    Rational scalar = 1;
    RationalExpr cofactor; // rational-function cofactor, usually 1
    std::vector<ThetaFactor> factors; // sorted by form, exponents nonzero

    bool same_shape(const ThetaTerm& o) const {
        return factors == o.factors && cofactor == o.cofactor;
    }
};

/// Formal finite sum of theta terms over a VarSpace; the elliptic carrier.
/// No symbolic theta identities are applied beyond oddness orientation and
/// exponent bookkeeping; equality is decided by sampling.
class ThetaExpr {
public:
    ThetaExpr() = default;

    explicit ThetaExpr(VarSpace space) : space_(std::move(space)) {}

    static ThetaExpr constant(const VarSpace& s, const Rational& c) {
        ThetaExpr e(s);
        if (c != 0) {
            ThetaTerm t;
            t.scalar = c;
            t.cofactor = RationalExpr::one(s);
            e.terms_.push_back(std::move(t));
        }
        return e;
    }

    static ThetaExpr zero(const VarSpace& s) { return constant(s, 0); }
    static ThetaExpr one(const VarSpace& s) { return constant(s, 1); }

    /// Single factor theta(form)^exponent.
    static ThetaExpr theta(const VarSpace& s, AffineForm form, int exponent = 1) {
        ThetaExpr e(s);
        ThetaTerm t;
        t.scalar = 1;
        t.cofactor = RationalExpr::one(s);
        t.factors.push_back(ThetaFactor{std::move(form), exponent});
        normalize_term(t);
        if (t.scalar != 0) e.terms_.push_back(std::move(t));
        return e;
    }

    /// Polynomial or rational cofactor as a term without theta factors.
    static ThetaExpr from_rational(const VarSpace& s, RationalExpr cofactor) {
        ThetaExpr e(s);
        if (!cofactor.is_zero()) {
            ThetaTerm t;
            t.scalar = 1;
            t.cofactor = std::move(cofactor);
            e.terms_.push_back(std::move(t));
        }
        return e;
    }

    const VarSpace& space() const { return space_; }
    const std::vector<ThetaTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    ThetaExpr operator-() const {
        ThetaExpr r = *this;
        for (auto& t : r.terms_) t.scalar = -t.scalar;
        return r;
    }

    ThetaExpr operator+(const ThetaExpr& o) const {
        check_same(o);
        ThetaExpr r = *this;
        for (const auto& t : o.terms_) r.append_term(t);
        return r;
    }

    ThetaExpr operator-(const ThetaExpr& o) const { return *this + (-o); }

    ThetaExpr operator*(const ThetaExpr& o) const {
        check_same(o);
        ThetaExpr r(space_);
        for (const auto& a : terms_) {
            for (const auto& b : o.terms_) {
                ThetaTerm t;
                t.scalar = a.scalar * b.scalar;
                t.cofactor = a.cofactor * b.cofactor;
                t.factors = merge_factors(a.factors, b.factors);
                normalize_term(t);
                if (t.scalar != 0 && !t.cofactor.is_zero()) r.append_term(std::move(t));
            }
        }
        return r;
    }

    ThetaExpr operator*(const Rational& c) const {
        if (c == 0) return zero(space_);
        ThetaExpr r = *this;
        for (auto& t : r.terms_) t.scalar *= c;
        return r;
    }

    ThetaExpr& operator+=(const ThetaExpr& o) { return *this = *this + o; }
    ThetaExpr& operator-=(const ThetaExpr& o) { return *this = *this - o; }
    ThetaExpr& operator*=(const ThetaExpr& o) { return *this = *this * o; }

    /// Multiplicative inverse of a single-term expression (theta exponents
    /// negate, the cofactor inverts).
    ThetaExpr inverse_single_term() const {
        if (terms_.size() != 1) throw algebra_error("can only invert single-term theta expressions");
        const ThetaTerm& t = terms_[0];
        if (t.scalar == 0) throw algebra_error("division by zero theta expression");
        ThetaTerm r;
        r.scalar = Rational(1) / t.scalar;
        r.cofactor = RationalExpr::one(space_) / t.cofactor;
        r.factors = t.factors;
        for (auto& f : r.factors) f.exponent = -f.exponent;
        ThetaExpr e(space_);
        e.terms_.push_back(std::move(r));
        return e;
    }

    ThetaExpr operator/(const ThetaExpr& o) const { return *this * o.inverse_single_term(); }

    ThetaExpr pow_positive(int e) const {
        if (e < 0) throw algebra_error("pow_positive needs a nonnegative exponent");
        ThetaExpr r = one(space_);
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    ThetaExpr permute(const std::vector<int>& perm) const {
        ThetaExpr r(space_);
        for (const auto& t : terms_) {
            ThetaTerm nt;
            nt.scalar = t.scalar;
            nt.cofactor = t.cofactor.permute(perm);
            for (const auto& f : t.factors)
                nt.factors.push_back(ThetaFactor{f.form.permute(perm), f.exponent});
            normalize_term(nt);
            if (nt.scalar != 0) r.append_term(std::move(nt));
        }
        return r;
    }

    ThetaExpr remap_space(const VarSpace& target, const std::vector<int>& index_map) const {
        ThetaExpr r(target);
        for (const auto& t : terms_) {
            ThetaTerm nt;
            nt.scalar = t.scalar;
            nt.cofactor = t.cofactor.remap_space(target, index_map);
            for (const auto& f : t.factors)
                nt.factors.push_back(ThetaFactor{f.form.remap(index_map, target.size()), f.exponent});
            normalize_term(nt);
            if (nt.scalar != 0) r.append_term(std::move(nt));
        }
        return r;
    }

    /// Affine substitution var -> affine form, applied inside every theta
    /// argument and to the cofactor.
    ThetaExpr substitute(const std::vector<std::optional<AffineForm>>& bindings) const {
        if (static_cast<int>(bindings.size()) != space_.size())
            throw algebra_error("substitution binding list has wrong arity");
        std::vector<std::optional<RationalExpr>> rebind(bindings.size());
        for (size_t k = 0; k < bindings.size(); ++k)
            if (bindings[k]) rebind[k] = RationalExpr(space_, bindings[k]->to_polynomial());
        ThetaExpr r(space_);
        for (const auto& t : terms_) {
            ThetaTerm nt;
            nt.scalar = t.scalar;
            nt.cofactor = t.cofactor.substitute(rebind);
            for (const auto& f : t.factors)
                nt.factors.push_back(ThetaFactor{f.form.substitute(bindings), f.exponent});
            normalize_term(nt);
            if (nt.scalar != 0 && !nt.cofactor.is_zero()) r.append_term(std::move(nt));
        }
        return r;
    }

    /// Term-wise evaluation in the stored (deterministic) term order.
    /// Factors with negative exponent whose theta value falls below pole_eps
    /// raise pole_error.
    Complex eval(const std::vector<Complex>& x, const ThetaParams& p, double pole_eps = 1e-12) const {
        if (static_cast<int>(x.size()) != space_.size())
            throw algebra_error("evaluation point has wrong arity");
        Complex acc = 0.0;
        for (const auto& t : terms_) {
            Complex val = to_complex(t.scalar) * t.cofactor.eval(x);
            for (const auto& f : t.factors) {
                Complex th = theta_eval(f.form.eval(x), p);
                if (f.exponent >= 0) {
                    for (int k = 0; k < f.exponent; ++k) val *= th;
                } else {
                    if (std::abs(th) < pole_eps)
                        throw pole_error("theta factor with negative exponent near a zero");
                    for (int k = 0; k < -f.exponent; ++k) val /= th;
                }
            }
            acc += val;
        }
        return acc;
    }

    /// All theta arguments appearing with negative exponent (pole loci), used
    /// by the sampler's exclusion rule.
    std::vector<AffineForm> pole_forms() const {
        std::vector<AffineForm> out;
        for (const auto& t : terms_)
            for (const auto& f : t.factors)
                if (f.exponent < 0) out.push_back(f.form);
        return out;
    }

    bool operator==(const ThetaExpr& o) const {
        if (!(space_ == o.space_) || terms_.size() != o.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].scalar != o.terms_[i].scalar || !terms_[i].same_shape(o.terms_[i]))
                return false;
        }
        return true;
    }

private:
    void check_same(const ThetaExpr& o) const {
        if (!(space_ == o.space_)) throw algebra_error("theta expressions over different variable spaces");
    }

    static std::vector<ThetaFactor> merge_factors(const std::vector<ThetaFactor>& a,
                                                  const std::vector<ThetaFactor>& b) {
        std::vector<ThetaFactor> r = a;
        for (const auto& f : b) {
            bool found = false;
            for (auto& g : r) {
                if (g.form == f.form) {
                    g.exponent += f.exponent;
                    found = true;
                    break;
                }
            }
            if (!found) r.push_back(f);
        }
        r.erase(std::remove_if(r.begin(), r.end(),
                               [](const ThetaFactor& f) { return f.exponent == 0; }),
                r.end());
        return r;
    }

    /// Orientation + ordering: every factor form is flipped to canonical
    /// orientation (theta is odd, so each flip contributes (-1)^exponent),
    /// identical forms merge, factors sort by form. A zero form with positive
    /// exponent kills the term.
    static void normalize_term(ThetaTerm& t) {
        std::vector<ThetaFactor> canon;
        for (auto f : t.factors) {
            int sign = f.form.canonicalize();
            if (sign < 0 && (f.exponent & 1)) t.scalar = -t.scalar;
            if (f.form.is_identically_zero()) {
                if (f.exponent > 0) {
                    t.scalar = 0;
                    return;
                }
                // negative exponent on theta(0): kept; evaluation reports the pole
            }
            canon.push_back(std::move(f));
        }
        t.factors = merge_factors({}, canon);
        std::sort(t.factors.begin(), t.factors.end(),
                  [](const ThetaFactor& a, const ThetaFactor& b) {
                      if (!(a.form == b.form)) return a.form < b.form;
                      return a.exponent < b.exponent;
                  });
    }

    void append_term(ThetaTerm t) {
        if (t.scalar == 0 || t.cofactor.is_zero()) return;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].same_shape(t)) {
                terms_[i].scalar += t.scalar;
                if (terms_[i].scalar == 0) terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(i));
                return;
            }
        }
        terms_.push_back(std::move(t));
    }

    VarSpace space_;
    std::vector<ThetaTerm> terms_;
};

inline ThetaExpr operator*(const Rational& c, const ThetaExpr& e) { return e * c; }

} // namespace coha
