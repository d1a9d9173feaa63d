#pragma once

#include "coha/rational_expr.hpp"
#include "coha/theta_expr.hpp"

namespace coha {

enum class KernelTag { additive, multiplicative, elliptic };

/// Kernel selection for the shuffle factor. The additive kernel keeps every
/// linear form as is; the multiplicative kernel pushes each form through the
/// formal group law A +_F B = A + B - beta*A*B symbol by symbol; the elliptic
/// kernel wraps the form in a theta factor.
struct Kernel {
    KernelTag tag = KernelTag::additive;
    Rational beta = 1;

    void validate() const {
        if (tag == KernelTag::multiplicative && beta == 0)
            throw algebra_error("multiplicative kernel needs a nonzero deformation scalar");
    }

    bool operator==(const Kernel& o) const {
        if (tag != o.tag) return false;
        if (tag == KernelTag::multiplicative) return beta == o.beta;
        return true;
    }
};

inline const char* kernel_name(KernelTag t) {
    switch (t) {
        case KernelTag::additive: return "additive";
        case KernelTag::multiplicative: return "multiplicative";
        case KernelTag::elliptic: return "elliptic";
    }
    return "?";
}

inline Kernel kernel_from_name(const std::string& name) {
    if (name == "additive") return Kernel{KernelTag::additive};
    if (name == "multiplicative") return Kernel{KernelTag::multiplicative};
    if (name == "elliptic") return Kernel{KernelTag::elliptic};
    throw algebra_error("unknown kernel: " + name);
}

/// a +_F b for the multiplicative formal group law.
inline RationalExpr fgl_sum(const RationalExpr& a, const RationalExpr& b, const Rational& beta) {
    return a + b - (beta * (a * b));
}

/// The formal inverse: a +_F fgl_negate(a) = 0.
inline RationalExpr fgl_negate(const RationalExpr& a, const Rational& beta) {
    return (-a) / (RationalExpr::one(a.space()) - beta * a);
}

/// c-fold formal sum [c]_F(a).
inline RationalExpr fgl_multiple(const RationalExpr& a, int c, const Rational& beta) {
    if (c < 0) return fgl_negate(fgl_multiple(a, -c, beta), beta);
    RationalExpr acc = RationalExpr::zero(a.space());
    for (int k = 0; k < c; ++k) acc = fgl_sum(acc, a, beta);
    return acc;
}

/// Applies the kernel to an affine-linear form, producing the exact rational
/// carrier. For the multiplicative case the form's symbols (variables with
/// their integer multiplicities, then the constant) are folded through the
/// formal group law in the canonical variable order.
inline RationalExpr kernel_apply(const VarSpace& s, const AffineForm& form, const Kernel& k) {
    k.validate();
    switch (k.tag) {
        case KernelTag::additive:
            return RationalExpr(s, form.to_polynomial());
        case KernelTag::multiplicative: {
            RationalExpr acc = RationalExpr::zero(s);
            for (size_t v = 0; v < form.coeffs.size(); ++v) {
                if (form.coeffs[v] == 0) continue;
                acc = fgl_sum(acc, fgl_multiple(RationalExpr::variable(s, static_cast<int>(v)),
                                                form.coeffs[v], k.beta),
                              k.beta);
            }
            if (form.constant != 0)
                acc = fgl_sum(acc, RationalExpr::constant(s, form.constant), k.beta);
            return acc;
        }
        case KernelTag::elliptic:
            throw algebra_error("elliptic kernel has no rational carrier");
    }
    throw algebra_error("unreachable kernel tag");
}

} // namespace coha
