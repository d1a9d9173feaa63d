#pragma once

#include "coha/kernel.hpp"
#include "coha/quiver.hpp"
#include "coha/sampling.hpp"
#include "coha/shuffles.hpp"

#include <functional>
#include <variant>

namespace coha {

using Payload = std::variant<RationalExpr, ThetaExpr>;

/// A graded element of the framed shuffle algebra: a kernel-tagged payload in
/// the variable space of its grading, assumed symmetric under the product of
/// symmetric groups of the grading.
struct ShuffleElement {
    Quiver quiver;
    DimPair grading;
    Kernel kernel;
    Payload payload;

    const RationalExpr& rational() const {
        if (!std::holds_alternative<RationalExpr>(payload))
            throw algebra_error("element does not carry a rational payload");
        return std::get<RationalExpr>(payload);
    }

    const ThetaExpr& theta() const {
        if (!std::holds_alternative<ThetaExpr>(payload))
            throw algebra_error("element does not carry a theta payload");
        return std::get<ThetaExpr>(payload);
    }

    VarSpace space() const { return VarSpace::for_grading(grading); }
};

namespace detail {

/// Embedding of the first factor's variables into the joint namespace:
/// indices are preserved verbatim.
inline std::vector<int> first_embedding(const VarSpace& from, const VarSpace& joint) {
    std::vector<int> map(from.size());
    for (int i = 0; i < from.vertex_count(); ++i)
        for (int s = 1; s <= from.lambda_counts()[i]; ++s)
            map[from.lambda(i, s)] = joint.lambda(i, s);
    for (size_t j = 0; j < from.z_counts().size(); ++j)
        for (int t = 1; t <= from.z_counts()[j]; ++t)
            map[from.z(static_cast<int>(j), t)] = joint.z(static_cast<int>(j), t);
    map[from.t1()] = joint.t1();
    map[from.t2()] = joint.t2();
    return map;
}

/// Embedding of the second factor: lambda indices shift by v1 and z indices
/// by w1 per vertex.
inline std::vector<int> second_embedding(const VarSpace& from, const VarSpace& joint,
                                         const DimPair& d1) {
    std::vector<int> map(from.size());
    for (int i = 0; i < from.vertex_count(); ++i)
        for (int s = 1; s <= from.lambda_counts()[i]; ++s)
            map[from.lambda(i, s)] = joint.lambda(i, s + d1.v[i]);
    for (size_t j = 0; j < from.z_counts().size(); ++j)
        for (int t = 1; t <= from.z_counts()[j]; ++t)
            map[from.z(static_cast<int>(j), t)] = joint.z(static_cast<int>(j), t + d1.w[j]);
    map[from.t1()] = joint.t1();
    map[from.t2()] = joint.t2();
    return map;
}

/// Enumerates the linear forms of the same-vertex factor: for every vertex i,
/// s <= v1^i, t <= v2^i one numerator form lam'_s - lam''_t + t1 + t2 and one
/// denominator form lam''_t - lam'_s, in the joint namespace.
inline void visit_fac1_forms(const DimPair& d1, const DimPair& d2, const VarSpace& joint,
                             const std::function<void(const AffineForm&, const AffineForm&)>& visit) {
    for (size_t i = 0; i < d1.v.size(); ++i) {
        for (int s = 1; s <= d1.v[i]; ++s) {
            for (int t = 1; t <= d2.v[i]; ++t) {
                int first = joint.lambda(static_cast<int>(i), s);
                int second = joint.lambda(static_cast<int>(i), d1.v[i] + t);
                AffineForm num(joint.size());
                num.add_var(first, 1).add_var(second, -1).add_var(joint.t1(), 1).add_var(joint.t2(), 1);
                AffineForm den(joint.size());
                den.add_var(second, 1).add_var(first, -1);
                visit(num, den);
            }
        }
    }
}

/// Enumerates the arrow and framing forms of equ-fac2 in declaration order:
/// per arrow h the factors (lam''^{in} - lam'^{out} + m_h t1) and
/// (lam''^{out} - lam'^{in} + m_{h*} t2); per vertex the framing factors
/// (z'' - lam' + t1) and (lam'' - z' + t2).
inline void visit_fac2_forms(const DimPair& d1, const DimPair& d2, const Quiver& q,
                             const VarSpace& joint,
                             const std::function<void(const AffineForm&)>& visit) {
    for (const Arrow& h : q.arrows) {
        const int out = h.src, in = h.tgt;
        for (int s = 1; s <= d1.v[out]; ++s) {
            for (int t = 1; t <= d2.v[in]; ++t) {
                AffineForm f(joint.size());
                f.add_var(joint.lambda(in, d1.v[in] + t), 1)
                    .add_var(joint.lambda(out, s), -1)
                    .add_var(joint.t1(), h.m_h);
                visit(f);
            }
        }
        for (int s = 1; s <= d1.v[in]; ++s) {
            for (int t = 1; t <= d2.v[out]; ++t) {
                AffineForm f(joint.size());
                f.add_var(joint.lambda(out, d1.v[out] + t), 1)
                    .add_var(joint.lambda(in, s), -1)
                    .add_var(joint.t2(), h.m_hstar);
                visit(f);
            }
        }
    }
    for (int i = 0; i < q.vertex_count(); ++i) {
        for (int s = 1; s <= d1.v[i]; ++s) {
            for (int t = 1; t <= d2.w[i]; ++t) {
                AffineForm f(joint.size());
                f.add_var(joint.z(i, d1.w[i] + t), 1)
                    .add_var(joint.lambda(i, s), -1)
                    .add_var(joint.t1(), 1);
                visit(f);
            }
        }
        for (int s = 1; s <= d1.w[i]; ++s) {
            for (int t = 1; t <= d2.v[i]; ++t) {
                AffineForm f(joint.size());
                f.add_var(joint.lambda(i, d1.v[i] + t), 1)
                    .add_var(joint.z(i, s), -1)
                    .add_var(joint.t2(), 1);
                visit(f);
            }
        }
    }
}

} // namespace detail

/// Same-vertex shuffle factor in the joint namespace of d1 + d2.
inline Payload build_fac1(const DimPair& d1, const DimPair& d2, const Kernel& k) {
    VarSpace joint = VarSpace::for_grading(d1 + d2);
    if (k.tag == KernelTag::elliptic) {
        ThetaExpr acc = ThetaExpr::one(joint);
        detail::visit_fac1_forms(d1, d2, joint, [&](const AffineForm& num, const AffineForm& den) {
            acc *= ThetaExpr::theta(joint, num, 1);
            acc *= ThetaExpr::theta(joint, den, -1);
        });
        return acc;
    }
    RationalExpr acc = RationalExpr::one(joint);
    detail::visit_fac1_forms(d1, d2, joint, [&](const AffineForm& num, const AffineForm& den) {
        acc *= kernel_apply(joint, num, k) / kernel_apply(joint, den, k);
    });
    return acc;
}

/// Arrow and framing factor in the joint namespace of d1 + d2.
inline Payload build_fac2(const DimPair& d1, const DimPair& d2, const Quiver& q, const Kernel& k) {
    VarSpace joint = VarSpace::for_grading(d1 + d2);
    if (k.tag == KernelTag::elliptic) {
        ThetaExpr acc = ThetaExpr::one(joint);
        detail::visit_fac2_forms(d1, d2, q, joint,
                                 [&](const AffineForm& f) { acc *= ThetaExpr::theta(joint, f, 1); });
        return acc;
    }
    RationalExpr acc = RationalExpr::one(joint);
    detail::visit_fac2_forms(d1, d2, q, joint,
                             [&](const AffineForm& f) { acc *= kernel_apply(joint, f, k); });
    return acc;
}

/// fac = fac1 * fac2.
inline Payload build_fac(const DimPair& d1, const DimPair& d2, const Quiver& q, const Kernel& k) {
    Payload a = build_fac1(d1, d2, k);
    Payload b = build_fac2(d1, d2, q, k);
    if (k.tag == KernelTag::elliptic)
        return std::get<ThetaExpr>(a) * std::get<ThetaExpr>(b);
    return std::get<RationalExpr>(a) * std::get<RationalExpr>(b);
}

/// The unit: grading zero, payload 1.
inline ShuffleElement unit_element(const Quiver& q, const Kernel& k) {
    DimPair zero = DimPair::zero(q.vertex_count());
    VarSpace s = VarSpace::for_grading(zero);
    Payload p;
    if (k.tag == KernelTag::elliptic)
        p = ThetaExpr::one(s);
    else
        p = RationalExpr::one(s);
    return ShuffleElement{q, zero, k, std::move(p)};
}

/// The graded shuffle product: sum over colored shuffles of the permuted
/// product f * g * fac, with the second factor embedded by the index shift.
/// Terms are summed in the lexicographic shuffle order.
inline ShuffleElement shuffle_product(const ShuffleElement& f, const ShuffleElement& g) {
    if (!(f.kernel == g.kernel)) throw algebra_error("shuffle product: kernel mismatch");
    if (!(f.quiver == g.quiver)) throw algebra_error("shuffle product: quiver mismatch");
    const DimPair joint_grading = f.grading + g.grading;
    const VarSpace joint = VarSpace::for_grading(joint_grading);
    const VarSpace fs = f.space();
    const VarSpace gs = g.space();
    const auto fmap = detail::first_embedding(fs, joint);
    const auto gmap = detail::second_embedding(gs, joint, f.grading);
    const auto shuffles = colored_shuffles(f.grading, g.grading);

    ShuffleElement out{f.quiver, joint_grading, f.kernel, {}};
    if (f.kernel.tag == KernelTag::elliptic) {
        ThetaExpr base = f.theta().remap_space(joint, fmap) * g.theta().remap_space(joint, gmap) *
                         std::get<ThetaExpr>(build_fac(f.grading, g.grading, f.quiver, f.kernel));
        ThetaExpr acc = ThetaExpr::zero(joint);
        for (const auto& cs : shuffles) acc += base.permute(joint.permutation_of(cs));
        out.payload = std::move(acc);
    } else {
        RationalExpr base = f.rational().remap_space(joint, fmap) *
                            g.rational().remap_space(joint, gmap) *
                            std::get<RationalExpr>(build_fac(f.grading, g.grading, f.quiver, f.kernel));
        RationalExpr acc = RationalExpr::zero(joint);
        for (const auto& cs : shuffles) acc += base.permute(joint.permutation_of(cs));
        out.payload = std::move(acc);
    }
    return out;
}

/// Specialization at hbar = t1 + t2 = 0, realized as t2 := -t1.
inline ShuffleElement classical_limit(const ShuffleElement& e) {
    ShuffleElement out = e;
    const VarSpace s = e.space();
    if (std::holds_alternative<RationalExpr>(e.payload)) {
        std::vector<std::optional<RationalExpr>> bind(s.size());
        bind[s.t2()] = -RationalExpr::variable(s, s.t1());
        out.payload = e.rational().substitute(bind);
    } else {
        std::vector<std::optional<AffineForm>> bind(s.size());
        bind[s.t2()] = AffineForm::var(s, s.t1(), -1);
        out.payload = e.theta().substitute(bind);
    }
    return out;
}

/// Exact symmetry check for rational payloads: invariance under every
/// adjacent transposition of each block.
inline bool is_symmetric_exact(const ShuffleElement& e) {
    const RationalExpr& p = e.rational();
    const VarSpace s = e.space();
    for (int i = 0; i < s.vertex_count(); ++i) {
        for (int k = 0; k + 1 < s.lambda_counts()[i]; ++k) {
            std::vector<int> sigma(s.lambda_counts()[i]);
            for (size_t j = 0; j < sigma.size(); ++j) sigma[j] = static_cast<int>(j);
            std::swap(sigma[k], sigma[k + 1]);
            if (!p.permute(s.lambda_block_permutation(i, sigma)).equals_exact(p)) return false;
        }
    }
    for (size_t i = 0; i < s.z_counts().size(); ++i) {
        for (int k = 0; k + 1 < s.z_counts()[i]; ++k) {
            std::vector<int> sigma(s.z_counts()[i]);
            for (size_t j = 0; j < sigma.size(); ++j) sigma[j] = static_cast<int>(j);
            std::swap(sigma[k], sigma[k + 1]);
            if (!p.permute(s.z_block_permutation(static_cast<int>(i), sigma)).equals_exact(p))
                return false;
        }
    }
    return true;
}

enum class EqualityMode { exact, sampled };

struct AssociativityReport {
    bool pass = false;
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
    size_t lhs_terms = 0;
    size_t rhs_terms = 0;
};

/// Compares (f * g) * h with f * (g * h).
inline AssociativityReport verify_associativity(const ShuffleElement& f, const ShuffleElement& g,
                                                const ShuffleElement& h, EqualityMode mode,
                                                const SamplePlan& plan = {},
                                                const ThetaParams& params = {}, double tol = 1e-8) {
    ShuffleElement lhs = shuffle_product(shuffle_product(f, g), h);
    ShuffleElement rhs = shuffle_product(f, shuffle_product(g, h));
    AssociativityReport rep;
    if (mode == EqualityMode::exact) {
        rep.pass = lhs.rational().equals_exact(rhs.rational());
        rep.lhs_terms = lhs.rational().num().terms().size();
        rep.rhs_terms = rhs.rational().num().terms().size();
    } else {
        EqualityReport r = theta_equal_probabilistic(lhs.theta(), rhs.theta(), plan, params, tol);
        rep.pass = r.pass;
        rep.max_abs_deviation = r.max_abs_deviation;
        rep.max_rel_deviation = r.max_rel_deviation;
        rep.lhs_terms = lhs.theta().term_count();
        rep.rhs_terms = rhs.theta().term_count();
    }
    return rep;
}

} // namespace coha
