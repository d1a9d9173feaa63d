#pragma once

#include "coha/shuffle_engine.hpp"

namespace coha {

/// Type A data for the sl_N shuffle conventions: dimension vectors over the
/// N-1 vertices of the chain quiver, with framings n and m on the last vertex
/// only. The framing variables are relabeled as a level-N lambda family, so
/// levels run 1..N with level-N counts (n, m).
struct TypeAConfig {
    int N = 2;
    std::vector<int> v1, v2; // per vertex, size N-1
    int n = 0, m = 0;        // framing of the last vertex, sides 1 and 2

    void validate() const {
        if (N < 2) throw algebra_error("type A rank must be at least 2");
        if (static_cast<int>(v1.size()) != N - 1 || static_cast<int>(v2.size()) != N - 1)
            throw algebra_error("type A dimension vectors must have N-1 entries");
        if (n < 0 || m < 0) throw algebra_error("negative framing");
    }

    Quiver quiver() const { return quiver_type_a(N - 1); }

    DimPair d1() const {
        std::vector<int> w(N - 1, 0);
        w[N - 2] = n;
        return DimPair(v1, w);
    }

    DimPair d2() const {
        std::vector<int> w(N - 1, 0);
        w[N - 2] = m;
        return DimPair(v2, w);
    }

    int level_count_1(int level) const { return level == N ? n : v1[level - 1]; }
    int level_count_2(int level) const { return level == N ? m : v2[level - 1]; }
    int level_total(int level) const { return level_count_1(level) + level_count_2(level); }
};

namespace detail {

/// Joint-space variable of level l (1-based index within the level): levels
/// 1..N-1 are the lambda blocks, level N is the framing block of the last
/// vertex under the relabeling.
inline int level_var(const VarSpace& joint, const TypeAConfig& cfg, int level, int index) {
    if (level < cfg.N) return joint.lambda(level - 1, index);
    return joint.z(cfg.N - 2, index);
}

} // namespace detail

/// The sl2 factor in the two-parameter specialization t1 = hbar, t2 = 0,
/// built directly from its displayed product:
///   prod theta(l'_s - l''_t + t1)/theta(l''_t - l'_s)
///   * prod theta(z''_t - l'_s + t1) * prod theta(l''_t - z'_s).
/// Lives in the joint space of (k1+k2 | n1+n2) over the one-vertex quiver;
/// t1 plays the role of hbar.
inline ThetaExpr frv_fac(int k1, int k2, int n1, int n2) {
    DimPair joint_grading({k1 + k2}, {n1 + n2});
    VarSpace s = VarSpace::for_grading(joint_grading);
    ThetaExpr acc = ThetaExpr::one(s);
    for (int a = 1; a <= k1; ++a) {
        for (int b = 1; b <= k2; ++b) {
            AffineForm num(s.size());
            num.add_var(s.lambda(0, a), 1).add_var(s.lambda(0, k1 + b), -1).add_var(s.t1(), 1);
            AffineForm den(s.size());
            den.add_var(s.lambda(0, k1 + b), 1).add_var(s.lambda(0, a), -1);
            acc *= ThetaExpr::theta(s, num, 1);
            acc *= ThetaExpr::theta(s, den, -1);
        }
    }
    for (int a = 1; a <= k1; ++a) {
        for (int b = 1; b <= n2; ++b) {
            AffineForm f(s.size());
            f.add_var(s.z(0, n1 + b), 1).add_var(s.lambda(0, a), -1).add_var(s.t1(), 1);
            acc *= ThetaExpr::theta(s, f, 1);
        }
    }
    for (int a = 1; a <= n1; ++a) {
        for (int b = 1; b <= k2; ++b) {
            AffineForm f(s.size());
            f.add_var(s.lambda(0, k1 + b), 1).add_var(s.z(0, a), -1);
            acc *= ThetaExpr::theta(s, f, 1);
        }
    }
    return acc;
}

/// The engine's elliptic fac for the framed one-vertex quiver, specialized at
/// t2 = 0 (the frv_fac comparison target).
inline ThetaExpr engine_fac_frv(int k1, int k2, int n1, int n2) {
    Quiver q = quiver_sl2();
    DimPair d1({k1}, {n1}), d2({k2}, {n2});
    ThetaExpr fac = std::get<ThetaExpr>(build_fac(d1, d2, q, Kernel{KernelTag::elliptic}));
    VarSpace s = fac.space();
    std::vector<std::optional<AffineForm>> bind(s.size());
    bind[s.t2()] = AffineForm(s.size()); // t2 := 0
    return fac.substitute(bind);
}

/// One-sided H function over the levels of a type A configuration:
///   H = prod_{l=1}^{N-1} prod_{s<=v^(l)} prod_{t<=v^(l+1)}
///       theta(l^(l+1)_t - l^(l)_s + t1)
/// with the level variables selected by `index_of(level, i)` (1-based within
/// the level) and per-level counts `count_of(level)`.
template <typename CountF, typename IndexF>
ThetaExpr konno_H_generic(const VarSpace& s, int N, CountF&& count_of, IndexF&& index_of) {
    ThetaExpr acc = ThetaExpr::one(s);
    for (int l = 1; l <= N - 1; ++l) {
        for (int a = 1; a <= count_of(l); ++a) {
            for (int b = 1; b <= count_of(l + 1); ++b) {
                AffineForm f(s.size());
                f.add_var(index_of(l + 1, b), 1).add_var(index_of(l, a), -1).add_var(s.t1(), 1);
                acc *= ThetaExpr::theta(s, f, 1);
            }
        }
    }
    return acc;
}

/// H of one side of the configuration, embedded in the joint space (side 1
/// occupies positions 1..v1 of each level, side 2 the rest).
inline ThetaExpr konno_H_side(const TypeAConfig& cfg, const VarSpace& joint, int side) {
    cfg.validate();
    auto count = [&](int l) { return side == 1 ? cfg.level_count_1(l) : cfg.level_count_2(l); };
    auto index = [&](int l, int i) {
        int offset = side == 1 ? 0 : cfg.level_count_1(l);
        return detail::level_var(joint, cfg, l, offset + i);
    };
    return konno_H_generic(joint, cfg.N, count, index);
}

/// H of the whole (joint) configuration.
inline ThetaExpr konno_H_joint(const TypeAConfig& cfg, const VarSpace& joint) {
    cfg.validate();
    auto count = [&](int l) { return cfg.level_total(l); };
    auto index = [&](int l, int i) { return detail::level_var(joint, cfg, l, i); };
    return konno_H_generic(joint, cfg.N, count, index);
}

/// One-sided H over its own (unembedded) space: the public konno_H operation.
inline ThetaExpr konno_H(int N, const std::vector<int>& v, int framing) {
    TypeAConfig cfg;
    cfg.N = N;
    cfg.v1 = v;
    cfg.v2.assign(N - 1, 0);
    cfg.n = framing;
    cfg.m = 0;
    cfg.validate();
    VarSpace s = VarSpace::for_grading(cfg.d1());
    return konno_H_side(cfg, s, 1);
}

/// H_cross as the quotient H_joint / (H_side1 * H_side2); theta exponent
/// bookkeeping cancels the like factors, leaving the cross terms.
inline ThetaExpr h_cross_quotient(const TypeAConfig& cfg, const VarSpace& joint) {
    ThetaExpr joint_H = konno_H_joint(cfg, joint);
    ThetaExpr h1 = konno_H_side(cfg, joint, 1);
    ThetaExpr h2 = konno_H_side(cfg, joint, 2);
    return joint_H * h1.inverse_single_term() * h2.inverse_single_term();
}

/// H_cross from its displayed expansion (the cross products only).
inline ThetaExpr h_cross_expanded(const TypeAConfig& cfg, const VarSpace& joint) {
    cfg.validate();
    ThetaExpr acc = ThetaExpr::one(joint);
    for (int l = 1; l <= cfg.N - 1; ++l) {
        for (int a = 1; a <= cfg.level_count_1(l); ++a) {
            for (int b = 1; b <= cfg.level_count_2(l + 1); ++b) {
                AffineForm f(joint.size());
                f.add_var(detail::level_var(joint, cfg, l + 1, cfg.level_count_1(l + 1) + b), 1)
                    .add_var(detail::level_var(joint, cfg, l, a), -1)
                    .add_var(joint.t1(), 1);
                acc *= ThetaExpr::theta(joint, f, 1);
            }
        }
        for (int b = 1; b <= cfg.level_count_1(l + 1); ++b) {
            for (int a = 1; a <= cfg.level_count_2(l); ++a) {
                AffineForm f(joint.size());
                f.add_var(detail::level_var(joint, cfg, l + 1, b), 1)
                    .add_var(detail::level_var(joint, cfg, l, cfg.level_count_1(l) + a), -1)
                    .add_var(joint.t1(), 1);
                acc *= ThetaExpr::theta(joint, f, 1);
            }
        }
    }
    return acc;
}

/// Right-hand side of the division identity fac / H_cross: per level the
/// same-vertex factor and the ratio theta(l'^(l+1) - l''^(l) - t2) /
/// theta(l'^(l+1) - l''^(l) + t1), with the overall sign
/// prod_l (-1)^(v1^(l+1) * v2^(l)) coming from flipping each theta in the
/// second framing family by oddness.
inline ThetaExpr konno_division_rhs(const TypeAConfig& cfg, const VarSpace& joint) {
    cfg.validate();
    long flips = 0;
    for (int l = 1; l <= cfg.N - 1; ++l)
        flips += static_cast<long>(cfg.level_count_1(l + 1)) * cfg.level_count_2(l);
    Rational sign = (flips % 2 == 0) ? 1 : -1;
    ThetaExpr acc = ThetaExpr::constant(joint, sign);
    for (int l = 1; l <= cfg.N - 1; ++l) {
        for (int a = 1; a <= cfg.level_count_1(l); ++a) {
            for (int b = 1; b <= cfg.level_count_2(l); ++b) {
                int first = detail::level_var(joint, cfg, l, a);
                int second = detail::level_var(joint, cfg, l, cfg.level_count_1(l) + b);
                AffineForm num(joint.size());
                num.add_var(first, 1).add_var(second, -1).add_var(joint.t1(), 1).add_var(joint.t2(), 1);
                AffineForm den(joint.size());
                den.add_var(second, 1).add_var(first, -1);
                acc *= ThetaExpr::theta(joint, num, 1);
                acc *= ThetaExpr::theta(joint, den, -1);
            }
        }
        for (int b = 1; b <= cfg.level_count_1(l + 1); ++b) {
            for (int a = 1; a <= cfg.level_count_2(l); ++a) {
                int upper = detail::level_var(joint, cfg, l + 1, b);
                int lower = detail::level_var(joint, cfg, l, cfg.level_count_1(l) + a);
                AffineForm num(joint.size());
                num.add_var(upper, 1).add_var(lower, -1).add_var(joint.t2(), -1);
                AffineForm den(joint.size());
                den.add_var(upper, 1).add_var(lower, -1).add_var(joint.t1(), 1);
                acc *= ThetaExpr::theta(joint, num, 1);
                acc *= ThetaExpr::theta(joint, den, -1);
            }
        }
    }
    return acc;
}

struct DivisionCheckReport {
    EqualityReport general;
    EqualityReport specialized; // at t1 = -1, t2 = 0
    bool pass = false;
};

/// Verifies fac / H_cross against the displayed right-hand side, both with
/// free parameters and under the specialization t1 = -1, t2 = 0.
inline DivisionCheckReport konno_division_check(const TypeAConfig& cfg, const SamplePlan& plan,
                                                const ThetaParams& params, double tol) {
    cfg.validate();
    Quiver q = cfg.quiver();
    VarSpace joint = VarSpace::for_grading(cfg.d1() + cfg.d2());
    ThetaExpr fac = std::get<ThetaExpr>(build_fac(cfg.d1(), cfg.d2(), q, Kernel{KernelTag::elliptic}));
    ThetaExpr lhs = fac * h_cross_quotient(cfg, joint).inverse_single_term();
    ThetaExpr rhs = konno_division_rhs(cfg, joint);

    DivisionCheckReport rep;
    rep.general = theta_equal_probabilistic(lhs, rhs, plan, params, tol);

    std::vector<std::optional<AffineForm>> bind(joint.size());
    AffineForm minus_one(joint.size());
    minus_one.constant = -1;
    bind[joint.t1()] = minus_one;
    bind[joint.t2()] = AffineForm(joint.size());
    SamplePlan plan2 = plan;
    plan2.seed = plan.seed + 1;
    rep.specialized =
        theta_equal_probabilistic(lhs.substitute(bind), rhs.substitute(bind), plan2, params, tol);
    rep.pass = rep.general.pass && rep.specialized.pass;
    return rep;
}

/// Iterated-shuffle weight function for framed sl2 in the t1 = hbar, t2 = 0
/// convention: the left-to-right product of k degree-one elements
/// 1 in SH_(1|0) against the framing carrier 1 in SH_(0|n), with t2 bound to
/// zero afterwards. Rejects k > n.
inline ShuffleElement weight_function_sl2(int k, int n) {
    if (k < 0 || n < 0) throw algebra_error("weight function needs natural arguments");
    if (k > n) throw algebra_error("weight function requires k <= n");
    Quiver q = quiver_sl2();
    Kernel ker{KernelTag::elliptic};

    ShuffleElement framing{q, DimPair({0}, {n}), ker,
                           ThetaExpr::one(VarSpace::for_grading(DimPair({0}, {n})))};
    ShuffleElement step{q, DimPair({1}, {0}), ker,
                        ThetaExpr::one(VarSpace::for_grading(DimPair({1}, {0})))};

    ShuffleElement acc = unit_element(q, ker);
    for (int i = 0; i < k; ++i) acc = shuffle_product(acc, step);
    acc = shuffle_product(acc, framing);

    VarSpace s = acc.space();
    std::vector<std::optional<AffineForm>> bind(s.size());
    bind[s.t2()] = AffineForm(s.size());
    acc.payload = acc.theta().substitute(bind);
    return acc;
}

} // namespace coha
