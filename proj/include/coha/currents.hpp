#pragma once

#include "coha/shuffle_engine.hpp"

#include <cmath>
#include <vector>

namespace coha {

/// The degree-k monomial generator at vertex i: the element lambda^k of the
/// unit grading e_i with no framing. Coefficient of u^{-k-1} in the current
/// series attached to vertex i.
inline ShuffleElement generator(const Quiver& q, int vertex, int degree,
                                const Kernel& k = Kernel{KernelTag::additive}) {
    if (degree < 0) throw algebra_error("generator degree must be a natural number");
    DimPair grading = DimPair::unit(q.vertex_count(), vertex);
    VarSpace s = VarSpace::for_grading(grading);
    Payload p;
    if (k.tag == KernelTag::elliptic) {
        RationalExpr mono = RationalExpr::variable(s, s.lambda(vertex, 1)).pow(degree);
        p = ThetaExpr::from_rational(s, mono);
    } else {
        p = RationalExpr::variable(s, s.lambda(vertex, 1)).pow(degree);
    }
    return ShuffleElement{q, grading, k, std::move(p)};
}

/// generator(i,k) * generator(j,l) - generator(j,l) * generator(i,k).
inline ShuffleElement commutator(const Quiver& q, int i, int k, int j, int l,
                                 const Kernel& ker = Kernel{KernelTag::additive}) {
    ShuffleElement a = shuffle_product(generator(q, i, k, ker), generator(q, j, l, ker));
    ShuffleElement b = shuffle_product(generator(q, j, l, ker), generator(q, i, k, ker));
    ShuffleElement out = a;
    if (ker.tag == KernelTag::elliptic)
        out.payload = a.theta() - b.theta();
    else
        out.payload = a.rational() - b.rational();
    return out;
}

/// Evaluation data for the dynamical current: per-vertex dynamical parameters
/// and spectral inputs, plus the expansion variable.
struct DynamicalPoint {
    std::vector<Complex> lambda;
    std::vector<Complex> z;
    Complex u = 0.0;
};

/// Closed form of the plus current: theta(z+lambda+u) / (theta(z+u) theta(lambda)).
/// At u = 0 this is the Poincare section theta(z+lambda)/(theta(z) theta(lambda)).
inline Complex dynamical_current_eval(int vertex, const DynamicalPoint& pt, const ThetaParams& p,
                                      double pole_eps = 1e-9) {
    const Complex lam = pt.lambda.at(vertex);
    const Complex z = pt.z.at(vertex);
    Complex th_lam = theta_eval(lam, p);
    Complex th_zu = theta_eval(z + pt.u, p);
    if (std::abs(th_lam) < pole_eps) throw pole_error("dynamical parameter at a lattice point");
    if (std::abs(th_zu) < pole_eps) throw pole_error("spectral point z+u at a lattice point");
    return theta_eval(z + lam + pt.u, p) / (th_zu * th_lam);
}

namespace detail {

/// Step schedule for the central-difference stencils: 1e-4 for the first two
/// orders, eps^(1/(i+2)) beyond that, which balances the h^2 truncation
/// against the eps/h^i rounding floor of IEEE doubles.
inline double derivative_step(int order) {
    double balanced = std::pow(1e-16, 1.0 / (order + 2));
    return std::max(1e-4, balanced);
}

template <typename F>
Complex central_stencil(F&& f, Complex x, int order, double h) {
    switch (order) {
        case 0: return f(x);
        case 1: return (f(x + h) - f(x - h)) / (2 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        default: throw algebra_error("derivative order beyond the supported stencils");
    }
}

} // namespace detail

/// i-th derivative by a second-order central stencil plus one Richardson
/// step. Supported through order 4 (the series checks use N <= 4).
template <typename F>
Complex numeric_derivative(F&& f, Complex x, int order, double* instability = nullptr) {
    if (order == 0) return f(x);
    double h = detail::derivative_step(order);
    Complex coarse = detail::central_stencil(f, x, order, h);
    Complex fine = detail::central_stencil(f, x, order, h / 2);
    Complex refined = (4.0 * fine - coarse) / 3.0;
    if (instability) *instability = std::abs(refined - fine) / std::max(1.0, std::abs(refined));
    return refined;
}

struct TaylorReport {
    int order = 0;
    Complex series = 0.0;
    Complex closed_form = 0.0;
    double deviation = 0.0;
    bool derivative_unstable = false;
    std::vector<Complex> coefficients; // g^(i)(z), i = 0..order
};

/// Compares the truncated series sum_{i<=N} g^(i)(z) u^i / i! against the
/// closed form, where g^(i) is the i-th z-derivative of the Poincare section
/// at the vertex's (z, lambda).
inline TaylorReport taylor_identity_check(int vertex, const DynamicalPoint& pt, int order,
                                          const ThetaParams& p) {
    const Complex lam = pt.lambda.at(vertex);
    const Complex z = pt.z.at(vertex);
    Complex th_lam = theta_eval(lam, p);
    if (std::abs(th_lam) < 1e-9) throw pole_error("dynamical parameter at a lattice point");
    auto section = [&](Complex x) { return theta_eval(x + lam, p) / (theta_eval(x, p) * th_lam); };

    TaylorReport rep;
    rep.order = order;
    double fact = 1.0;
    Complex upow = 1.0;
    for (int i = 0; i <= order; ++i) {
        double wobble = 0.0;
        Complex gi = numeric_derivative(section, z, i, &wobble);
        rep.coefficients.push_back(gi);
        if (wobble > 0.05) rep.derivative_unstable = true;
        if (i > 0) {
            fact *= i;
            upow *= pt.u;
        }
        rep.series += gi * upow / fact;
    }
    DynamicalPoint shifted = pt;
    rep.closed_form = dynamical_current_eval(vertex, shifted, p);
    rep.deviation = std::abs(rep.series - rep.closed_form);
    return rep;
}

/// Least-squares slope of log(deviation) against log |u| over a ladder of
/// expansion points; for an order-N truncation the slope sits near N+1.
inline double taylor_remainder_slope(int vertex, const DynamicalPoint& base, int order,
                                     const ThetaParams& p, const std::vector<double>& magnitudes) {
    if (magnitudes.size() < 2) throw algebra_error("slope fit needs at least two magnitudes");
    Complex dir = base.u / std::abs(base.u);
    std::vector<double> xs, ys;
    for (double m : magnitudes) {
        DynamicalPoint pt = base;
        pt.u = dir * m;
        TaylorReport r = taylor_identity_check(vertex, pt, order, p);
        xs.push_back(std::log(m));
        ys.push_back(std::log(std::max(r.deviation, 1e-300)));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace coha
