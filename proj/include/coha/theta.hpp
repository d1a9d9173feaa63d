#pragma once

#include "coha/rational.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace coha {

class theta_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class pole_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Modulus and target accuracy for theta evaluation.
struct ThetaParams {
    Complex tau{0.31, 0.79};
    double precision = 1e-12;

    void validate() const {
        if (!(tau.imag() > 0)) throw theta_error("theta modulus needs positive imaginary part");
        if (!(precision > 0)) throw theta_error("theta precision must be positive");
    }
};

namespace detail {
inline constexpr int kThetaIterationCap = 10000;

inline int product_truncation(double qabs, double precision) {
    // smallest n with |q|^n < precision/10
    double target = precision / 10.0;
    int n = 1;
    double qn = qabs;
    while (qn >= target) {
        qn *= qabs;
        if (++n > kThetaIterationCap)
            throw theta_error("theta precision unreachable within iteration cap");
    }
    return n;
}
} // namespace detail

/// Odd Jacobi theta function normalized so that theta'(0) = 1, evaluated by
/// the q-product
///   theta(z) = sin(pi z)/pi * prod_{n>=1} (1-q^n e^{2pi i z})(1-q^n e^{-2pi i z})/(1-q^n)^2
/// with q = e^{2 pi i tau}, truncated once |q|^n < precision/10.
inline Complex theta_eval(Complex z, const ThetaParams& p) {
    p.validate();
    const Complex q = std::exp(Complex(0, 2 * kPi) * p.tau);
    const int nmax = detail::product_truncation(std::abs(q), p.precision);
    const Complex a = std::exp(Complex(0, 2 * kPi) * z);
    Complex acc = std::sin(kPi * z) / kPi;
    Complex qn = 1.0;
    for (int n = 1; n <= nmax; ++n) {
        qn *= q;
        Complex d = 1.0 - qn;
        acc *= (1.0 - qn * a) * (1.0 - qn / a) / (d * d);
    }
    return acc;
}

/// Independent oracle: the same function through the alternating q-series
///   theta(z) = [2 sum_{n>=0} (-1)^n e^{i pi tau (n+1/2)^2} sin((2n+1) pi z)]
///              / [2 pi sum_{n>=0} (-1)^n (2n+1) e^{i pi tau (n+1/2)^2}].
inline Complex theta_eval_sum(Complex z, const ThetaParams& p) {
    p.validate();
    const double growth = std::exp(2 * kPi * std::abs(z.imag()));
    Complex num = 0.0, den = 0.0;
    double sign = 1.0;
    for (int n = 0;; ++n) {
        Complex w = std::exp(Complex(0, kPi) * p.tau * ((n + 0.5) * (n + 0.5)));
        num += sign * w * std::sin((2 * n + 1) * kPi * z);
        den += sign * w * static_cast<double>(2 * n + 1);
        double tail = std::abs(w) * std::pow(growth, 2 * n + 1);
        if (tail < p.precision / 10.0) break;
        if (n > detail::kThetaIterationCap)
            throw theta_error("theta series precision unreachable within iteration cap");
        sign = -sign;
    }
    return num / (kPi * den);
}

/// Numeric derivative of theta at 0 (central difference plus one Richardson
/// step); used by the normalization battery.
inline Complex theta_derivative_at_zero(const ThetaParams& p, double h = 1e-5) {
    auto d = [&](double step) {
        return (theta_eval(Complex(step, 0), p) - theta_eval(Complex(-step, 0), p)) / (2 * step);
    };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

/// Distance from w to the nearest period lattice point of Z + tau Z.
inline double lattice_distance(Complex w, Complex tau) {
    double b = w.imag() / tau.imag();
    double a = w.real() - b * tau.real();
    double da = a - std::round(a);
    double db = b - std::round(b);
    double best = 1e300;
    for (int ea = -1; ea <= 1; ++ea) {
        for (int eb = -1; eb <= 1; ++eb) {
            Complex off = Complex(da + ea, 0) + (db + eb) * tau;
            best = std::min(best, std::abs(off));
        }
    }
    return best;
}

} // namespace coha
