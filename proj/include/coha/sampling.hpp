#pragma once

#include "coha/theta_expr.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace coha {

/// The single documented generator all randomness flows through: SplitMix64.
/// state' = state + 0x9E3779B97F4A7C15; the output is the finalizer below.
/// Uniform doubles take the top 53 bits / 2^53. Alternate-language
/// implementations can reproduce every sample point from the seed alone.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

/// FNV-1a, used to derive per-check child seeds from (seed, check name).
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t child_seed(std::uint64_t seed, const std::string& name) {
    SplitMix64 g(seed ^ fnv1a64(name));
    return g.next();
}

/// Sampling policy for probabilistic identity checks: a box for the real and
/// imaginary parts of every variable, plus an exclusion radius around the
/// zeros of denominator theta factors. Rejected draws are redrawn from the
/// same stream, up to max_oversample * samples attempts.
struct SamplePlan {
    std::uint64_t seed = 0;
    int samples = 50;
    double re_min = -0.40, re_max = 0.40;
    double im_min = -0.20, im_max = 0.20;
    double exclusion_radius = 1e-3;
    int max_oversample = 100;

    void validate() const {
        if (samples < 1) throw theta_error("sample count must be at least 1");
        if (!(exclusion_radius > 0)) throw theta_error("exclusion radius must be positive");
    }
};

namespace detail {

inline bool point_clears_poles(const std::vector<Complex>& x,
                               const std::vector<AffineForm>& poles, Complex tau,
                               double radius) {
    for (const auto& form : poles)
        if (lattice_distance(form.eval(x), tau) < radius) return false;
    return true;
}

inline int worker_threads() {
    const char* env = std::getenv("COHA_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    return std::min<int>(n, hw == 0 ? n : static_cast<int>(hw));
}

} // namespace detail

/// Draws `plan.samples` assignments that avoid the given pole loci. Points
/// are produced by a single SplitMix64 stream (variables in space order, real
/// part then imaginary part), so the set is a pure function of the plan.
inline std::vector<std::vector<Complex>> sample_points(const VarSpace& space,
                                                       const std::vector<AffineForm>& poles,
                                                       const SamplePlan& plan, Complex tau) {
    plan.validate();
    SplitMix64 rng(plan.seed);
    std::vector<std::vector<Complex>> pts;
    long attempts = 0;
    const long max_attempts = static_cast<long>(plan.max_oversample) * plan.samples;
    while (static_cast<int>(pts.size()) < plan.samples) {
        if (attempts++ >= max_attempts)
            throw theta_error("all sample candidates rejected by pole exclusion");
        std::vector<Complex> x(space.size());
        for (int k = 0; k < space.size(); ++k) {
            double re = rng.uniform(plan.re_min, plan.re_max);
            double im = rng.uniform(plan.im_min, plan.im_max);
            x[k] = Complex(re, im);
        }
        if (detail::point_clears_poles(x, poles, tau, plan.exclusion_radius)) pts.push_back(std::move(x));
    }
    return pts;
}

/// Outcome of a sampled identity check. The deviation at one point is
/// |a-b| / max(1, |a|, |b|); the report carries the maxima over all points,
/// which are order-independent, so batches may be evaluated concurrently.
struct EqualityReport {
    int samples = 0;
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
    bool pass = false;
    double tol = 0.0;
};

template <typename F, typename G>
EqualityReport compare_sampled(const VarSpace& space, F&& eval_a, G&& eval_b,
                               const std::vector<AffineForm>& poles, const SamplePlan& plan,
                               Complex tau, double tol) {
    auto pts = sample_points(space, poles, plan, tau);
    const int n = static_cast<int>(pts.size());
    std::vector<double> abs_dev(n, 0.0), rel_dev(n, 0.0);

    auto run_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            Complex va = eval_a(pts[i]);
            Complex vb = eval_b(pts[i]);
            double d = std::abs(va - vb);
            abs_dev[i] = d;
            rel_dev[i] = d / std::max({1.0, std::abs(va), std::abs(vb)});
        }
    };

    int threads = detail::worker_threads();
    if (threads <= 1 || n < 2 * threads) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        int chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    EqualityReport rep;
    rep.samples = n;
    rep.tol = tol;
    for (int i = 0; i < n; ++i) {
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, abs_dev[i]);
        rep.max_rel_deviation = std::max(rep.max_rel_deviation, rel_dev[i]);
    }
    rep.pass = rep.max_rel_deviation <= tol;
    return rep;
}

/// Probabilistic equality for theta expressions: evaluates both sides at
/// plan-sampled points that avoid the poles of either side.
inline EqualityReport theta_equal_probabilistic(const ThetaExpr& a, const ThetaExpr& b,
                                                const SamplePlan& plan, const ThetaParams& p,
                                                double tol) {
    if (!(a.space() == b.space()))
        throw algebra_error("theta expressions over different variable spaces");
    std::vector<AffineForm> poles = a.pole_forms();
    for (auto& f : b.pole_forms()) poles.push_back(f);
    return compare_sampled(
        a.space(), [&](const std::vector<Complex>& x) { return a.eval(x, p); },
        [&](const std::vector<Complex>& x) { return b.eval(x, p); }, poles, plan, p.tau, tol);
}

/// Sampled symmetry check: invariance of e under every adjacent transposition
/// of each lambda and z block.
inline EqualityReport theta_symmetric_probabilistic(const ThetaExpr& e, const SamplePlan& plan,
                                                    const ThetaParams& p, double tol) {
    const VarSpace& s = e.space();
    EqualityReport worst;
    worst.pass = true;
    worst.tol = tol;
    auto consider = [&](const std::vector<int>& perm) {
        EqualityReport r = theta_equal_probabilistic(e, e.permute(perm), plan, p, tol);
        worst.samples = r.samples;
        worst.max_abs_deviation = std::max(worst.max_abs_deviation, r.max_abs_deviation);
        worst.max_rel_deviation = std::max(worst.max_rel_deviation, r.max_rel_deviation);
        worst.pass = worst.pass && r.pass;
    };
    for (int i = 0; i < s.vertex_count(); ++i) {
        for (int k = 0; k + 1 < s.lambda_counts()[i]; ++k) {
            std::vector<int> sigma(s.lambda_counts()[i]);
            for (size_t j = 0; j < sigma.size(); ++j) sigma[j] = static_cast<int>(j);
            std::swap(sigma[k], sigma[k + 1]);
            consider(s.lambda_block_permutation(i, sigma));
        }
    }
    for (size_t i = 0; i < s.z_counts().size(); ++i) {
        for (int k = 0; k + 1 < s.z_counts()[i]; ++k) {
            std::vector<int> sigma(s.z_counts()[i]);
            for (size_t j = 0; j < sigma.size(); ++j) sigma[j] = static_cast<int>(j);
            std::swap(sigma[k], sigma[k + 1]);
            consider(s.z_block_permutation(static_cast<int>(i), sigma));
        }
    }
    return worst;
}

} // namespace coha
