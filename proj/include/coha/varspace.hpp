#pragma once

#include "coha/quiver.hpp"
#include "coha/shuffles.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace coha {

class varspace_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The variable namespace attached to a grading (v, w): per vertex i the
/// lambda variables l[i,1..v^i], per vertex j the framing variables
/// zf[j,1..w^j], then the global torus parameters t1, t2. The flat index
/// order (all lambdas by vertex then index, all z by vertex then index,
/// then t1, t2) is the canonical variable order everywhere: monomial
/// comparison, printing, sampling.
class VarSpace {
public:
    VarSpace() = default;

    VarSpace(std::vector<int> lambda_counts, std::vector<int> z_counts)
        : lambda_counts_(std::move(lambda_counts)), z_counts_(std::move(z_counts)) {
        lambda_offsets_.resize(lambda_counts_.size());
        int off = 0;
        for (size_t i = 0; i < lambda_counts_.size(); ++i) {
            lambda_offsets_[i] = off;
            off += lambda_counts_[i];
        }
        z_offsets_.resize(z_counts_.size());
        for (size_t j = 0; j < z_counts_.size(); ++j) {
            z_offsets_[j] = off;
            off += z_counts_[j];
        }
        t1_ = off;
        t2_ = off + 1;
    }

    static VarSpace for_grading(const DimPair& d) { return VarSpace(d.v, d.w); }

    int size() const { return t2_ + 1; }
    int vertex_count() const { return static_cast<int>(lambda_counts_.size()); }
    const std::vector<int>& lambda_counts() const { return lambda_counts_; }
    const std::vector<int>& z_counts() const { return z_counts_; }

    /// Flat index of l[vertex, s] with s 1-based.
    int lambda(int vertex, int s) const {
        if (vertex < 0 || vertex >= vertex_count() || s < 1 || s > lambda_counts_[vertex])
            throw varspace_error("lambda variable index out of range");
        return lambda_offsets_[vertex] + s - 1;
    }

    /// Flat index of zf[vertex, t] with t 1-based.
    int z(int vertex, int t) const {
        if (vertex < 0 || vertex >= static_cast<int>(z_counts_.size()) || t < 1 || t > z_counts_[vertex])
            throw varspace_error("z variable index out of range");
        return z_offsets_[vertex] + t - 1;
    }

    int t1() const { return t1_; }
    int t2() const { return t2_; }

    std::string name(int index) const {
        if (index == t1_) return "t1";
        if (index == t2_) return "t2";
        for (size_t i = 0; i < lambda_counts_.size(); ++i)
            if (index >= lambda_offsets_[i] && index < lambda_offsets_[i] + lambda_counts_[i])
                return "l[" + std::to_string(i + 1) + "," +
                       std::to_string(index - lambda_offsets_[i] + 1) + "]";
        for (size_t j = 0; j < z_counts_.size(); ++j)
            if (index >= z_offsets_[j] && index < z_offsets_[j] + z_counts_[j])
                return "zf[" + std::to_string(j + 1) + "," +
                       std::to_string(index - z_offsets_[j] + 1) + "]";
        throw varspace_error("variable index out of range");
    }

    bool operator==(const VarSpace& o) const {
        return lambda_counts_ == o.lambda_counts_ && z_counts_ == o.z_counts_;
    }

    /// Identity mapping on variable indices.
    std::vector<int> identity_permutation() const {
        std::vector<int> p(size());
        std::iota(p.begin(), p.end(), 0);
        return p;
    }

    /// Flattens a colored shuffle into a permutation of this space's indices
    /// (t1, t2 fixed). Requires the shuffle's block sizes to match the
    /// per-vertex variable counts.
    std::vector<int> permutation_of(const ColoredShuffle& cs) const {
        if (static_cast<int>(cs.lambda_blocks.size()) != vertex_count() ||
            cs.z_blocks.size() != z_counts_.size())
            throw varspace_error("colored shuffle has wrong number of colors");
        std::vector<int> p = identity_permutation();
        for (int i = 0; i < vertex_count(); ++i) {
            const auto& b = cs.lambda_blocks[i];
            if (static_cast<int>(b.perm.size()) != lambda_counts_[i])
                throw varspace_error("colored shuffle block size mismatch (lambda)");
            for (int k = 0; k < lambda_counts_[i]; ++k)
                p[lambda_offsets_[i] + k] = lambda_offsets_[i] + b.perm[k];
        }
        for (size_t j = 0; j < z_counts_.size(); ++j) {
            const auto& b = cs.z_blocks[j];
            if (static_cast<int>(b.perm.size()) != z_counts_[j])
                throw varspace_error("colored shuffle block size mismatch (z)");
            for (int k = 0; k < z_counts_[j]; ++k)
                p[z_offsets_[j] + k] = z_offsets_[j] + b.perm[k];
        }
        return p;
    }

    /// Builds a per-vertex permutation acting on the lambda block of `vertex`
    /// only, from a permutation `sigma` of {0..v^i-1} (position k renamed to
    /// sigma[k]).
    std::vector<int> lambda_block_permutation(int vertex, const std::vector<int>& sigma) const {
        std::vector<int> p = identity_permutation();
        for (size_t k = 0; k < sigma.size(); ++k)
            p[lambda_offsets_[vertex] + k] = lambda_offsets_[vertex] + sigma[k];
        return p;
    }

    std::vector<int> z_block_permutation(int vertex, const std::vector<int>& sigma) const {
        std::vector<int> p = identity_permutation();
        for (size_t k = 0; k < sigma.size(); ++k)
            p[z_offsets_[vertex] + k] = z_offsets_[vertex] + sigma[k];
        return p;
    }

private:
    std::vector<int> lambda_counts_;
    std::vector<int> z_counts_;
    std::vector<int> lambda_offsets_;
    std::vector<int> z_offsets_;
    int t1_ = 0;
    int t2_ = 1;
};

inline std::vector<int> compose_permutations(const std::vector<int>& sigma,
                                             const std::vector<int>& tau) {
    // (sigma . tau)(k) = sigma(tau(k))
    std::vector<int> r(tau.size());
    for (size_t k = 0; k < tau.size(); ++k) r[k] = sigma[tau[k]];
    return r;
}

} // namespace coha
