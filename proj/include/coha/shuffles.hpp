#pragma once

#include "coha/quiver.hpp"

#include <cstdint>
#include <vector>

namespace coha {

/// A single-color (n, m)-shuffle: a permutation of {0..n+m-1} preserving the
/// relative order of the first n and of the last m positions. perm[k] is the
/// image of position k.
struct BlockShuffle {
    int n = 0;
    int m = 0;
    std::vector<int> perm;
};

/// One colored shuffle: an independent block shuffle per vertex for the
/// lambda variables and per vertex for the framing variables.
struct ColoredShuffle {
    std::vector<BlockShuffle> lambda_blocks; // per vertex
    std::vector<BlockShuffle> z_blocks;      // per vertex
};

namespace detail {

/// All (n, m)-shuffles, ordered lexicographically by the sorted image set of
/// the first block. This ordering is part of the engine's determinism
/// contract.
inline std::vector<BlockShuffle> block_shuffles(int n, int m) {
    std::vector<BlockShuffle> out;
    const int total = n + m;
    std::vector<int> subset(n);
    for (int i = 0; i < n; ++i) subset[i] = i;
    while (true) {
        BlockShuffle s;
        s.n = n;
        s.m = m;
        s.perm.assign(total, -1);
        std::vector<bool> taken(total, false);
        for (int k = 0; k < n; ++k) {
            s.perm[k] = subset[k];
            taken[subset[k]] = true;
        }
        int pos = 0;
        for (int k = 0; k < total; ++k)
            if (!taken[k]) s.perm[n + pos++] = k;
        out.push_back(std::move(s));

        if (n == 0 || m == 0) break;
        // next n-combination of {0..total-1} in lexicographic order
        int i = n - 1;
        while (i >= 0 && subset[i] == total - n + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int k = i + 1; k < n; ++k) subset[k] = subset[k - 1] + 1;
    }
    return out;
}

} // namespace detail

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

inline std::uint64_t colored_shuffle_count(const DimPair& d1, const DimPair& d2) {
    std::uint64_t c = 1;
    for (size_t i = 0; i < d1.v.size(); ++i) c *= binomial(d1.v[i] + d2.v[i], d1.v[i]);
    for (size_t j = 0; j < d1.w.size(); ++j) c *= binomial(d1.w[j] + d2.w[j], d1.w[j]);
    return c;
}

/// Enumerates Sh(v1, v2) x Sh(w1, w2). The enumeration nests vertex by vertex
/// (all lambda colors first, then all framing colors) with the last color
/// varying fastest; each color runs through its block shuffles in
/// lexicographic order.
inline std::vector<ColoredShuffle> colored_shuffles(const DimPair& d1, const DimPair& d2) {
    if (d1.v.size() != d2.v.size() || d1.w.size() != d2.w.size())
        throw quiver_error("colored_shuffles: mismatched vertex counts");
    const size_t nv = d1.v.size();
    const size_t nz = d1.w.size();

    std::vector<std::vector<BlockShuffle>> choices;
    for (size_t i = 0; i < nv; ++i) choices.push_back(detail::block_shuffles(d1.v[i], d2.v[i]));
    for (size_t j = 0; j < nz; ++j) choices.push_back(detail::block_shuffles(d1.w[j], d2.w[j]));

    std::vector<ColoredShuffle> out;
    std::vector<size_t> idx(choices.size(), 0);
    while (true) {
        ColoredShuffle cs;
        for (size_t i = 0; i < nv; ++i) cs.lambda_blocks.push_back(choices[i][idx[i]]);
        for (size_t j = 0; j < nz; ++j) cs.z_blocks.push_back(choices[nv + j][idx[nv + j]]);
        out.push_back(std::move(cs));

        int k = static_cast<int>(choices.size()) - 1;
        while (k >= 0) {
            if (++idx[k] < choices[k].size()) break;
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

} // namespace coha
