#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coha {

class quiver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One arrow of a quiver together with the torus weights (m_h, m_hstar)
/// attached to it and to its reversed partner in the doubled quiver.
struct Arrow {
    int src = 0;
    int tgt = 0;
    int m_h = 0;
    int m_hstar = 0;

    bool operator==(const Arrow&) const = default;
};

/// A quiver as pure combinatorial data: an ordered vertex list and an ordered
/// arrow list. Self-loops are allowed. All internal orderings (variable
/// indexing, shuffle blocks, default weights) follow the declared sequences,
/// so outputs are deterministic functions of the input file.
struct Quiver {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;

    int vertex_count() const { return static_cast<int>(vertices.size()); }

    int vertex_index(const std::string& name) const {
        for (int i = 0; i < vertex_count(); ++i)
            if (vertices[i] == name) return i;
        throw quiver_error("unknown vertex identifier: " + name);
    }

    bool operator==(const Quiver&) const = default;
};

/// A pair of dimension vectors (v, w) indexed by vertex position.
struct DimPair {
    std::vector<int> v;
    std::vector<int> w;

    DimPair() = default;
    DimPair(std::vector<int> v_, std::vector<int> w_) : v(std::move(v_)), w(std::move(w_)) {}

    static DimPair zero(int vertex_count) {
        return DimPair(std::vector<int>(vertex_count, 0), std::vector<int>(vertex_count, 0));
    }

    static DimPair unit(int vertex_count, int vertex) {
        DimPair d = zero(vertex_count);
        d.v.at(vertex) = 1;
        return d;
    }

    DimPair operator+(const DimPair& o) const {
        if (v.size() != o.v.size() || w.size() != o.w.size())
            throw quiver_error("dimension vectors have mismatched vertex counts");
        DimPair r = *this;
        for (size_t i = 0; i < v.size(); ++i) r.v[i] += o.v[i];
        for (size_t i = 0; i < w.size(); ++i) r.w[i] += o.w[i];
        return r;
    }

    bool operator==(const DimPair&) const = default;
};

/// Default two-torus weights: for each ordered vertex pair with a parallel
/// arrows enumerated h_1..h_a in declaration order, arrow h_p gets
/// m_h = a+2-2p and m_hstar = -a+2p. The sum m_h + m_hstar is always 2.
inline std::vector<std::pair<int, int>> default_torus_weights(const Quiver& q) {
    std::map<std::pair<int, int>, int> parallel_count;
    for (const Arrow& a : q.arrows) parallel_count[{a.src, a.tgt}]++;

    std::map<std::pair<int, int>, int> seen;
    std::vector<std::pair<int, int>> weights;
    weights.reserve(q.arrows.size());
    for (const Arrow& arr : q.arrows) {
        int a = parallel_count[{arr.src, arr.tgt}];
        int p = ++seen[{arr.src, arr.tgt}]; // 1-based position among parallel arrows
        weights.emplace_back(a + 2 - 2 * p, -a + 2 * p);
    }
    return weights;
}

/// The framed quiver datum: one framing node per vertex with nonzero framing
/// dimension, and one framing arrow from that vertex to its framing node.
struct FramedQuiver {
    Quiver base;
    std::vector<int> w;                             // framing dimension per base vertex
    std::vector<int> framed_vertices;               // base vertices with w > 0, in order
    std::vector<std::string> framing_nodes;         // one per framed vertex
    std::vector<std::pair<int, int>> framing_arrows; // (base vertex, framing node index)
};

inline FramedQuiver build_framed_quiver(const Quiver& q, const std::vector<int>& w) {
    if (static_cast<int>(w.size()) != q.vertex_count())
        throw quiver_error("framing vector does not cover the vertex set");
    FramedQuiver fq;
    fq.base = q;
    fq.w = w;
    for (int i = 0; i < q.vertex_count(); ++i) {
        if (w[i] < 0) throw quiver_error("negative framing dimension");
        if (w[i] == 0) continue;
        int node = static_cast<int>(fq.framing_nodes.size());
        fq.framed_vertices.push_back(i);
        fq.framing_nodes.push_back("w[" + q.vertices[i] + "]");
        fq.framing_arrows.emplace_back(i, node);
    }
    return fq;
}

inline FramedQuiver build_framed_quiver(const Quiver& q, const std::map<std::string, int>& w) {
    std::vector<int> wv(q.vertex_count(), 0);
    for (const auto& [name, n] : w) wv[q.vertex_index(name)] = n;
    return build_framed_quiver(q, wv);
}

// Built-in quivers used throughout the verification suites.

/// One vertex, no arrows (sl2).
inline Quiver quiver_sl2() { return Quiver{{"1"}, {}}; }

/// One vertex, one self-loop with the default weights (1, 1).
inline Quiver quiver_jordan() { return Quiver{{"1"}, {Arrow{0, 0, 1, 1}}}; }

/// Type A chain with n vertices and arrows i -> i+1, default weights (1, 1).
inline Quiver quiver_type_a(int vertex_count) {
    Quiver q;
    for (int i = 1; i <= vertex_count; ++i) q.vertices.push_back(std::to_string(i));
    for (int i = 0; i + 1 < vertex_count; ++i) q.arrows.push_back(Arrow{i, i + 1, 1, 1});
    return q;
}

/// Parses the quiver file format:
///   {"vertices": [...],
///    "arrows": [{"src":.., "tgt":.., "m_h":.., "m_hstar":..}, ...],
///    "framing": {vertex: nat}}
/// Arrows lacking both weight keys receive default_torus_weights. The optional
/// framing block is returned separately as a dimension vector.
inline std::pair<Quiver, std::vector<int>> quiver_from_json(const nlohmann::json& j) {
    Quiver q;
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw quiver_error("quiver file needs a \"vertices\" array");
    for (const auto& v : j["vertices"])
        q.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());

    struct PendingArrow {
        Arrow arrow;
        bool has_weights;
    };
    std::vector<PendingArrow> pending;
    if (j.contains("arrows")) {
        for (const auto& a : j["arrows"]) {
            Arrow arr;
            auto vertex_of = [&](const nlohmann::json& x) {
                return q.vertex_index(x.is_string() ? x.get<std::string>() : x.dump());
            };
            arr.src = vertex_of(a.at("src"));
            arr.tgt = vertex_of(a.at("tgt"));
            bool has = a.contains("m_h") || a.contains("m_hstar");
            if (has) {
                arr.m_h = a.value("m_h", 0);
                arr.m_hstar = a.value("m_hstar", 0);
            }
            pending.push_back({arr, has});
        }
    }
    q.arrows.reserve(pending.size());
    for (const auto& p : pending) q.arrows.push_back(p.arrow);
    auto defaults = default_torus_weights(q);
    for (size_t i = 0; i < pending.size(); ++i) {
        if (!pending[i].has_weights) {
            q.arrows[i].m_h = defaults[i].first;
            q.arrows[i].m_hstar = defaults[i].second;
        }
    }

    std::vector<int> framing(q.vertex_count(), 0);
    if (j.contains("framing")) {
        for (const auto& [name, n] : j["framing"].items())
            framing[q.vertex_index(name)] = n.get<int>();
    }
    return {q, framing};
}

} // namespace coha
