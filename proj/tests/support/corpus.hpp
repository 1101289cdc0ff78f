#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f1z/loose_graph.hpp"

// Exhaustive small-graph corpora, generated up to isomorphism: loose
// trees with half-edge decorations, and connected simple graphs.  Used
// to quantify properties ("for all trees with <= 8 vertices ...")
// without hand-picking instances.

namespace testsupport {

namespace corpusdetail {

// Canonical string of a decorated rooted tree: sorted child encodings,
// with the vertex's half-edge count folded into its label.
inline std::string ahu_rooted(const std::vector<std::vector<int>>& adj,
                              const std::vector<int>& halfs, int node, int parent) {
    std::vector<std::string> kids;
    for (int w : adj[node])
        if (w != parent) kids.push_back(ahu_rooted(adj, halfs, w, node));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    s += static_cast<char>('a' + halfs[node]);
    for (const auto& k : kids) s += k;
    s += ")";
    return s;
}

inline std::vector<int> tree_centers(int n, const std::vector<std::vector<int>>& adj) {
    if (n == 1) return {0};
    std::vector<int> deg(n);
    std::vector<bool> removed(n, false);
    for (int i = 0; i < n; ++i) deg[i] = static_cast<int>(adj[i].size());
    std::vector<int> layer;
    for (int i = 0; i < n; ++i)
        if (deg[i] <= 1) layer.push_back(i);
    int remaining = n;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[v] = true;
            --remaining;
            for (int w : adj[v])
                if (!removed[w] && --deg[w] == 1) next.push_back(w);
        }
        layer = std::move(next);
    }
    std::vector<int> centers;
    for (int i = 0; i < n; ++i)
        if (!removed[i]) centers.push_back(i);
    return centers;
}

inline std::string canonical_decorated(int n, const std::vector<std::pair<int, int>>& edges,
                                       const std::vector<int>& halfs) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    auto centers = tree_centers(n, adj);
    if (centers.size() == 1) return ahu_rooted(adj, halfs, centers[0], -1);
    auto s1 = ahu_rooted(adj, halfs, centers[0], centers[1]);
    auto s2 = ahu_rooted(adj, halfs, centers[1], centers[0]);
    if (s2 < s1) std::swap(s1, s2);
    return s1 + "|" + s2;
}

// Labeled tree on {0..n-1} from a Pruefer sequence (n >= 3).
inline std::vector<std::pair<int, int>> pruefer_decode(int n, const std::vector<int>& seq) {
    std::vector<int> deg(n, 1);
    for (int s : seq) ++deg[s];
    std::vector<bool> gone(n, false);
    std::vector<std::pair<int, int>> edges;
    for (int s : seq) {
        int leaf = -1;
        for (int v = 0; v < n; ++v)
            if (!gone[v] && deg[v] == 1) {
                leaf = v;
                break;
            }
        edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
        gone[leaf] = true;
        --deg[s];
    }
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!gone[v] && deg[v] == 1) rest.push_back(v);
    edges.emplace_back(rest[0], rest[1]);
    return edges;
}

struct IntTree {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

// All trees with exactly n vertices and maximum degree <= max_degree,
// one labeled representative per isomorphism class.
inline std::vector<IntTree> int_trees(int n, int max_degree) {
    std::vector<IntTree> out;
    if (n == 1) {
        out.push_back({1, {}});
        return out;
    }
    if (n == 2) {
        if (max_degree >= 1) out.push_back({2, {{0, 1}}});
        return out;
    }
    std::set<std::string> seen;
    std::vector<int> seq(n - 2, 0);
    std::vector<int> none(n, 0);
    for (;;) {
        auto edges = pruefer_decode(n, seq);
        std::vector<int> deg(n, 0);
        for (const auto& [a, b] : edges) {
            ++deg[a];
            ++deg[b];
        }
        if (*std::max_element(deg.begin(), deg.end()) <= max_degree) {
            auto key = canonical_decorated(n, edges, none);
            if (seen.insert(key).second) out.push_back({n, edges});
        }
        int j = 0;
        while (j < n - 2 && seq[j] == n - 1) seq[j++] = 0;
        if (j == n - 2) break;
        ++seq[j];
    }
    return out;
}

inline f1z::LooseGraph to_loose_graph(const IntTree& t, const std::vector<int>& halfs) {
    f1z::LooseGraph g;
    for (int i = 0; i < t.n; ++i) g.add_vertex(std::string(1, static_cast<char>('a' + i)));
    for (const auto& [a, b] : t.edges)
        g.add_full_edge(std::string(1, static_cast<char>('a' + a)),
                        std::string(1, static_cast<char>('a' + b)));
    for (int i = 0; i < t.n; ++i)
        for (int k = 0; k < halfs[i]; ++k)
            g.add_half_edge(std::string(1, static_cast<char>('a' + i)));
    return g;
}

}  // namespace corpusdetail

// Plain trees up to isomorphism: 1..max_n vertices, max degree bounded.
inline std::vector<f1z::LooseGraph> base_trees(int max_n, int max_degree) {
    std::vector<f1z::LooseGraph> out;
    for (int n = 1; n <= max_n; ++n)
        for (const auto& t : corpusdetail::int_trees(n, max_degree))
            out.push_back(corpusdetail::to_loose_graph(t, std::vector<int>(n, 0)));
    return out;
}

// Loose trees up to isomorphism: every tree with 1..max_n vertices and
// every assignment of at most max_halfs half edges per vertex, subject
// to degree(v) = full + half <= max_total_degree.
inline std::vector<f1z::LooseGraph> decorated_trees(int max_n, int max_total_degree,
                                                    int max_halfs) {
    using namespace corpusdetail;
    std::vector<f1z::LooseGraph> out;
    for (int n = 1; n <= max_n; ++n) {
        for (const auto& t : int_trees(n, max_total_degree)) {
            std::vector<int> deg(n, 0);
            for (const auto& [a, b] : t.edges) {
                ++deg[a];
                ++deg[b];
            }
            std::vector<int> cap(n);
            for (int i = 0; i < n; ++i)
                cap[i] = std::min(max_halfs, max_total_degree - deg[i]);
            std::set<std::string> seen;
            std::vector<int> h(n, 0);
            for (;;) {
                if (seen.insert(canonical_decorated(n, t.edges, h)).second)
                    out.push_back(to_loose_graph(t, h));
                int j = 0;
                while (j < n && h[j] == cap[j]) h[j++] = 0;
                if (j == n) break;
                ++h[j];
            }
        }
    }
    return out;
}

// Connected simple graphs up to isomorphism, 1..max_n vertices (max_n
// small; the n = 6 layer alone sweeps 2^15 edge masks times 720
// permutations).
inline std::vector<f1z::LooseGraph> connected_graphs(int max_n) {
    std::vector<f1z::LooseGraph> out;
    for (int n = 1; n <= max_n; ++n) {
        int m = n * (n - 1) / 2;
        std::vector<std::vector<int>> edge_of(n, std::vector<int>(n, -1));
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                edge_of[i][j] = edge_of[j][i] = static_cast<int>(pairs.size());
                pairs.emplace_back(i, j);
            }
        // Per-permutation edge index remapping tables.
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::vector<int>> remap;
        do {
            std::vector<int> r(m);
            for (int k = 0; k < m; ++k) r[k] = edge_of[perm[pairs[k].first]][perm[pairs[k].second]];
            remap.push_back(std::move(r));
        } while (std::next_permutation(perm.begin(), perm.end()));

        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            // Connectivity via bit-spreading from vertex 0.
            std::uint32_t reach = 1, prev = 0;
            while (reach != prev) {
                prev = reach;
                for (int k = 0; k < m; ++k) {
                    if (!(mask >> k & 1)) continue;
                    std::uint32_t a = 1u << pairs[k].first, b = 1u << pairs[k].second;
                    if (reach & (a | b)) reach |= a | b;
                }
            }
            if (reach != (1u << n) - 1) continue;
            std::uint32_t best = mask;
            for (const auto& r : remap) {
                std::uint32_t img = 0;
                for (int k = 0; k < m; ++k)
                    if (mask >> k & 1) img |= 1u << r[k];
                best = std::min(best, img);
            }
            if (best != mask) continue;  // not the canonical representative
            f1z::LooseGraph g;
            for (int i = 0; i < n; ++i) g.add_vertex(std::string(1, static_cast<char>('a' + i)));
            for (int k = 0; k < m; ++k)
                if (mask >> k & 1)
                    g.add_full_edge(std::string(1, static_cast<char>('a' + pairs[k].first)),
                                    std::string(1, static_cast<char>('a' + pairs[k].second)));
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace testsupport
