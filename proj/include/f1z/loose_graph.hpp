#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f1z/errors.hpp"

namespace f1z {

using Edge = std::pair<std::string, std::string>;  // stored with first < second

inline Edge make_edge(std::string a, std::string b) {
    if (a > b) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

// A graph whose edges may lack endpoints: a full edge has two, a half
// edge one, a free edge none.  Vertices are named by identifiers matching
// [A-Za-z0-9_]+.  Half and free edges are kept in declaration order; that
// order fixes the phantom coordinates of the completion.
class LooseGraph {
public:
    struct LooseDecl {
        bool is_half = false;        // false: free edge
        std::string vertex;          // endpoint, for half edges only
    };

    LooseGraph() = default;

    // --- construction -------------------------------------------------

    void add_vertex(const std::string& id) {
        if (has_vertex(id))
            throw std::invalid_argument("duplicate vertex '" + id + "'");
        vertices_.insert(std::lower_bound(vertices_.begin(), vertices_.end(), id), id);
    }

    void add_full_edge(const std::string& a, const std::string& b) {
        if (a == b) throw std::invalid_argument("loop at '" + a + "'");
        require_vertex(a);
        require_vertex(b);
        Edge e = make_edge(a, b);
        if (full_edges_.count(e))
            throw std::invalid_argument("duplicate edge {" + a + "," + b + "}");
        full_edges_.insert(e);
    }

    void add_half_edge(const std::string& v) {
        require_vertex(v);
        loose_decls_.push_back({true, v});
    }

    void add_free_edge() { loose_decls_.push_back({false, {}}); }

    // --- basic queries ------------------------------------------------

    const std::vector<std::string>& vertices() const { return vertices_; }

    bool has_vertex(const std::string& id) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), id);
    }

    const std::set<Edge>& full_edges() const { return full_edges_; }

    bool has_full_edge(const std::string& a, const std::string& b) const {
        return full_edges_.count(make_edge(a, b)) > 0;
    }

    const std::vector<LooseDecl>& loose_declarations() const { return loose_decls_; }

    int half_edge_count(const std::string& v) const {
        int n = 0;
        for (const auto& d : loose_decls_)
            if (d.is_half && d.vertex == v) ++n;
        return n;
    }

    int half_edge_total() const {
        int n = 0;
        for (const auto& d : loose_decls_) n += d.is_half ? 1 : 0;
        return n;
    }

    int free_edge_count() const {
        int n = 0;
        for (const auto& d : loose_decls_) n += d.is_half ? 0 : 1;
        return n;
    }

    // Degree of a real vertex: incident full edges plus half edges.
    int degree(const std::string& v) const {
        require_vertex(v);
        int d = half_edge_count(v);
        for (const auto& e : full_edges_)
            if (e.first == v || e.second == v) ++d;
        return d;
    }

    // Real vertices adjacent through full edges, in id order.
    std::vector<std::string> neighbors(const std::string& v) const {
        require_vertex(v);
        std::vector<std::string> out;
        for (const auto& e : full_edges_) {
            if (e.first == v) out.push_back(e.second);
            else if (e.second == v) out.push_back(e.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Phantom endpoint labels attached to v, in declaration order.
    // The k-th half edge at v yields "v.k"; identifiers cannot contain
    // '.', so phantom labels never collide with vertex ids.
    std::vector<std::string> phantom_labels_at(const std::string& v) const {
        std::vector<std::string> out;
        int k = 0;
        for (const auto& d : loose_decls_)
            if (d.is_half && d.vertex == v)
                out.push_back(v + "." + std::to_string(k++));
        return out;
    }

    // All completion coordinates: real vertices in id order, then one
    // phantom per half edge and two per free edge in declaration order.
    std::vector<std::string> completion_coords() const {
        std::vector<std::string> out = vertices_;
        std::map<std::string, int> half_ordinal;
        int free_ordinal = 0;
        for (const auto& d : loose_decls_) {
            if (d.is_half) {
                int k = half_ordinal[d.vertex]++;
                out.push_back(d.vertex + "." + std::to_string(k));
            } else {
                out.push_back("~" + std::to_string(free_ordinal) + ".0");
                out.push_back("~" + std::to_string(free_ordinal) + ".1");
                ++free_ordinal;
            }
        }
        return out;
    }

    bool operator==(const LooseGraph& o) const {
        if (vertices_ != o.vertices_ || full_edges_ != o.full_edges_) return false;
        if (free_edge_count() != o.free_edge_count()) return false;
        for (const auto& v : vertices_)
            if (half_edge_count(v) != o.half_edge_count(v)) return false;
        return true;
    }
    bool operator!=(const LooseGraph& o) const { return !(*this == o); }

private:
    void require_vertex(const std::string& id) const {
        if (!has_vertex(id))
            throw std::invalid_argument("undeclared vertex '" + id + "'");
    }

    std::vector<std::string> vertices_;  // sorted
    std::set<Edge> full_edges_;
    std::vector<LooseDecl> loose_decls_;
};

// --- .lg text format ---------------------------------------------------
//
//   v <id>        declare a vertex
//   e <id> <id>   full edge between two declared vertices
//   h <id>        half edge at a declared vertex
//   f             free edge
//
// '#' starts a comment; blank lines are ignored.

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline LooseGraph parse_lg(const std::string& text) {
    LooseGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        try {
            if (tok[0] == "v" && tok.size() == 2 && valid_identifier(tok[1])) {
                g.add_vertex(tok[1]);
            } else if (tok[0] == "e" && tok.size() == 3 && valid_identifier(tok[1]) &&
                       valid_identifier(tok[2])) {
                g.add_full_edge(tok[1], tok[2]);
            } else if (tok[0] == "h" && tok.size() == 2 && valid_identifier(tok[1])) {
                g.add_half_edge(tok[1]);
            } else if (tok[0] == "f" && tok.size() == 1) {
                g.add_free_edge();
            } else {
                throw ParseError("syntax error: '" + line + "'", lineno);
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return g;
}

inline std::string serialize_lg(const LooseGraph& g) {
    std::ostringstream out;
    for (const auto& v : g.vertices()) out << "v " << v << "\n";
    for (const auto& e : g.full_edges()) out << "e " << e.first << " " << e.second << "\n";
    for (const auto& v : g.vertices())
        for (int i = 0, n = g.half_edge_count(v); i < n; ++i) out << "h " << v << "\n";
    for (int i = 0, n = g.free_edge_count(); i < n; ++i) out << "f\n";
    return out.str();
}

// --- connectivity ------------------------------------------------------

// Connected components of the completion.  Each free edge is its own
// component; half edges travel with their vertex.  Components are
// ordered by smallest vertex id, with free-edge components last in
// declaration order.
inline std::vector<LooseGraph> components(const LooseGraph& g) {
    const auto& verts = g.vertices();
    std::map<std::string, std::string> root;
    for (const auto& v : verts) root[v] = v;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
        std::string r = x;
        while (root[r] != r) r = root[r];
        root[x] = r;
        return r;
    };
    for (const auto& e : g.full_edges()) {
        auto ra = find(e.first), rb = find(e.second);
        if (ra != rb) root[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<std::string, std::vector<std::string>> groups;  // root -> members
    for (const auto& v : verts) groups[find(v)].push_back(v);

    std::vector<LooseGraph> out;
    for (const auto& [r, members] : groups) {
        LooseGraph c;
        for (const auto& v : members) c.add_vertex(v);
        for (const auto& e : g.full_edges())
            if (find(e.first) == r) c.add_full_edge(e.first, e.second);
        for (const auto& d : g.loose_declarations())
            if (d.is_half && find(d.vertex) == r) c.add_half_edge(d.vertex);
        out.push_back(std::move(c));
    }
    for (const auto& d : g.loose_declarations()) {
        if (!d.is_half) {
            LooseGraph c;
            c.add_free_edge();
            out.push_back(std::move(c));
        }
    }
    return out;
}

// The empty graph counts as connected.
inline bool is_connected(const LooseGraph& g) { return components(g).size() <= 1; }

// A loose tree: connected, and the completion is acyclic.  Since real
// vertices can only be joined by full edges, this is equivalent to
// |full edges| == |vertices| - 1 for a nonempty connected graph.
inline bool is_loose_tree(const LooseGraph& g) {
    if (!is_connected(g)) return false;
    if (g.vertices().empty()) return g.free_edge_count() == 0 && g.half_edge_total() == 0;
    return static_cast<int>(g.full_edges().size()) ==
           static_cast<int>(g.vertices().size()) - 1;
}

// --- resolution --------------------------------------------------------

// Replace the full edge {x, y} by a half edge at x and a half edge at y.
// Degrees are unchanged; the completion gains two phantom endpoints, so
// the ambient dimension grows by exactly 2.
inline LooseGraph resolve_edge(const LooseGraph& g, const std::string& x,
                               const std::string& y) {
    if (!g.has_full_edge(x, y))
        throw std::invalid_argument("no full edge {" + x + "," + y + "}");
    LooseGraph out;
    for (const auto& v : g.vertices()) out.add_vertex(v);
    for (const auto& e : g.full_edges())
        if (e != make_edge(x, y)) out.add_full_edge(e.first, e.second);
    for (const auto& d : g.loose_declarations())
        d.is_half ? out.add_half_edge(d.vertex) : out.add_free_edge();
    out.add_half_edge(std::min(x, y));
    out.add_half_edge(std::max(x, y));
    return out;
}

// --- spanning loose tree ----------------------------------------------

struct SpanningSelection {
    std::set<Edge> tree_edges;
    std::vector<Edge> chords;  // non-tree full edges, lexicographic
};

// Deterministic BFS spanning tree: start from the lexicographically
// smallest vertex id, visit neighbors in id order.  Half and free edges
// never participate (they cannot close cycles).
inline SpanningSelection spanning_loose_tree(const LooseGraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
    SpanningSelection sel;
    if (g.vertices().empty()) return sel;
    std::set<std::string> seen;
    std::queue<std::string> q;
    q.push(g.vertices().front());
    seen.insert(g.vertices().front());
    while (!q.empty()) {
        std::string v = q.front();
        q.pop();
        for (const auto& w : g.neighbors(v)) {
            if (seen.insert(w).second) {
                sel.tree_edges.insert(make_edge(v, w));
                q.push(w);
            }
        }
    }
    for (const auto& e : g.full_edges())
        if (!sel.tree_edges.count(e)) sel.chords.push_back(e);
    return sel;
}

// --- boundary / inner decomposition ------------------------------------

struct BoundaryInner {
    std::vector<std::string> boundary;  // degree-1 reals, then phantom labels
    std::vector<std::string> inner;     // degree >= 2 reals, id order
};

inline BoundaryInner boundary_and_inner(const LooseGraph& g) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    BoundaryInner out;
    for (const auto& v : g.vertices()) {
        int d = g.degree(v);
        if (d == 1) out.boundary.push_back(v);
        else if (d >= 2) out.inner.push_back(v);
    }
    auto coords = g.completion_coords();
    for (std::size_t i = g.vertices().size(); i < coords.size(); ++i)
        out.boundary.push_back(coords[i]);
    return out;
}

}  // namespace f1z
